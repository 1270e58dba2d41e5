//! Multiplicity distributions, momentum spectra and two-particle
//! Bose–Einstein correlations of a static Gaussian source of overlapping
//! boson wave packets with induced emission, plus brute-force oracles for
//! every closed form.
//!
//! Units: momenta, masses and widths in MeV, lengths in fm. See
//! [`params`] for the derived quantities `σ_T²`, `R_e²` and `x`.
//!
//! ```
//! use boseglow::params::ModelParams;
//! use boseglow::multiplicity::{CombinantSeries, multiplicity_distribution};
//!
//! let p = ModelParams::new(1.0, 5.0, 100.0, 139.57, 150.0);
//! let d = p.derive().unwrap();
//! let c = CombinantSeries::converged(&d, p.n0).unwrap();
//! let dist = multiplicity_distribution(&c).unwrap();
//! assert!((dist.total() - 1.0).abs() < 1e-9);
//! ```

pub mod cli;
pub mod error;
pub mod logspace;
pub mod multiplicity;
pub mod oracle;
pub mod output;
pub mod params;
pub mod raregas;
pub mod spectra;

pub use error::{Error, Result};
pub use multiplicity::Regime;
pub use params::{DerivedParams, ModelParams, HBARC};
pub use spectra::Momentum3;
