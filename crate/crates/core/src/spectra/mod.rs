//! Exact Gaussian kernels and the exclusive and inclusive single- and
//! two-particle spectra built from them.
//!
//! Exclusive (fixed-`n`) quantities are finite for any seed multiplicity and
//! are exposed above `n_c` as well. Inclusive quantities sum `G_n` over all
//! orders and are refused outside the convergent regime.

mod kernel;
mod momentum;
mod tables;

pub use kernel::{GaussianKernel, KernelTable};
pub use momentum::{side_out_split, Momentum3};
pub use tables::{
    correlation_grid, CorrelationKind, CorrelationPoint, CorrelationTable, Direction, SpectrumKind,
    SpectrumTable,
};

use crate::error::{Error, Result};
use crate::logspace::{ln_sum_exp, LogSum};
use crate::multiplicity::{classify_regime, ln_omegas, Regime, N_MAX};
use crate::params::DerivedParams;

/// Relative tail tolerance of inclusive kernel sums.
pub const INCLUSIVE_EPS: f64 = 1e-12;

const TABLE_CAP: usize = 4096;

pub fn kernel(d: &DerivedParams, n0: f64, n: usize) -> GaussianKernel {
    GaussianKernel::new(d, n0, n)
}

/// Inclusive sums `G(1,2) = Σ_n G_n(1,2)` for a convergent parameter set.
#[derive(Debug, Clone)]
pub struct InclusiveSpectra {
    table: KernelTable,
    /// ln(1 − n0/n_c), the geometric tail factor.
    ln_tail_factor: f64,
    eps: f64,
    n_max: usize,
}

impl InclusiveSpectra {
    pub fn new(d: &DerivedParams, n0: f64) -> Result<Self> {
        Self::with_tolerance(d, n0, INCLUSIVE_EPS, N_MAX)
    }

    pub fn with_tolerance(d: &DerivedParams, n0: f64, eps: f64, n_max: usize) -> Result<Self> {
        let regime = classify_regime(d, n0);
        if regime != Regime::Convergent {
            return Err(Error::DivergentMean {
                n0,
                nc: d.nc,
                regime,
            });
        }
        let rho = n0 / d.nc;
        // Orders needed for j_n ~ ρⁿ to fall well below eps.
        let order = if rho > 0.0 {
            ((eps.ln() - 30.0) / rho.ln())
                .ceil()
                .clamp(2.0, TABLE_CAP as f64) as usize
        } else {
            2
        };
        Ok(InclusiveSpectra {
            table: KernelTable::new(d, n0, order),
            ln_tail_factor: (-rho).ln_1p(),
            eps,
            n_max,
        })
    }

    pub fn kernels(&self) -> &KernelTable {
        &self.table
    }

    /// ln G(1,2).
    pub fn ln_g(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        if self.table.n0() == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let ln_eps = self.eps.ln();
        let mut acc = LogSum::new();
        let mut current = self.table.get(1);
        for n in 1..=self.n_max {
            acc.add(current.ln_eval(k1, k2));
            let next = self.table.get(n + 1);
            let ln_tail = next.ln_upper_bound(k1, k2) - self.ln_tail_factor;
            if ln_tail <= ln_eps + acc.ln() {
                return Ok(acc.ln());
            }
            current = next;
        }
        Err(Error::TruncationExhausted {
            n_max: self.n_max,
            tail: f64::NAN,
        })
    }

    pub fn g(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        Ok(self.ln_g(k1, k2)?.exp())
    }

    /// N₁(k) = G(k, k).
    pub fn n1(&self, k: &Momentum3) -> Result<f64> {
        self.g(k, k)
    }

    /// N₂(k1, k2) = G(1,1)G(2,2) + G(1,2)G(2,1).
    pub fn n2(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        let g11 = self.ln_g(k1, k1)?;
        let g22 = self.ln_g(k2, k2)?;
        let g12 = self.ln_g(k1, k2)?;
        Ok(ln_sum_exp([g11 + g22, 2.0 * g12]).exp())
    }

    /// C₂ = 1 + G(1,2)G(2,1)/(G(1,1)G(2,2)).
    pub fn c2(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        let g11 = self.ln_g(k1, k1)?;
        let g22 = self.ln_g(k2, k2)?;
        if g11 == f64::NEG_INFINITY || g22 == f64::NEG_INFINITY {
            return Err(Error::DegenerateDenominator);
        }
        let g12 = self.ln_g(k1, k2)?;
        Ok(1.0 + (2.0 * g12 - g11 - g22).exp())
    }
}

pub fn inclusive_g(d: &DerivedParams, n0: f64, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
    InclusiveSpectra::new(d, n0)?.g(k1, k2)
}

pub fn inclusive_n1(d: &DerivedParams, n0: f64, k: &Momentum3) -> Result<f64> {
    InclusiveSpectra::new(d, n0)?.n1(k)
}

pub fn inclusive_c2(d: &DerivedParams, n0: f64, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
    InclusiveSpectra::new(d, n0)?.c2(k1, k2)
}

/// Spectra of events with exactly `n` bosons.
#[derive(Debug, Clone)]
pub struct ExclusiveSpectra {
    n: usize,
    ln_omega: Vec<f64>,
    table: KernelTable,
}

impl ExclusiveSpectra {
    pub fn new(d: &DerivedParams, n0: f64, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidOrder { n, min: 1 });
        }
        let ln_omega = ln_omegas(d, n0, n);
        if !ln_omega[n].is_finite() {
            return Err(Error::UnderflowRegime { n, n0, x: d.x });
        }
        Ok(ExclusiveSpectra {
            n,
            ln_omega,
            table: KernelTable::new(d, n0, n),
        })
    }

    pub fn multiplicity(&self) -> usize {
        self.n
    }

    /// ln ω_k for k = 0..=n.
    pub fn ln_omegas(&self) -> &[f64] {
        &self.ln_omega
    }

    fn ln_weight(&self, order: usize) -> f64 {
        self.ln_omega[self.n - order] - self.ln_omega[self.n]
    }

    /// ln N₁⁽ⁿ⁾(k) with N₁⁽ⁿ⁾ = Σ_{i=1}^{n} (ω_{n−i}/ω_n) G_i(k,k).
    pub fn ln_n1(&self, k: &Momentum3) -> f64 {
        ln_sum_exp((1..=self.n).map(|i| self.ln_weight(i) + self.table.get(i).ln_eval(k, k)))
    }

    pub fn n1(&self, k: &Momentum3) -> f64 {
        self.ln_n1(k).exp()
    }

    /// ln N₂⁽ⁿ⁾(k1, k2).
    pub fn ln_n2(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::InvalidOrder { n: self.n, min: 2 });
        }
        let g = |m: usize, a: &Momentum3, b: &Momentum3| self.table.get(m).ln_eval(a, b);
        let mut acc = LogSum::new();
        for l in 2..=self.n {
            let w = self.ln_weight(l);
            for m in 1..l {
                acc.add(w + g(m, k1, k1) + g(l - m, k2, k2));
                acc.add(w + g(m, k1, k2) + g(l - m, k2, k1));
            }
        }
        Ok(acc.ln())
    }

    pub fn n2(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        Ok(self.ln_n2(k1, k2)?.exp())
    }

    /// C₂⁽ⁿ⁾ = n²/(n(n−1)) · N₂⁽ⁿ⁾/(N₁⁽ⁿ⁾(k1) N₁⁽ⁿ⁾(k2)).
    pub fn c2(&self, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
        let ln2 = self.ln_n2(k1, k2)?;
        let (a, b) = (self.ln_n1(k1), self.ln_n1(k2));
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateDenominator);
        }
        let n = self.n as f64;
        Ok(n / (n - 1.0) * (ln2 - a - b).exp())
    }

    /// Limit of C₂⁽ⁿ⁾ when both momenta are far outside the source's
    /// thermal width: `n/(n−1) · ω_{n−2} ω_n / ω_{n−1}²`. Equals 1 only
    /// for a Poisson ω sequence.
    pub fn c2_baseline(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::InvalidOrder { n: self.n, min: 2 });
        }
        let n = self.n;
        let w = &self.ln_omega;
        let nf = n as f64;
        Ok(nf / (nf - 1.0) * (w[n - 2] + w[n] - 2.0 * w[n - 1]).exp())
    }
}

pub fn exclusive_n1(d: &DerivedParams, n0: f64, n: usize, k: &Momentum3) -> Result<f64> {
    Ok(ExclusiveSpectra::new(d, n0, n)?.n1(k))
}

pub fn exclusive_n2(
    d: &DerivedParams,
    n0: f64,
    n: usize,
    k1: &Momentum3,
    k2: &Momentum3,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidOrder { n, min: 2 });
    }
    ExclusiveSpectra::new(d, n0, n)?.n2(k1, k2)
}

pub fn exclusive_c2(
    d: &DerivedParams,
    n0: f64,
    n: usize,
    k1: &Momentum3,
    k2: &Momentum3,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidOrder { n, min: 2 });
    }
    ExclusiveSpectra::new(d, n0, n)?.c2(k1, k2)
}
