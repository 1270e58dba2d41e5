use thiserror::Error;

use crate::multiplicity::Regime;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Inclusive quantities need a finite mean multiplicity.
    #[error("mean multiplicity diverges: n0 = {n0} vs n_c = {nc} ({regime:?})")]
    DivergentMean { n0: f64, nc: f64, regime: Regime },

    #[error("omega_{n} underflows even in log space (n0 = {n0}, x = {x})")]
    UnderflowRegime { n: usize, n0: f64, x: f64 },

    #[error("order n = {n} is below the minimum {min}")]
    InvalidOrder { n: usize, min: usize },

    #[error("single-particle spectrum vanishes at one of the arguments")]
    DegenerateDenominator,

    #[error("side/out decomposition undefined for zero mean momentum")]
    ZeroMeanMomentum,

    #[error("numerical breakdown at order {n}: {detail}")]
    NumericalBreakdown { n: usize, detail: String },

    #[error("permanent of size {n} exceeds the limit {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("Monte Carlo runs require an explicit seed")]
    SeedRequired,

    #[error("bootstrap relative error {achieved:.3e} exceeds requested {requested:.3e}")]
    InsufficientSamples { achieved: f64, requested: f64 },

    #[error("series did not converge within {n_max} terms (tail bound {tail:.3e})")]
    TruncationExhausted { n_max: usize, tail: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
