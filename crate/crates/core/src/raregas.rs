//! Rare-gas (`x ≫ 1`) approximations and their deviation from the exact
//! solution.
//!
//! Every function evaluates for any `x`; [`Validity`] reports whether
//! `x ≥ 100` and the size of the leading correction `n (2x)^{-3/2}` so that
//! callers can judge the approximation themselves.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::spectra::{side_out_split, CorrelationPoint, Direction, ExclusiveSpectra, Momentum3};

/// Threshold on `x` above which the expansion is flagged as valid.
pub const VALIDITY_X: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Validity {
    pub x: f64,
    pub valid: bool,
    /// `n (2x)^{-3/2}`, the relative size of the first-order terms at order `n`.
    pub correction_scale: f64,
}

pub fn validity(d: &DerivedParams, n: usize) -> Validity {
    Validity {
        x: d.x,
        valid: d.x >= VALIDITY_X,
        correction_scale: n as f64 * expansion_parameter(d),
    }
}

/// `(2x)^{-3/2}`.
pub fn expansion_parameter(d: &DerivedParams) -> f64 {
    (2.0 * d.x).powf(-1.5)
}

/// `C_n ≈ n0ⁿ n⁻⁴ (2/x)^{(3/2)(n−1)}`.
pub fn rare_combinant(d: &DerivedParams, n0: f64, n: usize) -> f64 {
    let nf = n as f64;
    (nf * n0.ln() - 4.0 * nf.ln() + 1.5 * (nf - 1.0) * (2.0 / d.x).ln()).exp()
}

/// `G_n ≈ j_n exp(−n(k1² + k2²)/(2σ_T²) − R_e² Δk²/(2n))` with
/// `j_n = n^{5/2} C_n/(πσ_T²)^{3/2}`.
pub fn rare_kernel(d: &DerivedParams, n0: f64, n: usize, k1: &Momentum3, k2: &Momentum3) -> f64 {
    let nf = n as f64;
    let jn = nf.powf(2.5) * rare_combinant(d, n0, n) / (PI * d.sigma_t2).powf(1.5);
    let dk = *k1 - *k2;
    jn * (-nf * (k1.norm2() + k2.norm2()) / (2.0 * d.sigma_t2)
        - d.re2_natural() * dk.norm2() / (2.0 * nf))
        .exp()
}

/// Intercept `λ_K = 1 + 2(2x)^{-3/2}[1 − 2^{5/2} exp(−K²/σ_T²)]`.
pub fn intercept_lambda(d: &DerivedParams, k_mean: f64) -> f64 {
    let e = (-k_mean * k_mean / d.sigma_t2).exp();
    1.0 + 2.0 * expansion_parameter(d) * (1.0 - 2f64.powf(2.5) * e)
}

/// Momentum-dependent intercept and radii of the exclusive correlator.
/// Radii are in the units of `DerivedParams::re2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RareGasPrediction {
    pub lambda_k: f64,
    pub rside2: f64,
    pub rout2: f64,
    /// |K| in MeV.
    pub k_mean: f64,
    pub n: usize,
    pub validity: Validity,
}

impl RareGasPrediction {
    /// `1 + λ_K exp(−R_s² Δk_s² − R_o² Δk_o²)` for relative-momentum
    /// components in MeV.
    pub fn correlator(&self, d: &DerivedParams, dk_out: f64, dk_side: f64) -> f64 {
        let h2 = d.hbarc * d.hbarc;
        1.0 + self.lambda_k
            * (-(self.rside2 * dk_side * dk_side + self.rout2 * dk_out * dk_out) / h2).exp()
    }

    /// `R_o² − R_s²`.
    pub fn out_excess(&self) -> f64 {
        self.rout2 - self.rside2
    }
}

pub fn radius_params(d: &DerivedParams, n: usize, k_mean: f64) -> Result<RareGasPrediction> {
    if n < 2 {
        return Err(Error::InvalidOrder { n, min: 2 });
    }
    let nf = n as f64;
    let k2 = k_mean * k_mean;
    let e = (-k2 / d.sigma_t2).exp();
    let z = expansion_parameter(d);
    let two_over_st2 = d.to_length2(2.0 / d.sigma_t2);
    let rside2 = d.re2 + z * (d.re2 - SQRT_2 * e * ((nf + 2.0) * d.re2 + two_over_st2));
    let out_term = d.to_length2(nf / d.x.powf(1.5) * k2 / (d.sigma_t2 * d.sigma_t2) * e);
    Ok(RareGasPrediction {
        lambda_k: intercept_lambda(d, k_mean),
        rside2,
        rout2: rside2 + out_term,
        k_mean: k_mean.abs(),
        n,
        validity: validity(d, n),
    })
}

/// [`radius_params`] for a mean-momentum vector; only `|K|` matters.
pub fn radius_params_at(
    d: &DerivedParams,
    n: usize,
    k_mean: &Momentum3,
) -> Result<RareGasPrediction> {
    radius_params(d, n, k_mean.norm())
}

/// The rare-gas Gaussian correlator at an arbitrary momentum pair.
pub fn rare_c2(d: &DerivedParams, n: usize, k1: &Momentum3, k2: &Momentum3) -> Result<f64> {
    let k_mean = (*k1 + *k2) * 0.5;
    let dk = *k1 - *k2;
    let pred = radius_params_at(d, n, &k_mean)?;
    let (out, side) = match side_out_split(k_mean, dk) {
        Ok((o, s)) => (o.norm(), s.norm()),
        // R_o = R_s at K = 0, so the split is immaterial.
        Err(Error::ZeroMeanMomentum) => (0.0, dk.norm()),
        Err(e) => return Err(e),
    };
    Ok(pred.correlator(d, out, side))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub point: CorrelationPoint,
    pub dk_out: f64,
    pub dk_side: f64,
    pub exact: f64,
    pub rare: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub n: usize,
    pub n0: f64,
    pub derived: DerivedParams,
    pub validity: Validity,
    /// Large-|Δk| limit of the exact correlator.
    pub exact_baseline: f64,
    pub rows: Vec<DeviationRow>,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Max deviation over the Δk = 0 rows.
    pub intercept_max_abs: f64,
}

/// Exact exclusive `C₂⁽ⁿ⁾` against the rare-gas Gaussian form on `points`.
/// Out-of-validity parameters are reported, not refused.
pub fn compare_exact_vs_rare(
    d: &DerivedParams,
    n0: f64,
    n: usize,
    points: &[CorrelationPoint],
) -> Result<DeviationReport> {
    let exact = ExclusiveSpectra::new(d, n0, n)?;
    let exact_baseline = exact.c2_baseline()?;
    let rows = points
        .par_iter()
        .map(|p| {
            let (k1, k2) = p.momenta();
            let e = exact.c2(&k1, &k2)?;
            let r = rare_c2(d, n, &k1, &k2)?;
            let (dk_out, dk_side) = match p.direction {
                Direction::Out => (p.dk, 0.0),
                Direction::Side | Direction::Iso => (0.0, p.dk),
            };
            Ok(DeviationRow {
                point: *p,
                dk_out,
                dk_side,
                exact: e,
                rare: r,
                abs_dev: (e - r).abs(),
                rel_dev: ((e - r) / e).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_abs = rows.iter().map(|r| r.abs_dev).fold(0.0, f64::max);
    let mean_abs = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.abs_dev).sum::<f64>() / rows.len() as f64
    };
    let intercept_max_abs = rows
        .iter()
        .filter(|r| r.point.dk == 0.0)
        .map(|r| r.abs_dev)
        .fold(0.0, f64::max);
    Ok(DeviationReport {
        n,
        n0,
        derived: *d,
        validity: validity(d, n),
        exact_baseline,
        rows,
        max_abs,
        mean_abs,
        intercept_max_abs,
    })
}

/// Grid with `K` in units of σ_T and `Δk` in units of ħc/R_e, so that
/// the same grid probes the same region of the correlator for any `x`.
pub fn scaled_grid(
    d: &DerivedParams,
    k_over_sigma_t: &[f64],
    dk_times_re: &[f64],
) -> Vec<CorrelationPoint> {
    let st = d.sigma_t2.sqrt();
    let inv_re = 1.0 / d.re2_natural().sqrt();
    let mut points = Vec::new();
    for &kf in k_over_sigma_t {
        let k_mean = kf * st;
        let dirs: &[Direction] = if k_mean == 0.0 {
            &[Direction::Iso]
        } else {
            &[Direction::Out, Direction::Side]
        };
        for &direction in dirs {
            for &q in dk_times_re {
                points.push(CorrelationPoint {
                    k_mean,
                    dk: q * inv_re,
                    direction,
                });
            }
        }
    }
    points
}
