//! Combinants, the multiplicity distribution and its mean.
//!
//! The generating function of the model is `exp(Σ C_n (zⁿ − 1))`, so the
//! combinants `C_n` fully determine `p_n`. The mean `Σ n C_n` is finite only
//! below the critical seed multiplicity `n_c = γ₊^{3/2}`; above it the
//! packets condense and inclusive sums are refused rather than truncated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::LogSum;
use crate::params::DerivedParams;

/// Relative half-width of the band treated as `n0 == n_c`.
pub const CRITICAL_BAND: f64 = 1e-9;
/// Stop summing `Σ n C_n` once a term drops below this fraction of the sum.
pub const TRUNCATION_EPS: f64 = 1e-14;
/// Hard cap on series orders.
pub const N_MAX: usize = 100_000;
/// Required relative tail bound on the mean multiplicity.
pub const MEAN_TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `n0 < n_c`: `n C_n → 0`, finite mean.
    Convergent,
    /// `n0 = n_c` within [`CRITICAL_BAND`]: `n C_n → 1`, divergent mean.
    Critical,
    /// `n0 > n_c`: condensation into the zero-momentum packet state.
    Condensed,
}

pub fn classify_regime(d: &DerivedParams, n0: f64) -> Regime {
    if (n0 - d.nc).abs() <= CRITICAL_BAND * d.nc {
        Regime::Critical
    } else if n0 < d.nc {
        Regime::Convergent
    } else {
        Regime::Condensed
    }
}

/// `ln C_n = n ln n0 − ln n − 3 ln(γ₊^{n/2} − γ₋^{n/2})`.
pub fn ln_combinant(d: &DerivedParams, n0: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf * n0.ln() - nf.ln() - 3.0 * d.ln_gamma_pow_diff(0.5 * nf)
}

pub fn combinant(d: &DerivedParams, n0: f64, n: usize) -> f64 {
    ln_combinant(d, n0, n).exp()
}

/// `ln ω_k` for `k = 0..=n`, where `ω_k = p_k/p_0` satisfies
/// `k ω_k = Σ_{i=1}^{k} i C_i ω_{k−i}`. Finite for any regime.
pub fn ln_omegas(d: &DerivedParams, n0: f64, n: usize) -> Vec<f64> {
    let ln_c: Vec<f64> = (1..=n).map(|k| ln_combinant(d, n0, k)).collect();
    ln_omegas_from(&ln_c, n)
}

pub(crate) fn ln_omegas_from(ln_c: &[f64], n: usize) -> Vec<f64> {
    let mut ln_w = Vec::with_capacity(n + 1);
    ln_w.push(0.0);
    for k in 1..=n {
        let mut acc = LogSum::new();
        for i in 1..=k.min(ln_c.len()) {
            acc.add((i as f64).ln() + ln_c[i - 1] + ln_w[k - i]);
        }
        ln_w.push(acc.ln() - (k as f64).ln());
    }
    ln_w
}

/// `C_1..C_N`, stored as logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinantSeries {
    ln_c: Vec<f64>,
    /// Bound on the neglected tail `Σ_{n>N} n C_n` (absolute).
    pub truncation_error: f64,
    pub regime: Regime,
    source: Option<(DerivedParams, f64)>,
}

impl CombinantSeries {
    /// Exactly `order` combinants of the model, in any regime.
    pub fn new(d: &DerivedParams, n0: f64, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidOrder { n: order, min: 1 });
        }
        let ln_c: Vec<f64> = (1..=order).map(|n| ln_combinant(d, n0, n)).collect();
        let ratio = n0 / d.nc;
        let last = (order as f64) * ln_c[order - 1].exp();
        let truncation_error = if ratio < 1.0 {
            last * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        Ok(CombinantSeries {
            ln_c,
            truncation_error,
            regime: classify_regime(d, n0),
            source: Some((*d, n0)),
        })
    }

    /// Combinants up to the order where `n C_n` falls below
    /// [`TRUNCATION_EPS`] of the running `Σ n C_n`, capped at [`N_MAX`].
    pub fn converged(d: &DerivedParams, n0: f64) -> Result<Self> {
        let regime = classify_regime(d, n0);
        if regime != Regime::Convergent {
            return Err(Error::DivergentMean {
                n0,
                nc: d.nc,
                regime,
            });
        }
        if n0 == 0.0 {
            return CombinantSeries::new(d, n0, 1);
        }
        let mut ln_c = Vec::new();
        let mut sum = 0.0;
        for n in 1..=N_MAX {
            let lc = ln_combinant(d, n0, n);
            ln_c.push(lc);
            let term = n as f64 * lc.exp();
            sum += term;
            if term < TRUNCATION_EPS * sum {
                break;
            }
        }
        let order = ln_c.len();
        let mut s = CombinantSeries::new(d, n0, 1)?;
        s.ln_c = ln_c;
        let ratio = n0 / d.nc;
        s.truncation_error = order as f64 * s.ln_c[order - 1].exp() * ratio / (1.0 - ratio);
        Ok(s)
    }

    /// A series with explicit values, e.g. a pure Poisson `[n0]`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidOrder { n: 0, min: 1 });
        }
        if let Some(&v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "combinant",
                value: v,
                reason: "must be non-negative and finite",
            });
        }
        Ok(CombinantSeries {
            ln_c: values.iter().map(|v| v.ln()).collect(),
            truncation_error: 0.0,
            regime: Regime::Convergent,
            source: None,
        })
    }

    pub fn order(&self) -> usize {
        self.ln_c.len()
    }

    /// `C_n` for `1 ≤ n ≤ order`, zero beyond.
    pub fn get(&self, n: usize) -> f64 {
        self.ln(n).exp()
    }

    pub fn ln(&self, n: usize) -> f64 {
        if n == 0 || n > self.ln_c.len() {
            f64::NEG_INFINITY
        } else {
            self.ln_c[n - 1]
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.ln_c.iter().map(|l| l.exp()).collect()
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_c
    }

    /// Running sums `Σ_{i≤n} i C_i` for `n = 1..=order`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.ln_c
            .iter()
            .enumerate()
            .scan(0.0, |acc, (i, l)| {
                *acc += (i + 1) as f64 * l.exp();
                Some(*acc)
            })
            .collect()
    }

    fn divergent(&self) -> Error {
        let (nc, n0) = self
            .source
            .map(|(d, n0)| (d.nc, n0))
            .unwrap_or((f64::NAN, f64::NAN));
        Error::DivergentMean {
            n0,
            nc,
            regime: self.regime,
        }
    }
}

/// `⟨n⟩ = Σ i C_i` with the bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanMultiplicity {
    pub value: f64,
    pub tail_bound: f64,
}

pub fn mean_multiplicity(c: &CombinantSeries) -> Result<MeanMultiplicity> {
    if c.regime != Regime::Convergent {
        return Err(c.divergent());
    }
    let value = *c.partial_sums().last().unwrap();
    if c.truncation_error > MEAN_TAIL_TOLERANCE * value {
        if let Some((d, n0)) = c.source {
            let longer = CombinantSeries::converged(&d, n0)?;
            if longer.order() > c.order() {
                return mean_multiplicity(&longer);
            }
        }
        return Err(Error::TruncationExhausted {
            n_max: c.order(),
            tail: c.truncation_error,
        });
    }
    Ok(MeanMultiplicity {
        value,
        tail_bound: c.truncation_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityDistribution {
    /// `p_0..p_N`.
    pub p: Vec<f64>,
    /// `Σ n p_n` over the stored range.
    pub mean: f64,
    /// ln p_0, finite even when `p[0]` underflows.
    pub ln_p0: f64,
    pub regime: Regime,
}

impl MultiplicityDistribution {
    /// `ω_n = p_n/p_0`.
    pub fn omega(&self, n: usize) -> f64 {
        (self.p[n].ln() - self.ln_p0).exp()
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.p
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

/// `p_n` from the compound-Poisson recurrence `n p_n = Σ k C_k p_{n−k}`.
///
/// The recurrence runs on `ω_n = p_n/p_0` with a running rescale, so that
/// `p_0 = exp(−Σ C_k)` may underflow without losing the bulk of the
/// distribution.
pub fn multiplicity_distribution(c: &CombinantSeries) -> Result<MultiplicityDistribution> {
    if c.regime != Regime::Convergent {
        return Err(c.divergent());
    }
    const RESCALE_AT: f64 = 1e250;
    let cs = c.values();
    let kc: Vec<f64> = cs
        .iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v)
        .collect();
    let ln_p0 = -cs.iter().sum::<f64>();
    // p_n = u_n exp(ln_scale)
    let mut u = vec![1.0];
    let mut ln_scale = ln_p0;
    let p0 = ln_p0.exp();
    let mut p = vec![p0];
    let mut cumulative = p0;
    let mut peak = p0;
    let mut mean = 0.0;
    for n in 1..=N_MAX {
        let mut un = (1..=n.min(kc.len()))
            .map(|k| kc[k - 1] * u[n - k])
            .sum::<f64>()
            / n as f64;
        if un > RESCALE_AT {
            u.iter_mut().for_each(|v| *v /= RESCALE_AT);
            un /= RESCALE_AT;
            ln_scale += RESCALE_AT.ln();
        }
        u.push(un);
        let pn = if un > 0.0 {
            (un.ln() + ln_scale).exp()
        } else {
            0.0
        };
        p.push(pn);
        cumulative += pn;
        mean += n as f64 * pn;
        peak = peak.max(pn);
        let past_peak = pn < peak;
        if past_peak && 1.0 - cumulative < 1e-13 && (n as f64) * pn < 1e-16 * mean.max(1.0) {
            break;
        }
        if un == 0.0 && n >= kc.len() {
            break;
        }
    }
    if (1.0 - cumulative).abs() > 1e-9 {
        return Err(Error::TruncationExhausted {
            n_max: p.len() - 1,
            tail: 1.0 - cumulative,
        });
    }
    Ok(MultiplicityDistribution {
        p,
        mean,
        ln_p0,
        regime: c.regime,
    })
}
