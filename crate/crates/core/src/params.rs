//! Physical model parameters and the derived auxiliary quantities of the
//! analytic solution.
//!
//! Units: momenta, masses, temperatures and widths in MeV; lengths in fm.
//! [`HBARC`] is applied exactly once, in [`ModelParams::derive`], to form the
//! dimensionless density parameter `x` and the `mT/(σ²σ_T²)` length² term.
//! Everything downstream is either dimensionless or in MeV.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ħc in MeV·fm.
pub const HBARC: f64 = 197.327;

/// Inputs of the static, non-relativistic source.
///
/// `t0` is bookkeeping only: all packets share the emission time, so the
/// energy phases cancel in every overlap and `t0` never enters a formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Mean multiplicity of the rare-gas Poisson seed.
    pub n0: f64,
    /// Source radius (fm).
    pub radius: f64,
    /// Source temperature (MeV).
    pub temperature: f64,
    /// Boson mass (MeV).
    pub mass: f64,
    /// Wave-packet momentum width σ (MeV).
    pub sigma: f64,
    /// Common emission time (fm/c).
    #[serde(default)]
    pub t0: f64,
}

impl ModelParams {
    pub fn new(n0: f64, radius: f64, temperature: f64, mass: f64, sigma: f64) -> Self {
        ModelParams {
            n0,
            radius,
            temperature,
            mass,
            sigma,
            t0: 0.0,
        }
    }

    /// Parameters with the radius chosen so that `derive()` yields the
    /// requested `x`. Fails when `x ≤ mT/σ²`, the contribution of the
    /// packet width alone.
    pub fn with_target_x(n0: f64, x: f64, temperature: f64, mass: f64, sigma: f64) -> Result<Self> {
        let mt = mass * temperature;
        let floor = mt / (sigma * sigma);
        if !(x > floor) {
            return Err(Error::InvalidParameter {
                field: "x",
                value: x,
                reason: "must exceed mT/sigma^2 for a positive radius",
            });
        }
        let sigma_t2 = sigma * sigma + 2.0 * mt;
        let radius = ((x - floor) * HBARC * HBARC / sigma_t2).sqrt();
        let p = ModelParams::new(n0, radius, temperature, mass, sigma);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radius", self.radius),
            ("temperature", self.temperature),
            ("mass", self.mass),
            ("sigma", self.sigma),
        ];
        for (field, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    value,
                    reason: "must be positive and finite",
                });
            }
        }
        if !(self.n0 >= 0.0) || !self.n0.is_finite() {
            return Err(Error::InvalidParameter {
                field: "n0",
                value: self.n0,
                reason: "must be non-negative and finite",
            });
        }
        if !self.t0.is_finite() {
            return Err(Error::InvalidParameter {
                field: "t0",
                value: self.t0,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Computes σ_T², R_e², x, γ±, n_c and T_e.
    pub fn derive(&self) -> Result<DerivedParams> {
        self.validate()?;
        let mt = self.mass * self.temperature;
        let sigma2 = self.sigma * self.sigma;
        let sigma_t2 = sigma2 + 2.0 * mt;
        let re2 = self.radius * self.radius + HBARC * HBARC * mt / (sigma2 * sigma_t2);
        let x = re2 * sigma_t2 / (HBARC * HBARC);
        let mut d = DerivedParams::build(sigma_t2, re2, x, HBARC);
        d.te = Some(sigma_t2 / (2.0 * self.mass));
        Ok(d)
    }
}

/// Derived quantities shared by every downstream formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "DerivedFields")]
pub struct DerivedParams {
    /// σ_T² = σ² + 2mT (MeV²).
    pub sigma_t2: f64,
    /// Effective squared radius R_e² (fm², or MeV⁻² when `hbarc == 1`).
    pub re2: f64,
    /// x = R_e²σ_T²/(ħc)².
    pub x: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    /// Critical seed multiplicity γ₊^{3/2}.
    pub nc: f64,
    /// Effective temperature σ_T²/(2m) (MeV); absent for natural-unit fixtures.
    pub te: Option<f64>,
    /// The ħc used to convert between fm and MeV⁻¹.
    pub hbarc: f64,
    /// √(1+2x) = γ₊ − γ₋.
    #[serde(skip)]
    sqrt_1p2x: f64,
    #[serde(skip)]
    ln_gamma_plus: f64,
    /// ln(γ₋/γ₊), −∞ at x = 0.
    #[serde(skip)]
    ln_ratio: f64,
}

/// Serialized form; cached quantities are recomputed on load.
#[derive(Deserialize)]
struct DerivedFields {
    sigma_t2: f64,
    re2: f64,
    x: f64,
    te: Option<f64>,
    hbarc: f64,
}

impl From<DerivedFields> for DerivedParams {
    fn from(f: DerivedFields) -> Self {
        let mut d = DerivedParams::build(f.sigma_t2, f.re2, f.x, f.hbarc);
        d.te = f.te;
        d
    }
}

impl DerivedParams {
    /// Fixture constructor in natural units (ħc ≡ 1): x = R_e²σ_T².
    pub fn natural(sigma_t2: f64, re2: f64) -> Result<Self> {
        if !(sigma_t2 > 0.0) || !sigma_t2.is_finite() {
            return Err(Error::InvalidParameter {
                field: "sigma_t2",
                value: sigma_t2,
                reason: "must be positive and finite",
            });
        }
        if !(re2 >= 0.0) || !re2.is_finite() {
            return Err(Error::InvalidParameter {
                field: "re2",
                value: re2,
                reason: "must be non-negative and finite",
            });
        }
        Ok(DerivedParams::build(sigma_t2, re2, re2 * sigma_t2, 1.0))
    }

    /// Natural-unit fixture with σ_T² = 1 and the given x.
    pub fn from_x(x: f64) -> Result<Self> {
        DerivedParams::natural(1.0, x)
    }

    fn build(sigma_t2: f64, re2: f64, x: f64, hbarc: f64) -> Self {
        let s = (1.0 + 2.0 * x).sqrt();
        let gamma_plus = 0.5 * (1.0 + x + s);
        // x²/(4γ₊) avoids the cancellation in (1 + x − s)/2.
        let gamma_minus = x * x / (4.0 * gamma_plus);
        let ln_gamma_plus = gamma_plus.ln();
        let ln_ratio = if gamma_minus < 0.5 * gamma_plus {
            gamma_minus.ln() - ln_gamma_plus
        } else {
            (-s / gamma_plus).ln_1p()
        };
        DerivedParams {
            sigma_t2,
            re2,
            x,
            gamma_plus,
            gamma_minus,
            nc: gamma_plus.powf(1.5),
            te: None,
            hbarc,
            sqrt_1p2x: s,
            ln_gamma_plus,
            ln_ratio,
        }
    }

    /// √(1+2x), equal to γ₊ − γ₋.
    pub fn gamma_gap(&self) -> f64 {
        self.sqrt_1p2x
    }

    pub fn ln_gamma_plus(&self) -> f64 {
        self.ln_gamma_plus
    }

    /// ln(γ₋/γ₊).
    pub fn ln_ratio(&self) -> f64 {
        self.ln_ratio
    }

    /// ln(γ₊^{p} − γ₋^{p}) for real p > 0, stable for γ₋/γ₊ → 1.
    pub fn ln_gamma_pow_diff(&self, p: f64) -> f64 {
        p * self.ln_gamma_plus + ln_one_minus_exp(p * self.ln_ratio)
    }

    /// R_e² in MeV⁻².
    pub fn re2_natural(&self) -> f64 {
        self.re2 / (self.hbarc * self.hbarc)
    }

    /// Converts a length² in MeV⁻² to the units of `re2`.
    pub fn to_length2(&self, natural: f64) -> f64 {
        natural * self.hbarc * self.hbarc
    }
}

/// ln(1 − eᵗ) for t ≤ 0.
pub(crate) fn ln_one_minus_exp(t: f64) -> f64 {
    if t > -std::f64::consts::LN_2 {
        (-t.exp_m1()).ln()
    } else {
        (-t.exp()).ln_1p()
    }
}
