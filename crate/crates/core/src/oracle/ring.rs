//! Kernels built by repeated Gaussian convolution.
//!
//! With `G_n(k1, k2) = n0ⁿ h_n exp(−a_n(k1² + k2²) + g_n k1·k2)`, the order
//! `n` kernel is the composition `∫d³q G_{n−1}(k1, q) G_1(q, k2)`. The
//! `q`-integral is Gaussian with curvature `A = a_{n−1} + a_1`, giving
//!
//! ```text
//! h_n = h_{n−1} h_1 (π/A)^{3/2}
//! a_n = a_{n−1} − g_{n−1}²/(4A)      (k1² coefficient)
//!     = a_1 − g_1²/(4A)              (k2² coefficient)
//! g_n = g_{n−1} g_1/(2A)
//! ```
//!
//! The two expressions for `a_n` agree only if the kernel powers commute,
//! which is checked at every step. Nothing here uses γ±.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::spectra::Momentum3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingCoefficients {
    pub n: usize,
    pub n0: f64,
    /// ln h.
    pub ln_h: f64,
    pub a: f64,
    pub g: f64,
}

impl RingCoefficients {
    pub fn h(&self) -> f64 {
        self.ln_h.exp()
    }

    pub fn ln_eval(&self, k1: &Momentum3, k2: &Momentum3) -> f64 {
        self.n as f64 * self.n0.ln() + self.ln_h - self.a * (k1.norm2() + k2.norm2())
            + self.g * k1.dot(k2)
    }

    pub fn eval(&self, k1: &Momentum3, k2: &Momentum3) -> f64 {
        self.ln_eval(k1, k2).exp()
    }
}

/// Coefficients for orders `1..=order`, seeded with the single-packet
/// kernel `a_1 = (1+x)/(2σ_T²)`, `g_1 = x/σ_T²`, `h_1 = (πσ_T²)^{-3/2}`.
pub fn ring_recursion(d: &DerivedParams, n0: f64, order: usize) -> Result<Vec<RingCoefficients>> {
    if order < 1 {
        return Err(Error::InvalidOrder { n: order, min: 1 });
    }
    let st2 = d.sigma_t2;
    let seed = RingCoefficients {
        n: 1,
        n0,
        ln_h: -1.5 * (PI * st2).ln(),
        a: (1.0 + d.x) / (2.0 * st2),
        g: d.x / st2,
    };
    check(&seed)?;
    let mut out = Vec::with_capacity(order);
    out.push(seed);
    for n in 2..=order {
        let prev = out[n - 2];
        let curv = prev.a + seed.a;
        let a_left = prev.a - prev.g * prev.g / (4.0 * curv);
        let a_right = seed.a - seed.g * seed.g / (4.0 * curv);
        if (a_left - a_right).abs() > 1e-9 * a_left.abs().max(a_right.abs()) {
            return Err(Error::NumericalBreakdown {
                n,
                detail: format!("asymmetric composition: {a_left} vs {a_right}"),
            });
        }
        let next = RingCoefficients {
            n,
            n0,
            ln_h: prev.ln_h + seed.ln_h + 1.5 * (PI / curv).ln(),
            a: 0.5 * (a_left + a_right),
            g: prev.g * seed.g / (2.0 * curv),
        };
        check(&next)?;
        out.push(next);
    }
    Ok(out)
}

fn check(c: &RingCoefficients) -> Result<()> {
    if c.a > 0.0 && c.g >= 0.0 && 2.0 * c.a > c.g && c.ln_h.is_finite() {
        Ok(())
    } else {
        Err(Error::NumericalBreakdown {
            n: c.n,
            detail: format!("quadratic form not positive: a = {}, g = {}", c.a, c.g),
        })
    }
}
