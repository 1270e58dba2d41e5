use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Momentum3;
use crate::params::DerivedParams;

/// The order-`n` two-momentum kernel
///
/// ```text
/// G_n(k1, k2) = j_n exp(−(b_n/2)[(P k1 − M k2)² + (P k2 − M k1)²])
///             = n0ⁿ h_n exp(−a_n (k1² + k2²) + g_n k1·k2)
/// ```
///
/// with `P = γ₊^{n/2}`, `M = γ₋^{n/2}`, `j_n = n0ⁿ (b_n/π)^{3/2}` and
/// `b_n = (γ₊ − γ₋)/(σ_T² (γ₊ⁿ − γ₋ⁿ))`. The quadratic coefficients are kept
/// in the form `a_n = (b_n P²/2)(1 + rⁿ)`, `g_n = 2 b_n P² r^{n/2}` with
/// `r = γ₋/γ₊`, which never overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    pub n: usize,
    /// ln j_n.
    pub log_jn: f64,
    /// ln b_n (b_n in MeV⁻²).
    pub log_bn: f64,
    /// ln γ₊^{n/2}.
    pub log_gpn: f64,
    /// ln γ₋^{n/2}.
    pub log_gmn: f64,
    a: f64,
    g: f64,
}

impl GaussianKernel {
    pub fn new(d: &DerivedParams, n0: f64, n: usize) -> Self {
        assert!(n >= 1, "kernel order starts at 1");
        let nf = n as f64;
        let ln_rn = nf * d.ln_ratio();
        let log_bn = d.gamma_gap().ln() - d.sigma_t2.ln() - d.ln_gamma_pow_diff(nf);
        // b_n γ₊ⁿ = gap/(σ_T² (1 − rⁿ))
        let b_p2 = d.gamma_gap() / (d.sigma_t2 * -ln_rn.exp_m1());
        let a = 0.5 * b_p2 * (1.0 + ln_rn.exp());
        let g = 2.0 * b_p2 * (0.5 * ln_rn).exp();
        GaussianKernel {
            n,
            log_jn: nf * n0.ln() + 1.5 * (log_bn - PI.ln()),
            log_bn,
            log_gpn: 0.5 * nf * d.ln_gamma_plus(),
            log_gmn: 0.5 * nf * d.gamma_minus.ln(),
            a,
            g,
        }
    }

    pub fn jn(&self) -> f64 {
        self.log_jn.exp()
    }

    pub fn bn(&self) -> f64 {
        self.log_bn.exp()
    }

    /// a_n = (b_n/2)(γ₊ⁿ + γ₋ⁿ).
    pub fn an(&self) -> f64 {
        self.a
    }

    /// g_n = 2 b_n (x/2)ⁿ.
    pub fn gn(&self) -> f64 {
        self.g
    }

    /// h_n = (b_n/π)^{3/2}.
    pub fn hn(&self) -> f64 {
        (1.5 * (self.log_bn - PI.ln())).exp()
    }

    /// Coefficient of k² on the diagonal: `G_n(k,k) = j_n exp(−c k²)`.
    pub fn diagonal_coefficient(&self) -> f64 {
        2.0 * self.a - self.g
    }

    /// Exponent of one Cartesian component, `−a(u² + v²) + g u v`.
    pub fn component_exponent(&self, u: f64, v: f64) -> f64 {
        -self.a * (u * u + v * v) + self.g * u * v
    }

    pub fn ln_eval(&self, k1: &Momentum3, k2: &Momentum3) -> f64 {
        self.log_jn - self.a * (k1.norm2() + k2.norm2()) + self.g * k1.dot(k2)
    }

    pub fn eval(&self, k1: &Momentum3, k2: &Momentum3) -> f64 {
        self.ln_eval(k1, k2).exp()
    }

    /// Direct evaluation of the (j_n, b_n, γ±) form; overflows for large `n`.
    pub fn eval_gamma_form(&self, k1: &Momentum3, k2: &Momentum3) -> f64 {
        let p = self.log_gpn.exp();
        let m = self.log_gmn.exp();
        let u = *k1 * p - *k2 * m;
        let v = *k2 * p - *k1 * m;
        self.jn() * (-0.5 * self.bn() * (u.norm2() + v.norm2())).exp()
    }

    /// Upper bound on `G_n(k1, k2)`: the form is bounded by
    /// `j_n exp(−(a − g/2)(k1² + k2²))`.
    pub fn ln_upper_bound(&self, k1: &Momentum3, k2: &Momentum3) -> f64 {
        self.log_jn - (self.a - 0.5 * self.g) * (k1.norm2() + k2.norm2())
    }
}

/// Kernels `G_1..G_N` for one parameter set.
#[derive(Debug, Clone)]
pub struct KernelTable {
    derived: DerivedParams,
    n0: f64,
    kernels: Vec<GaussianKernel>,
}

impl KernelTable {
    pub fn new(d: &DerivedParams, n0: f64, order: usize) -> Self {
        KernelTable {
            derived: *d,
            n0,
            kernels: (1..=order).map(|n| GaussianKernel::new(d, n0, n)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.kernels.len()
    }

    /// `G_n`, from the table when precomputed.
    pub fn get(&self, n: usize) -> GaussianKernel {
        match self.kernels.get(n.wrapping_sub(1)) {
            Some(k) => *k,
            None => GaussianKernel::new(&self.derived, self.n0, n),
        }
    }

    pub fn derived(&self) -> &DerivedParams {
        &self.derived
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }
}
