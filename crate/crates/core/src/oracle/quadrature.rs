//! Gauss–Hermite product rules for integrals over the whole real line.

use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logspace::CompensatedSum;
use crate::spectra::Momentum3;

/// Rule of a given order, rescaled so that `∫F(k) dk ≈ s Σ_i W_i F(s t_i)`
/// with `W_i = w_i exp(t_i²)`. The scale `s` should be at least the widest
/// Gaussian width present in the integrand.
#[derive(Debug, Clone)]
pub struct HermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HermiteRule {
    pub fn new(order: usize) -> Result<Self> {
        let deg = NonZeroUsize::new(order).ok_or(Error::InvalidParameter {
            field: "quadrature_order",
            value: order as f64,
            reason: "must be at least 1",
        })?;
        let rule = GaussHermite::new(deg);
        let (nodes, weights) = rule
            .iter()
            .map(|(t, w)| (*t, (w.ln() + t * t).exp()))
            .unzip();
        Ok(HermiteRule { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate_1d(&self, scale: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(scale * t));
        }
        scale * acc.value()
    }

    pub fn integrate_2d(&self, scale: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (t1, w1) in self.nodes.iter().zip(&self.weights) {
            for (t2, w2) in self.nodes.iter().zip(&self.weights) {
                acc.add(w1 * w2 * f(scale * t1, scale * t2));
            }
        }
        scale * scale * acc.value()
    }

    /// Product rule over ℝ³; the outer axis runs in parallel and partial
    /// sums are combined in node order.
    pub fn integrate_3d(&self, scale: f64, f: impl Fn(&Momentum3) -> f64 + Sync) -> f64 {
        let slabs: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(t1, w1)| {
                let mut acc = CompensatedSum::default();
                for (t2, w2) in self.nodes.iter().zip(&self.weights) {
                    for (t3, w3) in self.nodes.iter().zip(&self.weights) {
                        let k = Momentum3::new(scale * t1, scale * t2, scale * t3);
                        acc.add(w2 * w3 * f(&k));
                    }
                }
                w1 * acc.value()
            })
            .collect();
        let mut acc = CompensatedSum::default();
        for s in slabs {
            acc.add(s);
        }
        scale.powi(3) * acc.value()
    }
}
