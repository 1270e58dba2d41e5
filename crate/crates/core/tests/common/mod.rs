#![allow(dead_code)]

use boseglow::params::DerivedParams;
use proptest::prelude::*;

/// Natural-unit parameter sets with x in `[lo, hi]` and σ_T² in [0.5, 2].
pub fn derived(lo: f64, hi: f64) -> impl Strategy<Value = DerivedParams> {
    (0.5f64..2.0, lo..hi).prop_map(|(st2, x)| DerivedParams::natural(st2, x / st2).unwrap())
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Power series of `exp(S(z))` truncated at degree `n`, for `S(0) = 0`,
/// computed by summing `S^m/m!` with truncated polynomial products.
pub fn series_exp(s: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    out[0] = 1.0;
    let mut power = vec![0.0; n + 1];
    power[0] = 1.0;
    for m in 1..=n {
        let mut next = vec![0.0; n + 1];
        for (i, &p) in power.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (j, &c) in s.iter().enumerate().take(n + 1 - i) {
                if i + j <= n {
                    next[i + j] += p * c / m as f64;
                }
            }
        }
        power = next;
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p;
        }
    }
    out
}
