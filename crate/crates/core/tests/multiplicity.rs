mod common;

use approx::assert_relative_eq;
use boseglow::multiplicity::{
    classify_regime, combinant, ln_combinant, mean_multiplicity, multiplicity_distribution,
    CombinantSeries, Regime,
};
use boseglow::params::DerivedParams;
use boseglow::Error;
use common::{derived, rel, series_exp};
use proptest::prelude::*;

fn unit() -> DerivedParams {
    DerivedParams::from_x(1.0).unwrap()
}

#[test]
fn combinants_at_unit_density() {
    let d = unit();
    assert_relative_eq!(combinant(&d, 1.0, 1), 1.0, max_relative = 1e-14);
    // C_2 = (n0²/2)(γ₊ − γ₋)^{-3} = 3^{-3/2}/2
    assert_relative_eq!(
        combinant(&d, 1.0, 2),
        0.5 * 3f64.powf(-1.5),
        max_relative = 1e-14
    );
    let c = CombinantSeries::converged(&d, 1.0).unwrap();
    let total: f64 = c.values().iter().sum();
    assert_relative_eq!(total, 1.1263592462560583, max_relative = 1e-13);
}

#[test]
fn distribution_matches_generating_function_reference() {
    // Taylor coefficients of exp(Σ C_k (z^k − 1)) at x = 1, n0 = 1,
    // evaluated with 50-digit arithmetic.
    let reference = [
        0.32421148447763245573,
        0.32421148447763245573,
        0.1933030068784044401,
        0.092149023721383113912,
        0.039474763976663068055,
        0.01608094300058291642,
        0.0064056482842874779826,
        0.0025277461712062242191,
        0.00099378486952515059967,
        0.00039016366020397002711,
        0.00015310307283910999898,
    ];
    let c = CombinantSeries::converged(&unit(), 1.0).unwrap();
    let dist = multiplicity_distribution(&c).unwrap();
    for (n, r) in reference.iter().enumerate() {
        assert!(rel(dist.p[n], *r) < 1e-12, "p_{n}: {} vs {r}", dist.p[n]);
    }
}

#[test]
fn recurrence_equals_series_exponential() {
    for (x, n0) in [(1.0, 1.0), (0.3, 0.7), (5.0, 3.0), (40.0, 100.0)] {
        let d = DerivedParams::from_x(x).unwrap();
        let c = CombinantSeries::converged(&d, n0).unwrap();
        let dist = multiplicity_distribution(&c).unwrap();
        let mut s = vec![0.0];
        s.extend(c.values().into_iter().take(30));
        let gf = series_exp(&s, 30);
        let p0 = (-c.values().iter().sum::<f64>()).exp();
        for n in 0..=30.min(dist.p.len() - 1) {
            let expected = p0 * gf[n];
            if expected > 1e-290 {
                assert!(rel(dist.p[n], expected) < 1e-10, "x={x} n0={n0} n={n}");
            }
        }
    }
}

#[test]
fn mean_at_unit_density() {
    let c = CombinantSeries::converged(&unit(), 1.0).unwrap();
    let m = mean_multiplicity(&c).unwrap();
    assert_relative_eq!(m.value, 1.2958403709176900, max_relative = 1e-13);
    assert!(m.tail_bound < 1e-12);
}

#[test]
fn mean_extends_short_series() {
    let d = unit();
    let short = CombinantSeries::new(&d, 2.0, 3).unwrap();
    let m = mean_multiplicity(&short).unwrap();
    let full = mean_multiplicity(&CombinantSeries::converged(&d, 2.0).unwrap()).unwrap();
    assert_eq!(m.value, full.value);
}

#[test]
fn poisson_reduction() {
    let lambda = 3.7;
    let c = CombinantSeries::from_values(&[lambda]).unwrap();
    let dist = multiplicity_distribution(&c).unwrap();
    let mut p = (-lambda).exp();
    for n in 0..25 {
        assert!(rel(dist.p[n], p) < 1e-13, "n = {n}");
        p *= lambda / (n + 1) as f64;
    }
    assert_relative_eq!(dist.mean, lambda, max_relative = 1e-12);
    // Without overlap the combinants reduce to n0^n / n.
    let d = DerivedParams::from_x(0.0).unwrap();
    for n in 1..6 {
        let expect = 0.7f64.powi(n as i32) / n as f64;
        assert_relative_eq!(combinant(&d, 0.7, n), expect, max_relative = 1e-13);
    }
}

#[test]
fn empty_source() {
    let c = CombinantSeries::converged(&unit(), 0.0).unwrap();
    let dist = multiplicity_distribution(&c).unwrap();
    assert_eq!(dist.p[0], 1.0);
    assert_eq!(dist.mean, 0.0);
}

#[test]
fn trichotomy_at_critical_density() {
    let d = unit();
    let below = 0.9 * d.nc;
    assert_eq!(classify_regime(&d, below), Regime::Convergent);
    assert!(1000.0 * combinant(&d, below, 1000) < 1e-40);

    assert_eq!(classify_regime(&d, d.nc), Regime::Critical);
    let at = 1000.0 * combinant(&d, d.nc, 1000);
    assert!((at - 1.0).abs() < 1e-6, "n C_n at n_c: {at}");

    let above = 1.1 * d.nc;
    assert_eq!(classify_regime(&d, above), Regime::Condensed);
    let series = CombinantSeries::new(&d, above, 1000).unwrap();
    assert!(*series.partial_sums().last().unwrap() > 1e6);
    assert!(matches!(
        multiplicity_distribution(&series),
        Err(Error::DivergentMean {
            regime: Regime::Condensed,
            ..
        })
    ));
    assert!(matches!(
        CombinantSeries::converged(&d, d.nc),
        Err(Error::DivergentMean {
            regime: Regime::Critical,
            ..
        })
    ));
}

#[test]
fn critical_band_edges() {
    let d = unit();
    assert_eq!(classify_regime(&d, d.nc * (1.0 + 5e-10)), Regime::Critical);
    assert_eq!(classify_regime(&d, d.nc * (1.0 - 2e-9)), Regime::Convergent);
    assert_eq!(classify_regime(&d, d.nc * (1.0 + 2e-9)), Regime::Condensed);
}

#[test]
fn huge_orders_stay_finite_in_log_space() {
    let d = DerivedParams::from_x(1e4).unwrap();
    let l = ln_combinant(&d, 1.0, 100_000);
    assert!(l.is_finite() && l < -1e5);
    assert_eq!(combinant(&d, 1.0, 100_000), 0.0);
}

#[test]
fn dense_source_distribution() {
    let d = DerivedParams::from_x(30.0).unwrap();
    let c = CombinantSeries::converged(&d, 0.95 * d.nc).unwrap();
    let dist = multiplicity_distribution(&c).unwrap();
    assert!((dist.total() - 1.0).abs() < 1e-9);
    let mean = mean_multiplicity(&c).unwrap().value;
    assert!(rel(dist.mean, mean) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn first_combinant_is_seed(d in derived(1e-3, 1e4), n0 in 0.01f64..50.0) {
        prop_assert!((combinant(&d, n0, 1) / n0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn combinants_scale_with_seed(d in derived(1e-2, 1e3), n0 in 0.01f64..5.0, lambda in 0.2f64..3.0, n in 1usize..40) {
        let a = ln_combinant(&d, lambda * n0, n);
        let b = ln_combinant(&d, n0, n) + n as f64 * lambda.ln();
        prop_assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()));
    }

    #[test]
    fn combinants_are_positive_and_decreasing_below_nc(d in derived(1e-2, 1e3), frac in 0.01f64..0.99) {
        let n0 = frac * d.nc.min(1.0);
        let c = CombinantSeries::new(&d, n0, 30).unwrap().values();
        for w in c.windows(2) {
            prop_assert!(w[1] > 0.0 && w[1] < w[0]);
        }
    }

    #[test]
    fn normalization_and_mean(d in derived(1e-2, 1e3), frac in 0.01f64..0.9) {
        let n0 = frac * d.nc;
        let c = CombinantSeries::converged(&d, n0).unwrap();
        let dist = multiplicity_distribution(&c).unwrap();
        prop_assert!((dist.total() - 1.0).abs() < 1e-9);
        let mean = mean_multiplicity(&c).unwrap().value;
        prop_assert!(rel(dist.mean, mean) < 1e-8, "{} vs {}", dist.mean, mean);
        prop_assert!(dist.p.iter().all(|p| *p >= 0.0));
    }
}
