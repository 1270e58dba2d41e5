mod common;

use approx::assert_relative_eq;
use boseglow::multiplicity::combinant;
use boseglow::params::{DerivedParams, ModelParams};
use boseglow::raregas::{
    compare_exact_vs_rare, expansion_parameter, intercept_lambda, radius_params, rare_c2,
    rare_combinant, rare_kernel, scaled_grid, validity,
};
use boseglow::spectra::{kernel, ExclusiveSpectra, Momentum3};
use boseglow::Error;
use common::rel;
use proptest::prelude::*;

fn rare() -> DerivedParams {
    DerivedParams::natural(1.0, 1e3).unwrap()
}

fn max_deviation(x: f64, n: usize) -> (f64, f64) {
    let d = DerivedParams::from_x(x).unwrap();
    let grid = scaled_grid(
        &d,
        &[0.0, 0.5, 1.0, 1.5, 2.0],
        &[0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0],
    );
    let r = compare_exact_vs_rare(&d, 1.0, n, &grid).unwrap();
    (r.max_abs, r.intercept_max_abs)
}

#[test]
fn intercept_is_suppressed_at_low_momentum_and_rises() {
    let d = rare();
    let st = d.sigma_t2.sqrt();
    let l0 = intercept_lambda(&d, 0.0);
    assert!(l0 < 1.0);
    let mut prev = l0;
    for i in 1..=40 {
        let l = intercept_lambda(&d, 0.1 * i as f64 * st);
        assert!(l > prev);
        prev = l;
    }
    assert_relative_eq!(
        prev,
        1.0 + 2.0 * expansion_parameter(&d),
        max_relative = 1e-9
    );
}

#[test]
fn side_radius_is_below_the_source_radius_at_low_momentum() {
    let d = rare();
    let st = d.sigma_t2.sqrt();
    let low = radius_params(&d, 2, 0.0).unwrap();
    let high = radius_params(&d, 2, 6.0 * st).unwrap();
    assert!(low.rside2 < d.re2);
    assert!(high.rside2 > d.re2);
    assert_relative_eq!(
        high.rside2,
        d.re2 * (1.0 + expansion_parameter(&d)),
        max_relative = 1e-12
    );
}

#[test]
fn out_excess_peaks_at_the_thermal_momentum() {
    let d = rare();
    let st = d.sigma_t2.sqrt();
    let excess = |k: f64| radius_params(&d, 2, k).unwrap().out_excess();
    assert_eq!(excess(0.0), 0.0);
    assert!(excess(12.0 * st) < 1e-50);
    let mut best = (0.0, f64::MIN);
    for i in 0..=400 {
        let k = 0.01 * i as f64 * st;
        let e = excess(k);
        assert!(e >= 0.0);
        if e > best.1 {
            best = (k, e);
        }
    }
    assert_relative_eq!(best.0, st, max_relative = 0.011);
}

#[test]
fn side_radius_shrinks_with_multiplicity() {
    let d = rare();
    for k in [0.0, 0.5, 1.0] {
        let mut prev = f64::INFINITY;
        for n in 2..12 {
            let r = radius_params(&d, n, k).unwrap().rside2;
            assert!(r < prev);
            prev = r;
        }
    }
}

#[test]
fn deviation_follows_the_expansion_parameter() {
    let xs = [100.0, 1e3, 1e4];
    for n in [2, 3] {
        let devs: Vec<f64> = xs.iter().map(|&x| max_deviation(x, n).0).collect();
        for (&x, &dev) in xs.iter().zip(&devs) {
            let scaled = dev / (2.0 * x).powf(-1.5);
            assert!(scaled <= 6.0 * n as f64 / 2.0, "n = {n}, x = {x}: {scaled}");
        }
        for w in devs.windows(2) {
            let slope = (w[1] / w[0]).log10();
            assert!(slope <= -1.4, "n = {n}: slope {slope}");
        }
    }
}

#[test]
fn intercept_deviation_is_second_order() {
    for x in [100.0, 1e3, 1e4] {
        let (_, intercept) = max_deviation(x, 2);
        assert!(
            intercept <= 40.0 * (2.0 * x).powf(-2.5),
            "x = {x}: {intercept}"
        );
    }
}

#[test]
fn rare_combinants_converge_to_the_exact_ones() {
    for n in [1, 2, 5] {
        let mut prev = f64::INFINITY;
        for x in [1e2, 1e3, 1e4, 1e5] {
            let d = DerivedParams::from_x(x).unwrap();
            let err = rel(rare_combinant(&d, 2.0, n), combinant(&d, 2.0, n));
            if n == 1 {
                assert!(err < 1e-14);
                continue;
            }
            assert!(err * x < 3.0 * (n * n) as f64, "n = {n}, x = {x}: {err}");
            assert!(err < prev);
            prev = err;
        }
    }
}

#[test]
fn rare_kernels_converge_to_the_exact_ones() {
    for n in [1, 2, 4] {
        let mut prev = f64::INFINITY;
        for x in [1e2, 1e3, 1e4] {
            let d = DerivedParams::from_x(x).unwrap();
            let q = 0.7 / d.re2.sqrt();
            let k1 = Momentum3::new(0.4, 0.1, 0.5 * q);
            let k2 = Momentum3::new(0.4, 0.1, -0.5 * q);
            let exact = kernel(&d, 1.0, n).eval(&k1, &k2);
            let err = rel(rare_kernel(&d, 1.0, n, &k1, &k2), exact);
            assert!(err < 50.0 * (n * n) as f64 / x, "n = {n}, x = {x}: {err}");
            if n > 1 {
                assert!(err < prev);
            }
            prev = err;
        }
    }
}

#[test]
fn exact_intercept_matches_the_expansion() {
    let d = DerivedParams::from_x(1e4).unwrap();
    let ex = ExclusiveSpectra::new(&d, 1.0, 2).unwrap();
    let c = ex.c2(&Momentum3::ZERO, &Momentum3::ZERO).unwrap();
    let r = rare_c2(&d, 2, &Momentum3::ZERO, &Momentum3::ZERO).unwrap();
    assert_relative_eq!(r, 1.0 + intercept_lambda(&d, 0.0), max_relative = 1e-15);
    assert!((c - r).abs() < 40.0 * (2.0 * d.x).powf(-2.5));
}

#[test]
fn validity_flag() {
    let below = validity(&DerivedParams::from_x(99.0).unwrap(), 3);
    assert!(!below.valid);
    let above = validity(&DerivedParams::from_x(100.0).unwrap(), 3);
    assert!(above.valid);
    assert_relative_eq!(
        above.correction_scale,
        3.0 * 200f64.powf(-1.5),
        max_relative = 1e-14
    );
    // Reported, not refused.
    let d = DerivedParams::from_x(2.0).unwrap();
    let r = compare_exact_vs_rare(&d, 1.0, 2, &scaled_grid(&d, &[0.0, 1.0], &[0.0, 1.0])).unwrap();
    assert!(!r.validity.valid);
    assert!(matches!(
        radius_params(&d, 1, 0.0),
        Err(Error::InvalidOrder { .. })
    ));
}

#[test]
fn physical_units_are_consistent() {
    // A large source with a narrow packet width sits deep in the rare regime.
    let p = ModelParams::new(1.0, 8.0, 100.0, 139.57, 300.0);
    let d = p.derive().unwrap();
    assert!(d.x > 100.0);
    let pred = radius_params(&d, 2, 200.0).unwrap();
    // Radii come back in fm², comparable to R_e².
    assert!(rel(pred.rside2, d.re2) < 0.01);
    let dk = d.hbarc / pred.rside2.sqrt();
    let c = pred.correlator(&d, 0.0, dk);
    assert_relative_eq!(
        c,
        1.0 + pred.lambda_k * (-1.0f64).exp(),
        max_relative = 1e-12
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outward_radius_never_below_side(x in 100.0f64..1e5, n in 2usize..10, k in 0.0f64..5.0) {
        let d = DerivedParams::from_x(x).unwrap();
        let p = radius_params(&d, n, k).unwrap();
        prop_assert!(p.out_excess() >= 0.0);
        prop_assert!(p.rside2 > 0.0);
        prop_assert!(p.lambda_k > 0.0 && p.lambda_k < 1.0 + 2.0 * expansion_parameter(&d) + 1e-15);
    }
}
