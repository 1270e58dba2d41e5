mod common;

use approx::assert_relative_eq;
use boseglow::params::{DerivedParams, ModelParams, HBARC};
use boseglow::Error;
use common::derived;
use proptest::prelude::*;

#[test]
fn derived_quantities_match_high_precision_reference() {
    // m = 139.57 MeV, T = 100 MeV, R = 5 fm, σ = 150 MeV, ħc = 197.327 MeV fm;
    // reference values evaluated with 50-digit arithmetic.
    let d = ModelParams::new(1.0, 5.0, 100.0, 139.57, 150.0)
        .derive()
        .unwrap();
    assert_relative_eq!(d.sigma_t2, 50414.0, max_relative = 1e-15);
    assert_relative_eq!(d.re2, 25.479105801628342, max_relative = 1e-13);
    assert_relative_eq!(d.x, 32.988480574038341, max_relative = 1e-13);
    assert_relative_eq!(d.gamma_plus, 21.086212951519652, max_relative = 1e-13);
    assert_relative_eq!(d.gamma_minus, 12.902267622518689, max_relative = 1e-13);
    assert_relative_eq!(d.nc, 96.827313471214261, max_relative = 1e-13);
    assert_relative_eq!(
        d.te.unwrap(),
        50414.0 / (2.0 * 139.57),
        max_relative = 1e-15
    );
    assert_eq!(d.hbarc, HBARC);
}

#[test]
fn unit_density_fixture() {
    // x = 1: γ± = (2 ± √3)/2, n_c = γ₊^{3/2}.
    let d = DerivedParams::from_x(1.0).unwrap();
    assert_relative_eq!(d.gamma_plus, 1.0 + 3f64.sqrt() / 2.0, max_relative = 1e-15);
    assert_relative_eq!(d.gamma_minus, 1.0 - 3f64.sqrt() / 2.0, max_relative = 1e-14);
    assert_relative_eq!(d.nc, 2.5490381056766580, max_relative = 1e-14);
}

#[test]
fn point_source_limit() {
    // x → 0: γ₊ → 1, γ₋ → 0, n_c → 1.
    let d = DerivedParams::from_x(1e-12).unwrap();
    assert_relative_eq!(d.gamma_plus, 1.0, max_relative = 1e-11);
    assert!(d.gamma_minus < 1e-23);
    assert_relative_eq!(d.nc, 1.0, max_relative = 1e-11);
    let zero = DerivedParams::from_x(0.0).unwrap();
    assert_eq!(zero.gamma_minus, 0.0);
}

#[test]
fn invalid_inputs_name_the_field() {
    let bad = ModelParams::new(1.0, -5.0, 100.0, 139.57, 150.0);
    assert!(matches!(
        bad.derive(),
        Err(Error::InvalidParameter {
            field: "radius",
            ..
        })
    ));
    let bad = ModelParams::new(-1.0, 5.0, 100.0, 139.57, 150.0);
    assert!(matches!(
        bad.derive(),
        Err(Error::InvalidParameter { field: "n0", .. })
    ));
    let bad = ModelParams::new(1.0, 5.0, f64::NAN, 139.57, 150.0);
    assert!(matches!(
        bad.derive(),
        Err(Error::InvalidParameter {
            field: "temperature",
            ..
        })
    ));
    let bad = ModelParams::new(1.0, 5.0, 100.0, 139.57, 0.0);
    assert!(matches!(
        bad.derive(),
        Err(Error::InvalidParameter { field: "sigma", .. })
    ));
    assert!(DerivedParams::natural(-1.0, 1.0).is_err());
    assert!(DerivedParams::natural(1.0, -1.0).is_err());
}

#[test]
fn target_x_round_trip() {
    for x in [1.0, 10.0, 1e3] {
        let p = ModelParams::with_target_x(2.0, x, 10.0, 139.57, 100.0).unwrap();
        assert_relative_eq!(p.derive().unwrap().x, x, max_relative = 1e-12);
    }
    // Below the packet-width floor mT/σ² no positive radius exists.
    assert!(ModelParams::with_target_x(1.0, 0.1, 10.0, 139.57, 100.0).is_err());
}

#[test]
fn emission_time_does_not_enter() {
    let mut p = ModelParams::new(1.0, 5.0, 100.0, 139.57, 150.0);
    let a = p.derive().unwrap();
    p.t0 = 12.5;
    assert_eq!(p.derive().unwrap(), a);
}

#[test]
fn toml_round_trip() {
    let p = ModelParams::new(3.0, 4.0, 120.0, 139.57, 80.0);
    let text = toml::to_string(&p).unwrap();
    let back: ModelParams = toml::from_str(&text).unwrap();
    assert_eq!(back, p);
    let no_t0: ModelParams =
        toml::from_str("n0 = 1.0\nradius = 2.0\ntemperature = 3.0\nmass = 4.0\nsigma = 5.0")
            .unwrap();
    assert_eq!(no_t0.t0, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gamma_identities(d in derived(1e-3, 1e4)) {
        prop_assert!((d.gamma_plus * d.gamma_minus / (d.x * d.x / 4.0) - 1.0).abs() < 1e-12);
        prop_assert!(((d.gamma_plus + d.gamma_minus) / (1.0 + d.x) - 1.0).abs() < 1e-12);
        let s = (d.gamma_plus.sqrt() - d.gamma_minus.sqrt()).powi(2);
        prop_assert!((s - 1.0).abs() < 1e-12);
        prop_assert!(d.gamma_plus > d.gamma_minus && d.gamma_minus >= 0.0);
        prop_assert!((d.gamma_gap() / (d.gamma_plus - d.gamma_minus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn physical_derivation_is_consistent(
        r in 0.5f64..12.0, t in 20.0f64..200.0, sigma in 20.0f64..500.0,
    ) {
        let m = 139.57;
        let d = ModelParams::new(1.0, r, t, m, sigma).derive().unwrap();
        prop_assert!((d.sigma_t2 - (sigma * sigma + 2.0 * m * t)).abs() <= 1e-12 * d.sigma_t2);
        prop_assert!(d.re2 > r * r);
        prop_assert!((d.x / (d.re2 * d.sigma_t2 / (HBARC * HBARC)) - 1.0).abs() < 1e-14);
        prop_assert!(d.nc >= 1.0);
    }
}
