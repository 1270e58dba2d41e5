mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use boseglow::oracle::{
    mc_exclusive_pair_density, mc_exclusive_spectrum, overlap, permanent, permanent_enumerate,
    permanent_ryser, permanent_weight, ring_recursion, CMatrix, McSettings, PacketSource,
    WavePacket, WavePacketConfig,
};
use boseglow::params::{DerivedParams, ModelParams};
use boseglow::spectra::{kernel, ExclusiveSpectra, Momentum3};
use boseglow::Error;
use common::{derived, rel};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(x: f64) -> ModelParams {
    ModelParams::with_target_x(1.0, x, 10.0, 139.57, 100.0).unwrap()
}

fn real(n: usize, f: impl Fn(usize, usize) -> f64) -> CMatrix {
    CMatrix::from_fn(n, |i, j| Complex64::new(f(i, j), 0.0))
}

fn packets(seed: u64, n: usize, params: &ModelParams) -> Vec<WavePacket> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PacketSource::new(params).unwrap().draw(&mut rng, n)
}

#[test]
fn ring_seed_is_the_first_kernel() {
    let d = DerivedParams::natural(1.4, 2.5).unwrap();
    let ring = ring_recursion(&d, 0.8, 1).unwrap();
    let g = kernel(&d, 0.8, 1);
    assert_relative_eq!(ring[0].a, g.an(), max_relative = 1e-14);
    assert_relative_eq!(ring[0].g, g.gn(), max_relative = 1e-14);
    assert_relative_eq!(ring[0].h(), g.hn(), max_relative = 1e-13);
}

#[test]
fn ring_ratio_recovers_the_leading_eigenvalue() {
    for &x in &[0.5, 1.0, 4.0] {
        let d = DerivedParams::from_x(x).unwrap();
        let ring = ring_recursion(&d, 1.0, 80).unwrap();
        let ratio = (ring[78].ln_h - ring[79].ln_h) / 1.5;
        assert!(rel(ratio.exp(), d.gamma_plus) < 1e-10, "x = {x}");
    }
}

#[test]
fn ring_rejects_zero_order() {
    let d = DerivedParams::from_x(1.0).unwrap();
    assert!(matches!(
        ring_recursion(&d, 1.0, 0),
        Err(Error::InvalidOrder { .. })
    ));
}

#[test]
fn overlaps_are_hermitian_and_bounded() {
    let p = fixture(3.0);
    let ps = packets(7, 6, &p);
    for a in &ps {
        assert_relative_eq!(overlap(a, a, p.sigma).re, 1.0, max_relative = 1e-15);
        assert!(overlap(a, a, p.sigma).im.abs() < 1e-15);
        for b in &ps {
            let ab = overlap(a, b, p.sigma);
            let ba = overlap(b, a, p.sigma);
            assert!((ab - ba.conj()).norm() < 1e-15);
            assert!(ab.norm() <= 1.0);
        }
    }
}

#[test]
fn overlap_matches_amplitude_integral() {
    let p = fixture(1.0);
    let ps = packets(11, 2, &p);
    let s = p.sigma;
    // ∫ conj(u_a) u_b d³k by a midpoint grid over ±6σ around the packets.
    let steps = 80;
    let lo = -6.0 * s;
    let h = 12.0 * s / steps as f64;
    let c = (ps[0].pi + ps[1].pi) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..steps {
        for j in 0..steps {
            for l in 0..steps {
                let k = c + Momentum3::new(
                    lo + (i as f64 + 0.5) * h,
                    lo + (j as f64 + 0.5) * h,
                    lo + (l as f64 + 0.5) * h,
                );
                acc += ps[0].amplitude(&k, s).conj() * ps[1].amplitude(&k, s);
            }
        }
    }
    acc *= h * h * h;
    assert!((acc - overlap(&ps[0], &ps[1], s)).norm() < 1e-8);
}

#[test]
fn permanent_special_cases() {
    for n in 1..=8 {
        let id = real(n, |i, j| if i == j { 1.0 } else { 0.0 });
        assert_relative_eq!(permanent(&id).re, 1.0);
        let ones = real(n, |_, _| 1.0);
        let fact: f64 = (1..=n).map(|i| i as f64).product();
        assert_relative_eq!(permanent(&ones).re, fact, max_relative = 1e-13);
    }
}

#[test]
fn enumeration_agrees_with_ryser() {
    let p = fixture(2.0);
    for n in [3, 5, 6] {
        let m = CMatrix::overlaps(&packets(n as u64, n, &p), p.sigma);
        let a = permanent_enumerate(&m);
        let b = permanent_ryser(&m);
        assert!((a - b).norm() < 1e-12 * a.norm(), "n = {n}");
    }
    // Past the dispatch cutoff, on a generic complex matrix.
    for n in [7, 8] {
        let m = CMatrix::from_fn(n, |i, j| {
            Complex64::new(
                ((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.4,
                ((i + 2 * j) % 3) as f64 * 0.2,
            )
        });
        let a = permanent_enumerate(&m);
        let b = permanent_ryser(&m);
        assert!((a - b).norm() < 1e-12 * a.norm().max(1.0), "n = {n}");
        assert_eq!(permanent(&m), b);
    }
}

#[test]
fn weights_lie_between_one_and_factorial() {
    let p = fixture(10.0);
    for n in 1..=8 {
        let fact: f64 = (1..=n).map(|i| i as f64).product();
        for seed in 0..20 {
            let cfg = WavePacketConfig::new(packets(seed, n, &p), p.sigma).unwrap();
            let w = permanent_weight(&cfg).unwrap();
            assert!(
                w >= 1.0 - 1e-12 && w <= fact * (1.0 + 1e-12),
                "n = {n}: {w}"
            );
            assert_eq!(w, cfg.weight);
        }
    }
    let too_many = packets(0, 11, &p);
    assert!(matches!(
        WavePacketConfig::new(too_many, p.sigma),
        Err(Error::SizeLimit { .. })
    ));
}

#[test]
fn weight_increases_along_a_path_to_full_overlap() {
    // G(t) = (1 − t) I + t G for a real Gram matrix with nonnegative entries.
    let v = [[1.0, 0.0, 0.0], [0.6, 0.8, 0.0], [0.3, 0.4, 0.866]];
    let dot = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let g = real(3, |i, j| {
        dot(&v[i], &v[j]) / (dot(&v[i], &v[i]) * dot(&v[j], &v[j])).sqrt()
    });
    let mut prev = 0.0;
    for step in 0..=20 {
        let t = step as f64 / 20.0;
        let m = CMatrix::from_fn(3, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                g.get(i, j) * t
            }
        });
        let w = permanent(&m).re;
        assert!(w >= prev);
        prev = w;
    }
    assert_relative_eq!(prev, permanent(&g).re, max_relative = 1e-14);
}

#[test]
fn mc_is_reproducible_across_thread_counts() {
    let p = fixture(1.0);
    let mut s = McSettings::new(2, 100_000, 99);
    s.streams = 32;
    let grid = [0.0, 50.0, 150.0];
    let a = mc_exclusive_spectrum(&p, &s, &grid).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let b = pool.install(|| mc_exclusive_spectrum(&p, &s, &grid).unwrap());
    assert_eq!(a, b);
    let mut other = s.clone();
    other.seed = Some(100);
    let c = mc_exclusive_spectrum(&p, &other, &grid).unwrap();
    assert_ne!(a.density, c.density);
}

#[test]
fn mc_spectrum_matches_the_closed_form() {
    for &(n, x) in &[(2, 1.0), (3, 10.0)] {
        let p = fixture(x);
        let d = p.derive().unwrap();
        let exact = ExclusiveSpectra::new(&d, p.n0, n).unwrap();
        let st = d.sigma_t2.sqrt();
        let grid: Vec<f64> = (0..6).map(|i| 0.4 * i as f64 * st).collect();
        let mc = mc_exclusive_spectrum(&p, &McSettings::new(n, 200_000, 5), &grid).unwrap();
        for (i, &k) in grid.iter().enumerate() {
            let e = exact.n1(&Momentum3::along_z(k));
            let pull = (mc.n1()[i] - e) / (n as f64 * mc.error[i]);
            assert!(pull.abs() < 4.0, "n = {n}, k = {k}: pull {pull}");
        }
        let e0 = exact.n1(&Momentum3::ZERO);
        assert!(rel(mc.n1()[0], e0) < 0.02, "n = {n}");
        // ω_n relative to ω_0 = 1.
        let omega = exact.ln_omegas()[n].exp();
        let est = mc.omega_estimate(p.n0);
        assert!((est - omega).abs() < 4.0 * mc.mean_weight_error * omega / mc.mean_weight);
    }
}

#[test]
fn mc_without_overlap_is_the_packet_spectrum() {
    // A wide packet width suppresses every spatial overlap.
    let p = ModelParams::new(1.0, 2.0, 10.0, 139.57, 1000.0);
    let st2 = p.sigma * p.sigma + 2.0 * p.mass * p.temperature;
    let grid = [0.0, 500.0, 1000.0];
    let mc = mc_exclusive_spectrum(&p, &McSettings::new(2, 100_000, 3), &grid).unwrap();
    assert!(mc.mean_weight - 1.0 < 0.01);
    for (i, &k) in grid.iter().enumerate() {
        let single = (PI * st2).powf(-1.5) * (-k * k / st2).exp();
        assert!((mc.density[i] - single).abs() < 4.0 * mc.error[i] + 1e-3 * single);
    }
}

#[test]
fn mc_pair_density_at_the_origin() {
    let p = fixture(1.0);
    let d = p.derive().unwrap();
    let pairs = [(Momentum3::ZERO, Momentum3::ZERO)];
    let mc = mc_exclusive_pair_density(&p, &McSettings::new(2, 200_000, 17), &pairs).unwrap();
    let exact = ExclusiveSpectra::new(&d, p.n0, 2)
        .unwrap()
        .n2(&pairs[0].0, &pairs[0].1)
        .unwrap();
    assert!(
        rel(mc.values[0], exact) < 0.03,
        "{} vs {exact}",
        mc.values[0]
    );
}

#[test]
fn mc_rejects_bad_settings() {
    let p = fixture(1.0);
    let mut s = McSettings::new(2, 100_000, 1);
    s.seed = None;
    assert!(matches!(
        mc_exclusive_spectrum(&p, &s, &[0.0]),
        Err(Error::SeedRequired)
    ));
    let s = McSettings::new(5, 100_000, 1);
    assert!(matches!(
        mc_exclusive_spectrum(&p, &s, &[0.0]),
        Err(Error::SizeLimit { .. })
    ));
    let s = McSettings::new(2, 1000, 1);
    assert!(matches!(
        mc_exclusive_spectrum(&p, &s, &[0.0]),
        Err(Error::InvalidParameter {
            field: "samples",
            ..
        })
    ));
    let s = McSettings::new(1, 100_000, 1);
    assert!(matches!(
        mc_exclusive_pair_density(&p, &s, &[(Momentum3::ZERO, Momentum3::ZERO)]),
        Err(Error::InvalidOrder { .. })
    ));
    let s = McSettings::new(2, 100_000, 1).with_tolerance(1e-6);
    assert!(matches!(
        mc_exclusive_spectrum(&p, &s, &[0.0]),
        Err(Error::InsufficientSamples { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_matches_the_closed_form(d in derived(0.01, 30.0), n0 in 0.1f64..5.0) {
        let ring = ring_recursion(&d, n0, 20).unwrap();
        let k1 = Momentum3::new(0.3, -0.1, 0.2);
        let k2 = Momentum3::new(-0.2, 0.4, 0.1);
        for r in &ring {
            let g = kernel(&d, n0, r.n);
            prop_assert!(rel(r.a, g.an()) < 1e-10);
            prop_assert!(rel(r.g, g.gn()) < 1e-10);
            prop_assert!(rel(r.h(), g.hn()) < 1e-10);
            prop_assert!(rel(r.eval(&k1, &k2), g.eval(&k1, &k2)) < 1e-10);
        }
    }
}
