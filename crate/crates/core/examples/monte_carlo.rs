//! Wave-packet Monte Carlo against the closed-form exclusive spectrum.
//!
//! Samples packet configurations from the source, weights them by the
//! permanent of their overlap matrix and compares the resulting
//! single-particle density with `N₁⁽ⁿ⁾(k)/n`.
//!
//! ```text
//! cargo run --release --example monte_carlo -- [n] [x] [samples]
//! ```

use boseglow::oracle::{mc_exclusive_spectrum, McSettings};
use boseglow::spectra::ExclusiveSpectra;
use boseglow::{ModelParams, Momentum3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(2), |s| s.parse())?;
    let x: f64 = args.get(1).map_or(Ok(1.0), |s| s.parse())?;
    let samples: usize = args.get(2).map_or(Ok(200_000), |s| s.parse())?;

    let params = ModelParams::with_target_x(1.0, x, 10.0, 139.57, 100.0)?;
    let d = params.derive()?;
    let exact = ExclusiveSpectra::new(&d, params.n0, n)?;
    let st = d.sigma_t2.sqrt();
    let grid: Vec<f64> = (0..=12).map(|i| 0.2 * st * i as f64).collect();

    let mc = mc_exclusive_spectrum(&params, &McSettings::new(n, samples, 2024), &grid)?;
    println!(
        "n = {n}, x = {x}, R = {:.4} fm, sigma_T = {st:.4} MeV",
        params.radius
    );
    println!(
        "{:>10} {:>14} {:>14} {:>12} {:>8}",
        "k [MeV]", "exact", "mc", "stderr", "pull"
    );
    for (i, &k) in grid.iter().enumerate() {
        let e = exact.n1(&Momentum3::along_z(k)) / n as f64;
        let (m, s) = (mc.density[i], mc.error[i]);
        println!(
            "{k:>10.3} {e:>14.6e} {m:>14.6e} {s:>12.3e} {:>8.2}",
            (m - e) / s
        );
    }
    println!(
        "weights in [{:.4}, {:.4}], <w> = {:.6} +- {:.2e}, omega_n estimate {:.6} vs exact {:.6}",
        mc.min_weight,
        mc.max_weight,
        mc.mean_weight,
        mc.mean_weight_error,
        mc.omega_estimate(params.n0),
        exact.ln_omegas()[n].exp()
    );
    Ok(())
}
