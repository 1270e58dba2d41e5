//! Combinants, the multiplicity distribution and the three density regimes.
//!
//! ```text
//! cargo run --example multiplicity
//! ```

use boseglow::multiplicity::{
    classify_regime, combinant, mean_multiplicity, multiplicity_distribution, CombinantSeries,
};
use boseglow::ModelParams;

fn main() -> Result<(), boseglow::Error> {
    let params = ModelParams::new(1.0, 5.0, 100.0, 139.57, 150.0);
    let d = params.derive()?;
    println!(
        "sigma_T^2 = {:.1} MeV^2, R_e^2 = {:.4} fm^2, x = {:.4}, n_c = {:.4}",
        d.sigma_t2, d.re2, d.x, d.nc
    );

    for n0 in [1.0, 30.0, 0.99 * d.nc] {
        let c = CombinantSeries::converged(&d, n0)?;
        let mean = mean_multiplicity(&c)?;
        let dist = multiplicity_distribution(&c)?;
        let peak = dist
            .p
            .iter()
            .enumerate()
            .fold((0, 0.0), |b, (n, &p)| if p > b.1 { (n, p) } else { b });
        println!(
            "n0 = {n0:8.3}: <n> = {:10.4}, p_0 = {:.4e}, mode n = {}, sum p = {:.12}, {} combinants",
            mean.value,
            dist.p[0],
            peak.0,
            dist.total(),
            c.order()
        );
    }

    println!("\nn C_n at x = {:.3} around the critical density:", d.x);
    for (label, n0) in [
        ("0.9 n_c", 0.9 * d.nc),
        ("    n_c", d.nc),
        ("1.1 n_c", 1.1 * d.nc),
    ] {
        let terms: Vec<String> = [1, 10, 100, 1000]
            .iter()
            .map(|&n| format!("{:.3e}", n as f64 * combinant(&d, n0, n)))
            .collect();
        println!(
            "{label} ({:?}): n = 1, 10, 100, 1000 -> {}",
            classify_regime(&d, n0),
            terms.join(", ")
        );
    }
    Ok(())
}
