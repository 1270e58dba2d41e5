//! Rare-gas intercepts and radii, and how well the Gaussian form tracks
//! the exact exclusive correlator as the density parameter grows.
//!
//! ```text
//! cargo run --release --example rare_gas
//! ```

use boseglow::params::DerivedParams;
use boseglow::raregas::{compare_exact_vs_rare, radius_params, scaled_grid};

fn main() -> Result<(), boseglow::Error> {
    let d = DerivedParams::from_x(1e3)?;
    println!("x = {}, sigma_T = 1, R_e^2 = {:.1}", d.x, d.re2);
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "K", "lambda_K", "R_s^2/R_e^2", "R_o^2/R_e^2", "excess"
    );
    for i in 0..=8 {
        let k = 0.25 * i as f64;
        let r = radius_params(&d, 2, k)?;
        println!(
            "{k:>6.2} {:>12.8} {:>12.8} {:>12.8} {:>12.4e}",
            r.lambda_k,
            r.rside2 / d.re2,
            r.rout2 / d.re2,
            r.out_excess() / d.re2
        );
    }

    println!("\nmax |C2_exact - C2_rare| on a grid scaled to sigma_T and R_e, n = 2:");
    for x in [1e2, 1e3, 1e4] {
        let d = DerivedParams::from_x(x)?;
        let grid = scaled_grid(&d, &[0.0, 0.5, 1.0, 1.5, 2.0], &[0.0, 0.5, 1.0, 1.5]);
        let rep = compare_exact_vs_rare(&d, 1.0, 2, &grid)?;
        println!(
            "x = {x:>7}: max {:.3e}, at dk = 0 {:.3e}, scaled by (2x)^(3/2): {:.3}",
            rep.max_abs,
            rep.intercept_max_abs,
            rep.max_abs * (2.0 * x).powf(1.5)
        );
    }
    Ok(())
}
