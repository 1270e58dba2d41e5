//! Two-particle correlation functions, inclusive and at fixed multiplicity.
//!
//! ```text
//! cargo run --example correlation
//! ```

use boseglow::spectra::{correlation_grid, CorrelationTable};
use boseglow::ModelParams;

fn main() -> Result<(), boseglow::Error> {
    let params = ModelParams::new(20.0, 5.0, 100.0, 139.57, 150.0);
    let d = params.derive()?;
    let points = correlation_grid(&[0.0, 200.0], 80.0, 8, true);
    let inclusive = CorrelationTable::inclusive(&d, params.n0, &points)?;
    let exclusive = CorrelationTable::exclusive(&d, params.n0, 5, &points)?;

    println!("x = {:.3}, n0 = {}, n_c = {:.2}", d.x, params.n0, d.nc);
    println!(
        "{:>8} {:>8} {:>6} {:>12} {:>12}",
        "K", "dk", "dir", "C2", "C2^(5)"
    );
    for ((p, a), b) in points.iter().zip(&inclusive.values).zip(&exclusive.values) {
        println!(
            "{:>8.1} {:>8.1} {:>6} {:>12.8} {:>12.8}",
            p.k_mean,
            p.dk,
            p.direction.label(),
            a,
            b
        );
    }
    Ok(())
}
