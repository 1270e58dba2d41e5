//! Inclusive and exclusive single-particle spectra.
//!
//! ```text
//! cargo run --example spectra
//! ```

use boseglow::spectra::{ExclusiveSpectra, InclusiveSpectra};
use boseglow::{ModelParams, Momentum3};

fn main() -> Result<(), boseglow::Error> {
    let params = ModelParams::new(40.0, 5.0, 100.0, 139.57, 150.0);
    let d = params.derive()?;
    let inclusive = InclusiveSpectra::new(&d, params.n0)?;
    let exclusive: Vec<ExclusiveSpectra> = [1, 10, 60]
        .iter()
        .map(|&n| ExclusiveSpectra::new(&d, params.n0, n))
        .collect::<Result<_, _>>()?;

    println!("n0 = {} (n_c = {:.2}), x = {:.3}", params.n0, d.nc, d.x);
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>14}",
        "k [MeV]", "N1", "N1^(1)/1", "N1^(10)/10", "N1^(60)/60"
    );
    for i in 0..=12 {
        let k = Momentum3::along_z(50.0 * i as f64);
        let mut row = format!("{:>8.1} {:>14.6e}", k.kz, inclusive.n1(&k)?);
        for ex in &exclusive {
            row += &format!(" {:>14.6e}", ex.n1(&k) / ex.multiplicity() as f64);
        }
        println!("{row}");
    }
    println!("\nHigher-multiplicity events are colder: bosons accumulate in low-momentum modes.");
    Ok(())
}
