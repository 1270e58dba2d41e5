//! Drives a configuration-file scan from code, the same path as
//! `boseglow run <config>`.
//!
//! ```text
//! cargo run --example parameter_scan -- [config.toml] [output-dir]
//! ```

use std::path::PathBuf;

use boseglow::cli::{load_config, run, validate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/n0_scan.toml")
    });
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("boseglow-scan"));
    let cfg = load_config(&config, Some(out), None)?;
    for d in validate(&cfg) {
        println!("{d}");
    }
    let summary = run(&cfg)?;
    for p in &summary.points {
        let statuses: Vec<String> = p
            .products
            .iter()
            .map(|r| {
                format!(
                    "{}{}={:?}",
                    r.product,
                    if r.variant.is_empty() {
                        String::new()
                    } else {
                        format!("/{}", r.variant)
                    },
                    r.status
                )
            })
            .collect();
        println!(
            "point {} (n0 = {}): {}",
            p.index,
            p.params.n0,
            statuses.join(" ")
        );
    }
    println!("manifest: {}", summary.manifest.display());
    Ok(())
}
