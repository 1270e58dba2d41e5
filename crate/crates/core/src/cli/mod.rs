//! Batch front end: `boseglow run <config>` and `boseglow validate <config>`.

pub mod config;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{validate, Diagnostic, Product, RunConfig, Scan, ScanParameter, Severity};
pub use run::{run, CliError, RunSummary, Status};

#[derive(Debug, Parser)]
#[command(
    name = "boseglow",
    version,
    about = "Pion-laser model spectra, correlations and oracle checks"
)]
pub struct Cli {
    /// Override the output directory of the config.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Override the worker thread count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every requested product and write a manifest.
    Run { config: PathBuf },
    /// Check a config and print diagnostics without computing anything.
    Validate { config: PathBuf },
}

/// Reads and parses a config, applying command-line overrides.
pub fn load_config(
    path: &std::path::Path,
    output_dir: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::from_toml(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    if threads.is_some() {
        cfg.threads = threads;
    }
    Ok(cfg)
}

/// Runs the parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { config } => {
            let cfg = match load_config(&config, cli.output_dir, cli.threads) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return e.exit_code();
                }
            };
            let diags = validate(&cfg);
            for d in &diags {
                eprintln!("{d}");
            }
            if config::has_errors(&diags) {
                1
            } else {
                println!("{}: ok", config.display());
                0
            }
        }
        Command::Run { config } => {
            let result = load_config(&config, cli.output_dir, cli.threads).and_then(|cfg| {
                for d in validate(&cfg)
                    .iter()
                    .filter(|d| d.severity == Severity::Warning)
                {
                    eprintln!("{d}");
                }
                run(&cfg)
            });
            match result {
                Ok(summary) => {
                    println!(
                        "wrote {} ({} failed, {} divergent)",
                        summary.manifest.display(),
                        summary.failures(),
                        summary.divergent()
                    );
                    if summary.failures() > 0 {
                        2
                    } else {
                        0
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    e.exit_code()
                }
            }
        }
    }
}
