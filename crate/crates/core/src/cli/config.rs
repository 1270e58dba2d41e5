//! TOML run configuration and its validation.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::multiplicity::N_MAX;
use crate::oracle::montecarlo::{MC_MAX_N, MIN_SAMPLES};
use crate::params::ModelParams;
use crate::raregas::VALIDITY_X;
use crate::spectra::INCLUSIVE_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Product {
    Multiplicity,
    Spectrum,
    Correlation,
    RaregasCompare,
    OracleCheck,
}

impl Product {
    pub fn label(&self) -> &'static str {
        match self {
            Product::Multiplicity => "multiplicity",
            Product::Spectrum => "spectrum",
            Product::Correlation => "correlation",
            Product::RaregasCompare => "raregas-compare",
            Product::OracleCheck => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParameter {
    N0,
    Radius,
    Temperature,
    Mass,
    Sigma,
    /// Density parameter; realized by adjusting the radius.
    X,
}

impl ScanParameter {
    pub fn label(&self) -> &'static str {
        match self {
            ScanParameter::N0 => "n0",
            ScanParameter::Radius => "radius",
            ScanParameter::Temperature => "temperature",
            ScanParameter::Mass => "mass",
            ScanParameter::Sigma => "sigma",
            ScanParameter::X => "x",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// One scan axis: `steps + 1` points from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scan {
    pub parameter: ScanParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Scan {
    pub fn values(&self) -> Vec<f64> {
        let s = self.steps.max(1) as f64;
        (0..=self.steps)
            .map(|i| {
                let t = i as f64 / s;
                match self.spacing {
                    Spacing::Linear => self.from + t * (self.to - self.from),
                    Spacing::Log => (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    /// Largest |k| of single-particle spectra (MeV).
    #[serde(default = "default_k_max")]
    pub k_max: f64,
    #[serde(default = "default_steps")]
    pub k_steps: usize,
    /// Pair mean momenta |K| (MeV).
    #[serde(default = "default_k_means")]
    pub k_means: Vec<f64>,
    /// Largest relative momentum |Δk| (MeV).
    #[serde(default = "default_dk_max")]
    pub dk_max: f64,
    #[serde(default = "default_steps")]
    pub dk_steps: usize,
    /// Tabulate both out and side directions for K ≠ 0.
    #[serde(default = "default_true")]
    pub side_out: bool,
    /// Event multiplicities of exclusive products.
    #[serde(default = "default_exclusive")]
    pub exclusive_n: Vec<usize>,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            k_max: default_k_max(),
            k_steps: default_steps(),
            k_means: default_k_means(),
            dk_max: default_dk_max(),
            dk_steps: default_steps(),
            side_out: true,
            exclusive_n: default_exclusive(),
        }
    }
}

impl Grids {
    pub fn k_grid(&self) -> Vec<f64> {
        let s = self.k_steps.max(1) as f64;
        (0..=self.k_steps)
            .map(|i| self.k_max * i as f64 / s)
            .collect()
    }
}

fn default_k_max() -> f64 {
    600.0
}
fn default_steps() -> usize {
    30
}
fn default_k_means() -> Vec<f64> {
    vec![0.0, 100.0, 300.0]
}
fn default_dk_max() -> f64 {
    100.0
}
fn default_true() -> bool {
    true
}
fn default_exclusive() -> Vec<usize> {
    vec![2, 3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    /// Relative tail tolerance of inclusive kernel sums.
    #[serde(default = "default_eps")]
    pub truncation_eps: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Gauss–Hermite order per axis of oracle quadratures.
    #[serde(default = "default_quadrature_order")]
    pub quadrature_order: usize,
    /// Highest order compared against the convolution recursion.
    #[serde(default = "default_ring_order")]
    pub ring_order: usize,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "default_mc_streams")]
    pub mc_streams: usize,
    pub seed: Option<u64>,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            truncation_eps: default_eps(),
            n_max: default_n_max(),
            quadrature_order: default_quadrature_order(),
            ring_order: default_ring_order(),
            mc_samples: default_mc_samples(),
            mc_streams: default_mc_streams(),
            seed: None,
        }
    }
}

fn default_eps() -> f64 {
    INCLUSIVE_EPS
}
fn default_n_max() -> usize {
    N_MAX
}
fn default_quadrature_order() -> usize {
    64
}
fn default_ring_order() -> usize {
    20
}
fn default_mc_samples() -> usize {
    MIN_SAMPLES
}
fn default_mc_streams() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub scan: Option<Scan>,
    pub products: Vec<Product>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub threads: Option<usize>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("boseglow-out")
}

impl RunConfig {
    /// Parses TOML; the error message carries line and column.
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn wants(&self, p: Product) -> bool {
        self.products.contains(&p)
    }

    /// Model parameters at every scan point, in order. A single point if
    /// there is no scan.
    pub fn scan_points(&self) -> Vec<Result<ModelParams, String>> {
        let Some(scan) = self.scan else {
            return vec![Ok(self.model)];
        };
        scan.values()
            .into_iter()
            .map(|v| {
                let mut p = self.model;
                match scan.parameter {
                    ScanParameter::N0 => p.n0 = v,
                    ScanParameter::Radius => p.radius = v,
                    ScanParameter::Temperature => p.temperature = v,
                    ScanParameter::Mass => p.mass = v,
                    ScanParameter::Sigma => p.sigma = v,
                    ScanParameter::X => {
                        let mut q =
                            ModelParams::with_target_x(p.n0, v, p.temperature, p.mass, p.sigma)
                                .map_err(|e| e.to_string())?;
                        q.t0 = p.t0;
                        p = q;
                    }
                }
                Ok(p)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{s}: {}: {}", self.field, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Diagnostics for a parsed configuration. No errors means `run` will
/// start.
pub fn validate(cfg: &RunConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut error = |field: &str, message: String| {
        out.push(Diagnostic {
            severity: Severity::Error,
            field: field.to_string(),
            message,
        })
    };

    let m = &cfg.model;
    for (field, v) in [
        ("model.radius", m.radius),
        ("model.temperature", m.temperature),
        ("model.mass", m.mass),
        ("model.sigma", m.sigma),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            error(field, format!("must be positive and finite, got {v}"));
        }
    }
    if !(m.n0 >= 0.0 && m.n0.is_finite()) {
        error(
            "model.n0",
            format!("must be non-negative and finite, got {}", m.n0),
        );
    }
    if !m.t0.is_finite() {
        error("model.t0", format!("must be finite, got {}", m.t0));
    }

    if let Some(scan) = &cfg.scan {
        if scan.steps < 1 {
            error("scan.steps", "must be at least 1".into());
        }
        if !(scan.from.is_finite() && scan.to.is_finite()) || scan.from == scan.to {
            error(
                "scan",
                format!("range [{}, {}] is empty", scan.from, scan.to),
            );
        }
        if scan.spacing == Spacing::Log && !(scan.from > 0.0 && scan.to > 0.0) {
            error("scan.spacing", "log spacing needs a positive range".into());
        }
    }

    if cfg.products.is_empty() {
        error("products", "at least one product is required".into());
    }
    let g = &cfg.grids;
    if !(g.k_max > 0.0 && g.k_max.is_finite()) {
        error("grids.k_max", format!("must be positive, got {}", g.k_max));
    }
    if g.k_steps < 1 {
        error("grids.k_steps", "must be at least 1".into());
    }
    if !(g.dk_max > 0.0 && g.dk_max.is_finite()) {
        error(
            "grids.dk_max",
            format!("must be positive, got {}", g.dk_max),
        );
    }
    if g.dk_steps < 1 {
        error("grids.dk_steps", "must be at least 1".into());
    }
    if g.k_means.is_empty() || g.k_means.iter().any(|k| !(*k >= 0.0 && k.is_finite())) {
        error(
            "grids.k_means",
            "needs at least one non-negative finite entry".into(),
        );
    }
    let needs_pairs = cfg.wants(Product::Correlation) || cfg.wants(Product::RaregasCompare);
    for &n in &g.exclusive_n {
        if n < 1 || (needs_pairs && n < 2) {
            error(
                "grids.exclusive_n",
                format!("multiplicity {n} too small for the requested products"),
            );
        }
    }

    let num = &cfg.numerics;
    if !(num.truncation_eps > 0.0 && num.truncation_eps < 1.0) {
        error(
            "numerics.truncation_eps",
            format!("must lie in (0, 1), got {}", num.truncation_eps),
        );
    }
    if num.n_max < 2 {
        error("numerics.n_max", "must be at least 2".into());
    }
    if num.quadrature_order < 2 {
        error("numerics.quadrature_order", "must be at least 2".into());
    }
    if num.ring_order < 1 {
        error("numerics.ring_order", "must be at least 1".into());
    }
    if cfg.wants(Product::OracleCheck) {
        if num.seed.is_none() {
            error(
                "numerics.seed",
                "oracle-check runs the Monte Carlo oracle and needs an explicit seed".into(),
            );
        }
        if num.mc_samples < MIN_SAMPLES {
            error(
                "numerics.mc_samples",
                format!("must be at least {MIN_SAMPLES}"),
            );
        }
        if num.mc_streams < 1 || num.mc_streams > num.mc_samples {
            error(
                "numerics.mc_streams",
                "must lie between 1 and mc_samples".into(),
            );
        }
        if g.exclusive_n.iter().any(|&n| n > MC_MAX_N) {
            error(
                "grids.exclusive_n",
                format!("Monte Carlo checks support multiplicities up to {MC_MAX_N}"),
            );
        }
    }
    if cfg.threads == Some(0) {
        error("threads", "must be at least 1".into());
    }

    let mut low_x = None;
    for (i, p) in cfg.scan_points().into_iter().enumerate() {
        match p.and_then(|p| p.derive().map_err(|e| e.to_string())) {
            Ok(d) => {
                if d.x < VALIDITY_X && low_x.is_none() {
                    low_x = Some(d.x);
                }
            }
            Err(e) if cfg.scan.is_some() => error("scan", format!("point {i}: {e}")),
            Err(_) => {}
        }
    }
    if cfg.wants(Product::RaregasCompare) {
        if let Some(x) = low_x {
            out.push(Diagnostic {
                severity: Severity::Warning,
                field: "products".into(),
                message: format!(
                    "raregas-compare requested at x = {x:.4} < {VALIDITY_X}; the expansion is not expected to hold"
                ),
            });
        }
    }
    out
}
