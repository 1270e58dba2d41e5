//! Executes a validated [`RunConfig`]: one set of files per product per
//! scan point, then a manifest.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::{has_errors, validate, Product, RunConfig};
use crate::error::Error;
use crate::multiplicity::{
    classify_regime, combinant, multiplicity_distribution, CombinantSeries, Regime,
};
use crate::oracle::{mc_exclusive_spectrum, ring_recursion, HermiteRule, McSettings};
use crate::output::DataTable;
use crate::params::{DerivedParams, ModelParams};
use crate::raregas::{compare_exact_vs_rare, radius_params, validity};
use crate::spectra::{
    correlation_grid, ExclusiveSpectra, GaussianKernel, InclusiveSpectra, Momentum3,
};

pub const MANIFEST: &str = "manifest.json";

/// Thresholds reported by the oracle-check product.
pub const RING_TOLERANCE: f64 = 1e-10;
pub const BRIDGE_TOLERANCE: f64 = 1e-8;
pub const MC_PULL_LIMIT: f64 = 3.0;
pub const MC_PEAK_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Computation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Computation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Computation(m) => write!(f, "computation error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// Inclusive product refused outside the convergent regime; recorded
    /// but not a run failure.
    Divergent,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductRecord {
    pub product: String,
    pub variant: String,
    pub status: Status,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub params: ModelParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<DerivedParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    pub products: Vec<ProductRecord>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub manifest: PathBuf,
    pub points: Vec<PointRecord>,
}

impl RunSummary {
    pub fn failures(&self) -> usize {
        self.records().filter(|r| r.status == Status::Error).count()
    }

    pub fn divergent(&self) -> usize {
        self.records()
            .filter(|r| r.status == Status::Divergent)
            .count()
    }

    fn records(&self) -> impl Iterator<Item = &ProductRecord> {
        self.points.iter().flat_map(|p| p.products.iter())
    }
}

/// Runs the configuration. Computation failures are recorded per point in
/// the manifest and counted in [`RunSummary::failures`]; only bad
/// configuration and I/O abort the run.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let diags = validate(cfg);
    if has_errors(&diags) {
        let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(CliError::Config(msgs.join("; ")));
    }
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;

    let points: Vec<(usize, ModelParams)> = cfg
        .scan_points()
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.map(|p| (i, p)).map_err(CliError::Config))
        .collect::<Result<_, _>>()?;
    let records = pool.install(|| {
        points
            .par_iter()
            .map(|(i, p)| run_point(cfg, &dir, *i, p))
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    let generated = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = json!({
        "tool": "boseglow",
        "version": env!("CARGO_PKG_VERSION"),
        "generated_unix": generated,
        "config": cfg,
        "points": records,
    });
    let path = dir.join(MANIFEST);
    let mut text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(RunSummary {
        output_dir: dir,
        manifest: path,
        points: records,
    })
}

struct Point<'a> {
    cfg: &'a RunConfig,
    dir: &'a Path,
    index: usize,
    params: ModelParams,
    d: DerivedParams,
}

impl Point<'_> {
    fn table(&self, product: &str, variant: &str, columns: &[&str]) -> DataTable {
        let mut t = DataTable::new(product, columns);
        if !variant.is_empty() {
            t.meta("variant", variant);
        }
        let p = &self.params;
        t.meta("scan_index", self.index);
        if let Some(scan) = &self.cfg.scan {
            t.meta("scan_parameter", scan.parameter.label());
        }
        t.meta("n0", p.n0)
            .meta("radius_fm", p.radius)
            .meta("temperature_mev", p.temperature)
            .meta("mass_mev", p.mass)
            .meta("sigma_mev", p.sigma)
            .meta("t0_fm", p.t0)
            .meta("sigma_t2_mev2", self.d.sigma_t2)
            .meta("re2_fm2", self.d.re2)
            .meta("x", self.d.x)
            .meta("gamma_plus", self.d.gamma_plus)
            .meta("gamma_minus", self.d.gamma_minus)
            .meta("nc", self.d.nc)
            .meta("regime", regime_label(classify_regime(&self.d, p.n0)));
        t
    }

    fn write(
        &self,
        table: &DataTable,
        product: Product,
        variant: &str,
    ) -> Result<ProductRecord, CliError> {
        let stem = if variant.is_empty() {
            format!("p{:03}_{}", self.index, product.label())
        } else {
            format!("p{:03}_{}_{}", self.index, product.label(), variant)
        };
        let files = table
            .write(self.dir, &stem)
            .map_err(|e| CliError::Io(format!("{stem}: {e}")))?;
        Ok(ProductRecord {
            product: product.label().to_string(),
            variant: variant.to_string(),
            status: Status::Ok,
            files: files
                .iter()
                .filter_map(|f| f.file_name().map(|n| n.to_string_lossy().into_owned()))
                .collect(),
            error: None,
        })
    }

    /// Turns a computation result into a manifest record, writing the
    /// table on success.
    fn record(
        &self,
        product: Product,
        variant: &str,
        result: Result<DataTable, Error>,
    ) -> Result<ProductRecord, CliError> {
        match result {
            Ok(t) => self.write(&t, product, variant),
            Err(e) => Ok(ProductRecord {
                product: product.label().to_string(),
                variant: variant.to_string(),
                status: match e {
                    Error::DivergentMean { .. } => Status::Divergent,
                    _ => Status::Error,
                },
                files: Vec::new(),
                error: Some(e.to_string()),
            }),
        }
    }
}

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::Convergent => "convergent",
        Regime::Critical => "critical",
        Regime::Condensed => "condensed",
    }
}

fn run_point(
    cfg: &RunConfig,
    dir: &Path,
    index: usize,
    params: &ModelParams,
) -> Result<PointRecord, CliError> {
    let d = match params.derive() {
        Ok(d) => d,
        Err(e) => {
            return Ok(PointRecord {
                index,
                params: *params,
                derived: None,
                regime: None,
                products: vec![ProductRecord {
                    product: "model".into(),
                    variant: String::new(),
                    status: Status::Error,
                    files: Vec::new(),
                    error: Some(e.to_string()),
                }],
            })
        }
    };
    let pt = Point {
        cfg,
        dir,
        index,
        params: *params,
        d,
    };
    let mut products = Vec::new();
    for &product in &cfg.products {
        match product {
            Product::Multiplicity => {
                products.push(pt.record(product, "", multiplicity_table(&pt)));
            }
            Product::Spectrum => {
                products.push(pt.record(product, "inclusive", inclusive_spectrum(&pt)));
                for &n in &cfg.grids.exclusive_n {
                    let v = format!("exclusive_n{n}");
                    products.push(pt.record(product, &v, exclusive_spectrum(&pt, n)));
                }
            }
            Product::Correlation => {
                products.push(pt.record(product, "inclusive", inclusive_correlation(&pt)));
                for &n in &cfg.grids.exclusive_n {
                    let v = format!("exclusive_n{n}");
                    products.push(pt.record(product, &v, exclusive_correlation(&pt, n)));
                }
            }
            Product::RaregasCompare => {
                for &n in &cfg.grids.exclusive_n {
                    let v = format!("n{n}");
                    products.push(pt.record(product, &v, raregas_table(&pt, n)));
                    let v = format!("radii_n{n}");
                    products.push(pt.record(product, &v, radii_table(&pt, n)));
                }
            }
            Product::OracleCheck => {
                let (summary, mc_tables) = oracle_check(&pt);
                products.push(pt.record(product, "summary", summary));
                for (n, t) in mc_tables {
                    let v = format!("mc_n{n}");
                    products.push(pt.record(product, &v, t));
                }
            }
        }
    }
    Ok(PointRecord {
        index,
        params: *params,
        derived: Some(d),
        regime: Some(classify_regime(&d, params.n0)),
        products: products.into_iter().collect::<Result<_, _>>()?,
    })
}

fn multiplicity_table(pt: &Point) -> Result<DataTable, Error> {
    let c = CombinantSeries::converged(&pt.d, pt.params.n0)?;
    let dist = multiplicity_distribution(&c)?;
    let mut t = pt.table(
        "multiplicity",
        "",
        &["n", "C_n", "p_n", "n_C_n", "cumulative"],
    );
    t.meta("mean", dist.mean)
        .meta("combinant_order", c.order())
        .meta("truncation_error", c.truncation_error);
    for (n, (p, cum)) in dist.p.iter().zip(dist.cumulative()).enumerate() {
        let cn = c.get(n).max(0.0);
        let cn = if n == 0 { 0.0 } else { cn };
        t.push(vec![
            n.into(),
            cn.into(),
            (*p).into(),
            (n as f64 * cn).into(),
            cum.into(),
        ]);
    }
    Ok(t)
}

fn inclusive(pt: &Point) -> Result<InclusiveSpectra, Error> {
    let num = &pt.cfg.numerics;
    InclusiveSpectra::with_tolerance(&pt.d, pt.params.n0, num.truncation_eps, num.n_max)
}

fn spectrum_columns(
    mut t: DataTable,
    grid: &[f64],
    values: impl Iterator<Item = Result<f64, Error>>,
) -> Result<DataTable, Error> {
    for (k, v) in grid.iter().zip(values) {
        t.push(vec![(*k).into(), v?.into()]);
    }
    Ok(t)
}

fn inclusive_spectrum(pt: &Point) -> Result<DataTable, Error> {
    let s = inclusive(pt)?;
    let grid = pt.cfg.grids.k_grid();
    let values: Vec<Result<f64, Error>> = grid
        .par_iter()
        .map(|k| s.n1(&Momentum3::along_z(*k)))
        .collect();
    let mut t = pt.table("spectrum", "inclusive", &["k_mev", "N1"]);
    t.meta("truncation_eps", pt.cfg.numerics.truncation_eps);
    spectrum_columns(t, &grid, values.into_iter())
}

fn exclusive_spectrum(pt: &Point, n: usize) -> Result<DataTable, Error> {
    let s = ExclusiveSpectra::new(&pt.d, pt.params.n0, n)?;
    let grid = pt.cfg.grids.k_grid();
    let values: Vec<Result<f64, Error>> = grid
        .par_iter()
        .map(|k| Ok(s.n1(&Momentum3::along_z(*k))))
        .collect();
    let mut t = pt.table("spectrum", &format!("exclusive_n{n}"), &["k_mev", "N1"]);
    t.meta("n", n);
    spectrum_columns(t, &grid, values.into_iter())
}

fn pair_grid(pt: &Point) -> Vec<crate::spectra::CorrelationPoint> {
    let g = &pt.cfg.grids;
    correlation_grid(&g.k_means, g.dk_max, g.dk_steps, g.side_out)
}

fn correlation_rows(
    mut t: DataTable,
    points: &[crate::spectra::CorrelationPoint],
    c2: impl Fn(&Momentum3, &Momentum3) -> Result<f64, Error> + Sync,
) -> Result<DataTable, Error> {
    let values: Vec<Result<f64, Error>> = points
        .par_iter()
        .map(|p| {
            let (k1, k2) = p.momenta();
            c2(&k1, &k2)
        })
        .collect();
    for (p, v) in points.iter().zip(values) {
        t.push(vec![
            p.k_mean.into(),
            p.dk.into(),
            p.direction.label().into(),
            v?.into(),
        ]);
    }
    Ok(t)
}

fn inclusive_correlation(pt: &Point) -> Result<DataTable, Error> {
    let s = inclusive(pt)?;
    let mut t = pt.table(
        "correlation",
        "inclusive",
        &["K_mev", "dk_mev", "direction", "C2"],
    );
    t.meta("truncation_eps", pt.cfg.numerics.truncation_eps);
    correlation_rows(t, &pair_grid(pt), |a, b| s.c2(a, b))
}

fn exclusive_correlation(pt: &Point, n: usize) -> Result<DataTable, Error> {
    let s = ExclusiveSpectra::new(&pt.d, pt.params.n0, n)?;
    let mut t = pt.table(
        "correlation",
        &format!("exclusive_n{n}"),
        &["K_mev", "dk_mev", "direction", "C2"],
    );
    t.meta("n", n).meta("large_dk_baseline", s.c2_baseline()?);
    correlation_rows(t, &pair_grid(pt), |a, b| s.c2(a, b))
}

fn raregas_table(pt: &Point, n: usize) -> Result<DataTable, Error> {
    let report = compare_exact_vs_rare(&pt.d, pt.params.n0, n, &pair_grid(pt))?;
    let mut t = pt.table(
        "raregas-compare",
        &format!("n{n}"),
        &[
            "K_mev",
            "dk_mev",
            "direction",
            "dk_out_mev",
            "dk_side_mev",
            "C2_exact",
            "C2_rare",
            "abs_dev",
            "rel_dev",
        ],
    );
    t.meta("n", n)
        .meta("valid", report.validity.valid)
        .meta("correction_scale", report.validity.correction_scale)
        .meta("exact_baseline", report.exact_baseline)
        .meta("max_abs_dev", report.max_abs)
        .meta("mean_abs_dev", report.mean_abs)
        .meta("intercept_max_abs_dev", report.intercept_max_abs);
    for r in &report.rows {
        t.push(vec![
            r.point.k_mean.into(),
            r.point.dk.into(),
            r.point.direction.label().into(),
            r.dk_out.into(),
            r.dk_side.into(),
            r.exact.into(),
            r.rare.into(),
            r.abs_dev.into(),
            r.rel_dev.into(),
        ]);
    }
    Ok(t)
}

fn radii_table(pt: &Point, n: usize) -> Result<DataTable, Error> {
    let mut t = pt.table(
        "raregas-compare",
        &format!("radii_n{n}"),
        &[
            "K_mev",
            "lambda_K",
            "R_side2_fm2",
            "R_out2_fm2",
            "out_minus_side_fm2",
        ],
    );
    let v = validity(&pt.d, n);
    t.meta("n", n)
        .meta("valid", v.valid)
        .meta("correction_scale", v.correction_scale);
    for &k in &pt.cfg.grids.k_means {
        let r = radius_params(&pt.d, n, k)?;
        t.push(vec![
            k.into(),
            r.lambda_k.into(),
            r.rside2.into(),
            r.rout2.into(),
            r.out_excess().into(),
        ]);
    }
    Ok(t)
}

/// Deterministic momentum pairs in units of σ_T.
const RING_PAIRS: [([f64; 3], [f64; 3]); 5] = [
    ([0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ([0.3, -0.2, 0.1], [0.3, -0.2, 0.1]),
    ([0.5, 0.0, 0.0], [-0.4, 0.2, 0.0]),
    ([1.1, 0.7, -0.3], [0.2, -0.9, 0.6]),
    ([-0.8, 0.4, 1.2], [0.0, 0.3, -0.5]),
];

fn oracle_check(
    pt: &Point,
) -> (
    Result<DataTable, Error>,
    Vec<(usize, Result<DataTable, Error>)>,
) {
    let num = &pt.cfg.numerics;
    let mut t = pt.table(
        "oracle-check",
        "summary",
        &["check", "n", "max_deviation", "threshold", "pass"],
    );
    t.meta("ring_order", num.ring_order)
        .meta("quadrature_order", num.quadrature_order)
        .meta("mc_samples", num.mc_samples)
        .meta("mc_streams", num.mc_streams);
    if let Some(seed) = num.seed {
        t.meta("seed", seed.to_string());
    }
    let summary = (|| {
        let d = &pt.d;
        let n0 = pt.params.n0;
        let st = d.sigma_t2.sqrt();
        let ring = ring_recursion(d, n0, num.ring_order)?;
        let rule = HermiteRule::new(num.quadrature_order)?;
        for c in &ring {
            let k = GaussianKernel::new(d, n0, c.n);
            let mut worst: f64 = 0.0;
            for (a, b) in RING_PAIRS {
                let k1 = Momentum3::from(a) * st;
                let k2 = Momentum3::from(b) * st;
                let dev = (c.ln_eval(&k1, &k2) - k.ln_eval(&k1, &k2)).exp_m1().abs();
                worst = worst.max(dev);
            }
            t.push(vec![
                "ring".into(),
                c.n.into(),
                worst.into(),
                RING_TOLERANCE.into(),
                (worst <= RING_TOLERANCE).into(),
            ]);
        }
        for n in 1..=num.ring_order {
            let k = GaussianKernel::new(d, n0, n);
            let ln_j = k.ln_eval(&Momentum3::ZERO, &Momentum3::ZERO);
            let axis = rule.integrate_1d(st, |u| {
                let p = Momentum3::along_x(u);
                (k.ln_eval(&p, &p) - ln_j).exp()
            });
            let integral = ln_j.exp() * axis.powi(3);
            let target = n as f64 * combinant(d, n0, n);
            let dev = (integral / target - 1.0).abs();
            t.push(vec![
                "bridge".into(),
                n.into(),
                dev.into(),
                BRIDGE_TOLERANCE.into(),
                (dev <= BRIDGE_TOLERANCE).into(),
            ]);
        }
        Ok(t)
    })();

    let mut mc_tables = Vec::new();
    let mut mc_rows = Vec::new();
    for &n in &pt.cfg.grids.exclusive_n {
        let table = mc_table(pt, n);
        if let Ok((_, pull, peak)) = &table {
            mc_rows.push((n, *pull, *peak));
        }
        mc_tables.push((n, table.map(|(t, _, _)| t)));
    }
    let summary = summary.map(|mut t| {
        for (n, pull, peak) in mc_rows {
            t.push(vec![
                "mc_max_pull".into(),
                n.into(),
                pull.into(),
                MC_PULL_LIMIT.into(),
                (pull <= MC_PULL_LIMIT).into(),
            ]);
            t.push(vec![
                "mc_peak_rel_dev".into(),
                n.into(),
                peak.into(),
                MC_PEAK_TOLERANCE.into(),
                (peak <= MC_PEAK_TOLERANCE).into(),
            ]);
        }
        t
    });
    (summary, mc_tables)
}

/// MC spectrum against the closed form; returns the table, the largest
/// |pull| and the relative deviation at the peak.
fn mc_table(pt: &Point, n: usize) -> Result<(DataTable, f64, f64), Error> {
    let num = &pt.cfg.numerics;
    let seed = num.seed.ok_or(Error::SeedRequired)?;
    let mut settings = McSettings::new(n, num.mc_samples, seed);
    settings.streams = num.mc_streams;
    let exact = ExclusiveSpectra::new(&pt.d, pt.params.n0, n)?;
    let grid = pt.cfg.grids.k_grid();
    let mc = mc_exclusive_spectrum(&pt.params, &settings, &grid)?;
    let mut t = pt.table(
        "oracle-check",
        &format!("mc_n{n}"),
        &["k_mev", "exact_density", "mc_density", "mc_error", "pull"],
    );
    t.meta("n", n)
        .meta("seed", seed.to_string())
        .meta("samples", mc.samples)
        .meta("streams", mc.streams)
        .meta("bootstrap", mc.bootstrap)
        .meta("mean_weight", mc.mean_weight)
        .meta("mean_weight_error", mc.mean_weight_error)
        .meta("min_weight", mc.min_weight)
        .meta("max_weight", mc.max_weight);
    let mut max_pull: f64 = 0.0;
    for (i, &k) in grid.iter().enumerate() {
        let e = exact.n1(&Momentum3::along_z(k)) / n as f64;
        let pull = (mc.density[i] - e) / mc.error[i];
        max_pull = max_pull.max(pull.abs());
        t.push(vec![
            k.into(),
            e.into(),
            mc.density[i].into(),
            mc.error[i].into(),
            pull.into(),
        ]);
    }
    let i = mc.peak_index();
    let e = exact.n1(&Momentum3::along_z(grid[i])) / n as f64;
    let peak = (mc.density[i] / e - 1.0).abs();
    Ok((t, max_pull, peak))
}
