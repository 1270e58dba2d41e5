//! Wave-packet Monte Carlo for exclusive spectra.
//!
//! Packet centres are drawn from the static source, `ξ ~ N(0, R²)` and
//! `π ~ N(0, mT)` per Cartesian component. Each configuration carries the
//! permanent weight `w = per M`, `M_rc = ⟨α_r|α_c⟩`, and the symmetrized
//! one-particle density of the state `|α_1 … α_n⟩`,
//!
//! ```text
//! f(k) = Σ_ij conj(u_i(k)) u_j(k) per M[i|j]
//! ```
//!
//! where `M[i|j]` drops row `i` and column `j`. Since `∫f = n w`, the
//! self-normalized ratio `Σf / Σw` estimates `N₁⁽ⁿ⁾(k)` without the
//! unknown normalization of the weighted ensemble, and `⟨w⟩ n0ⁿ/n!`
//! estimates `ω_n`.
//!
//! Work is split into independent ChaCha8 streams keyed by (seed, stream
//! index); stream tallies are reduced in index order, so results do not
//! depend on the thread count. Errors come from a bootstrap over streams.

use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::wavepacket::{permanent, CMatrix, WavePacket, WavePacketConfig};
use crate::error::{Error, Result};
use crate::logspace::CompensatedSum;
use crate::params::ModelParams;
use crate::spectra::Momentum3;

pub const MIN_SAMPLES: usize = 100_000;
/// Largest multiplicity accepted by the Monte Carlo estimators.
pub const MC_MAX_N: usize = 4;
pub const DEFAULT_STREAMS: usize = 256;
pub const DEFAULT_BOOTSTRAP: usize = 256;

const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub n: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    pub streams: usize,
    pub bootstrap: usize,
    /// Largest acceptable bootstrap relative error at the spectrum peak.
    pub tolerance: Option<f64>,
}

impl McSettings {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        McSettings {
            n,
            samples,
            seed: Some(seed),
            streams: DEFAULT_STREAMS,
            bootstrap: DEFAULT_BOOTSTRAP,
            tolerance: None,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    fn check(&self, min_n: usize) -> Result<u64> {
        let seed = self.seed.ok_or(Error::SeedRequired)?;
        if self.n < min_n {
            return Err(Error::InvalidOrder {
                n: self.n,
                min: min_n,
            });
        }
        if self.n > MC_MAX_N {
            return Err(Error::SizeLimit {
                n: self.n,
                max: MC_MAX_N,
            });
        }
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter {
                field: "samples",
                value: self.samples as f64,
                reason: "at least 100000 samples are required",
            });
        }
        if self.streams == 0 || self.streams > self.samples {
            return Err(Error::InvalidParameter {
                field: "streams",
                value: self.streams as f64,
                reason: "must lie between 1 and the sample count",
            });
        }
        if self.bootstrap < 2 {
            return Err(Error::InvalidParameter {
                field: "bootstrap",
                value: self.bootstrap as f64,
                reason: "at least 2 bootstrap resamples are required",
            });
        }
        Ok(seed)
    }
}

/// Draws packet centres from the source distribution.
#[derive(Debug, Clone, Copy)]
pub struct PacketSource {
    /// Spatial spread per component (fm).
    pub radius: f64,
    /// Momentum spread per component, √(mT) (MeV).
    pub momentum_spread: f64,
    pub sigma: f64,
}

impl PacketSource {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        Ok(PacketSource {
            radius: params.radius,
            momentum_spread: (params.mass * params.temperature).sqrt(),
            sigma: params.sigma,
        })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<WavePacket> {
        (0..n)
            .map(|_| {
                let mut g = || -> f64 { rng.sample(StandardNormal) };
                let xi = [self.radius * g(), self.radius * g(), self.radius * g()];
                let s = self.momentum_spread;
                WavePacket::new(xi, Momentum3::new(s * g(), s * g(), s * g()))
            })
            .collect()
    }

    pub fn draw_config<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<WavePacketConfig> {
        WavePacketConfig::new(self.draw(rng, n), self.sigma)
    }
}

/// Monte Carlo estimate of the exclusive spectrum on a |k| grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSpectrum {
    pub n: usize,
    pub params: ModelParams,
    /// |k| in MeV.
    pub k_grid: Vec<f64>,
    /// `N₁⁽ⁿ⁾(k)/n` (MeV⁻³).
    pub density: Vec<f64>,
    /// Bootstrap standard error of `density`.
    pub error: Vec<f64>,
    /// Unnormalized `⟨per M⟩` over the source distribution.
    pub mean_weight: f64,
    pub mean_weight_error: f64,
    pub min_weight: f64,
    pub max_weight: f64,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    pub bootstrap: usize,
}

impl McSpectrum {
    /// `N₁⁽ⁿ⁾(k)`, normalized to `n`.
    pub fn n1(&self) -> Vec<f64> {
        self.density.iter().map(|v| v * self.n as f64).collect()
    }

    pub fn peak_index(&self) -> usize {
        self.density
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            })
            .0
    }

    pub fn peak_relative_error(&self) -> f64 {
        let i = self.peak_index();
        self.error[i] / self.density[i]
    }

    /// `ω_n ≈ ⟨w⟩ n0ⁿ / n!`.
    pub fn omega_estimate(&self, n0: f64) -> f64 {
        let fact: f64 = (1..=self.n).map(|i| i as f64).product();
        self.mean_weight * n0.powi(self.n as i32) / fact
    }
}

/// Monte Carlo estimate of `N₂⁽ⁿ⁾` at fixed momentum pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McPairDensity {
    pub n: usize,
    pub pairs: Vec<(Momentum3, Momentum3)>,
    /// `N₂⁽ⁿ⁾(k1, k2)` (MeV⁻⁶), normalized to `n(n−1)`.
    pub values: Vec<f64>,
    pub error: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
}

struct Tally {
    num: Vec<CompensatedSum>,
    den: CompensatedSum,
    count: usize,
    w_min: f64,
    w_max: f64,
}

/// Runs all streams, calling `eval` on each configuration to fill the
/// per-point numerators.
fn tally_streams<F>(
    source: &PacketSource,
    settings: &McSettings,
    seed: u64,
    points: usize,
    eval: F,
) -> Vec<Tally>
where
    F: Fn(&mut ChaCha8Rng, &[WavePacket], &CMatrix, &mut [f64]) + Sync,
{
    let base = settings.samples / settings.streams;
    let extra = settings.samples % settings.streams;
    (0..settings.streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let count = base + usize::from(s < extra);
            let mut tally = Tally {
                num: vec![CompensatedSum::default(); points],
                den: CompensatedSum::default(),
                count,
                w_min: f64::INFINITY,
                w_max: f64::NEG_INFINITY,
            };
            let mut buf = vec![0.0; points];
            for _ in 0..count {
                let packets = source.draw(&mut rng, settings.n);
                let m = CMatrix::overlaps(&packets, source.sigma);
                let w = permanent(&m).re;
                tally.den.add(w);
                tally.w_min = tally.w_min.min(w);
                tally.w_max = tally.w_max.max(w);
                eval(&mut rng, &packets, &m, &mut buf);
                for (acc, v) in tally.num.iter_mut().zip(&buf) {
                    acc.add(*v);
                }
            }
            tally
        })
        .collect()
}

struct Reduced {
    ratio: Vec<f64>,
    ratio_error: Vec<f64>,
    mean_weight: f64,
    mean_weight_error: f64,
}

fn reduce(tallies: &[Tally], seed: u64, resamples: usize) -> Reduced {
    let points = tallies.first().map_or(0, |t| t.num.len());
    let totals = |pick: &mut dyn FnMut(usize) -> usize| {
        let mut num = vec![CompensatedSum::default(); points];
        let mut den = CompensatedSum::default();
        let mut count = 0usize;
        for i in 0..tallies.len() {
            let t = &tallies[pick(i)];
            for (a, b) in num.iter_mut().zip(&t.num) {
                a.add(b.value());
            }
            den.add(t.den.value());
            count += t.count;
        }
        let d = den.value();
        let ratio: Vec<f64> = num.iter().map(|v| v.value() / d).collect();
        (ratio, d / count as f64)
    };
    let (ratio, mean_weight) = totals(&mut |i| i);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(BOOTSTRAP_STREAM);
    let s = tallies.len();
    let mut sum = vec![0.0; points];
    let mut sum2 = vec![0.0; points];
    let (mut wsum, mut wsum2) = (0.0, 0.0);
    for _ in 0..resamples {
        let (r, w) = totals(&mut |_| rng.random_range(0..s));
        for i in 0..points {
            let dv = r[i] - ratio[i];
            sum[i] += dv;
            sum2[i] += dv * dv;
        }
        let dw = w - mean_weight;
        wsum += dw;
        wsum2 += dw * dw;
    }
    let b = resamples as f64;
    let sd = |s1: f64, s2: f64| ((s2 - s1 * s1 / b) / (b - 1.0)).max(0.0).sqrt();
    Reduced {
        ratio_error: (0..points).map(|i| sd(sum[i], sum2[i])).collect(),
        ratio,
        mean_weight,
        mean_weight_error: sd(wsum, wsum2),
    }
}

fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Momentum3 {
    loop {
        let v = Momentum3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let norm = v.norm();
        if norm > 1e-12 {
            return v * (1.0 / norm);
        }
    }
}

/// Estimates `N₁⁽ⁿ⁾(k)/n` on `k_grid` (|k| in MeV). The spectrum is
/// isotropic, so each configuration is probed along a fresh random
/// direction.
pub fn mc_exclusive_spectrum(
    params: &ModelParams,
    settings: &McSettings,
    k_grid: &[f64],
) -> Result<McSpectrum> {
    let seed = settings.check(1)?;
    let source = PacketSource::new(params)?;
    let n = settings.n;
    let sigma = source.sigma;
    let tallies = tally_streams(
        &source,
        settings,
        seed,
        k_grid.len(),
        |rng, packets, m, out| {
            let cof = CMatrix::from_fn(n, |i, j| permanent(&m.minor(&[i], &[j])));
            let dir = random_direction(rng);
            let mut u = vec![Complex64::new(0.0, 0.0); n];
            for (slot, &k) in out.iter_mut().zip(k_grid) {
                let kv = dir * k;
                for (ui, p) in u.iter_mut().zip(packets) {
                    *ui = p.amplitude(&kv, sigma);
                }
                let mut f = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        f += u[i].conj() * cof.get(i, j) * u[j];
                    }
                }
                *slot = f.re;
            }
        },
    );
    let w_min = tallies
        .iter()
        .map(|t| t.w_min)
        .fold(f64::INFINITY, f64::min);
    let w_max = tallies
        .iter()
        .map(|t| t.w_max)
        .fold(f64::NEG_INFINITY, f64::max);
    let red = reduce(&tallies, seed, settings.bootstrap);
    let nf = n as f64;
    let out = McSpectrum {
        n,
        params: *params,
        k_grid: k_grid.to_vec(),
        density: red.ratio.iter().map(|v| v / nf).collect(),
        error: red.ratio_error.iter().map(|v| v / nf).collect(),
        mean_weight: red.mean_weight,
        mean_weight_error: red.mean_weight_error,
        min_weight: w_min,
        max_weight: w_max,
        samples: settings.samples,
        seed,
        streams: settings.streams,
        bootstrap: settings.bootstrap,
    };
    if let Some(tol) = settings.tolerance {
        let achieved = out.peak_relative_error();
        if !(achieved <= tol) {
            return Err(Error::InsufficientSamples {
                achieved,
                requested: tol,
            });
        }
    }
    Ok(out)
}

/// Estimates `N₂⁽ⁿ⁾(k1, k2)` at the given pairs.
pub fn mc_exclusive_pair_density(
    params: &ModelParams,
    settings: &McSettings,
    pairs: &[(Momentum3, Momentum3)],
) -> Result<McPairDensity> {
    let seed = settings.check(2)?;
    let source = PacketSource::new(params)?;
    let n = settings.n;
    let sigma = source.sigma;
    let tallies = tally_streams(
        &source,
        settings,
        seed,
        pairs.len(),
        |_, packets, m, out| {
            // per M[{i,i'}|{j,j'}] depends only on the unordered index pairs.
            let mut minors = vec![Complex64::new(0.0, 0.0); n * n * n * n];
            for i in 0..n {
                for i2 in 0..n {
                    for j in 0..n {
                        for j2 in 0..n {
                            if i != i2 && j != j2 && i < i2 && j < j2 {
                                minors[((i * n + i2) * n + j) * n + j2] =
                                    permanent(&m.minor(&[i, i2], &[j, j2]));
                            }
                        }
                    }
                }
            }
            let minor = |i: usize, i2: usize, j: usize, j2: usize| {
                let (a, b) = (i.min(i2), i.max(i2));
                let (c, d) = (j.min(j2), j.max(j2));
                minors[((a * n + b) * n + c) * n + d]
            };
            for (slot, (k1, k2)) in out.iter_mut().zip(pairs) {
                let u1: Vec<Complex64> = packets.iter().map(|p| p.amplitude(k1, sigma)).collect();
                let u2: Vec<Complex64> = packets.iter().map(|p| p.amplitude(k2, sigma)).collect();
                let mut f = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for i2 in 0..n {
                        if i == i2 {
                            continue;
                        }
                        let bra = (u1[i] * u2[i2]).conj();
                        for j in 0..n {
                            for j2 in 0..n {
                                if j == j2 {
                                    continue;
                                }
                                f += bra * u1[j] * u2[j2] * minor(i, i2, j, j2);
                            }
                        }
                    }
                }
                *slot = f.re;
            }
        },
    );
    let red = reduce(&tallies, seed, settings.bootstrap);
    Ok(McPairDensity {
        n,
        pairs: pairs.to_vec(),
        values: red.ratio,
        error: red.ratio_error,
        samples: settings.samples,
        seed,
        streams: settings.streams,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::with_target_x(1.0, 1.0, 10.0, 139.57, 100.0).unwrap()
    }

    #[test]
    fn seed_is_mandatory() {
        let mut s = McSettings::new(2, MIN_SAMPLES, 1);
        s.seed = None;
        assert_eq!(
            mc_exclusive_spectrum(&params(), &s, &[0.0]).unwrap_err(),
            Error::SeedRequired
        );
    }

    #[test]
    fn too_few_samples_rejected() {
        let s = McSettings::new(2, 1000, 1);
        assert!(matches!(
            mc_exclusive_spectrum(&params(), &s, &[0.0]),
            Err(Error::InvalidParameter {
                field: "samples",
                ..
            })
        ));
    }

    #[test]
    fn multiplicity_cap() {
        let s = McSettings::new(5, MIN_SAMPLES, 1);
        assert!(matches!(
            mc_exclusive_spectrum(&params(), &s, &[0.0]),
            Err(Error::SizeLimit { n: 5, max: 4 })
        ));
    }

    #[test]
    fn tolerance_violation_reported() {
        let s = McSettings::new(2, MIN_SAMPLES, 3).with_tolerance(1e-9);
        assert!(matches!(
            mc_exclusive_spectrum(&params(), &s, &[0.0, 50.0]),
            Err(Error::InsufficientSamples { .. })
        ));
    }
}
