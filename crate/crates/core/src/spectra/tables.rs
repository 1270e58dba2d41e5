use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExclusiveSpectra, InclusiveSpectra, Momentum3};
use crate::error::Result;
use crate::params::DerivedParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Inclusive,
    Exclusive { n: usize },
}

/// Single-particle spectrum sampled at `|k|` along the z axis (MeV⁻³).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub kind: SpectrumKind,
    pub derived: DerivedParams,
    pub n0: f64,
    /// |k| in MeV.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SpectrumTable {
    pub fn inclusive(d: &DerivedParams, n0: f64, grid: &[f64]) -> Result<Self> {
        let s = InclusiveSpectra::new(d, n0)?;
        let values = grid
            .par_iter()
            .map(|k| s.n1(&Momentum3::along_z(*k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectrumTable {
            kind: SpectrumKind::Inclusive,
            derived: *d,
            n0,
            grid: grid.to_vec(),
            values,
        })
    }

    pub fn exclusive(d: &DerivedParams, n0: f64, n: usize, grid: &[f64]) -> Result<Self> {
        let s = ExclusiveSpectra::new(d, n0, n)?;
        let values = grid
            .par_iter()
            .map(|k| s.n1(&Momentum3::along_z(*k)))
            .collect();
        Ok(SpectrumTable {
            kind: SpectrumKind::Exclusive { n },
            derived: *d,
            n0,
            grid: grid.to_vec(),
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Relative momentum parallel to K.
    Out,
    /// Relative momentum perpendicular to K.
    Side,
    /// K = 0, where side and out coincide.
    Iso,
}

impl Direction {
    pub fn label(&self) -> &'static str {
        match self {
            Direction::Out => "out",
            Direction::Side => "side",
            Direction::Iso => "iso",
        }
    }
}

/// A pair with mean momentum `k_mean` along z and relative momentum of
/// magnitude `dk` along `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPoint {
    pub k_mean: f64,
    pub dk: f64,
    pub direction: Direction,
}

impl CorrelationPoint {
    pub fn momenta(&self) -> (Momentum3, Momentum3) {
        let diff = match self.direction {
            Direction::Out => Momentum3::along_z(self.dk),
            Direction::Side | Direction::Iso => Momentum3::along_x(self.dk),
        };
        Momentum3::from_mean_and_difference(Momentum3::along_z(self.k_mean), diff)
    }
}

/// Points for every `K` in `k_means` and `dk` in `0..=dk_max` (`steps`
/// intervals). With `side_out`, each nonzero `K` gets both directions;
/// otherwise only out. `K = 0` always uses the isotropic direction.
pub fn correlation_grid(
    k_means: &[f64],
    dk_max: f64,
    steps: usize,
    side_out: bool,
) -> Vec<CorrelationPoint> {
    let mut points = Vec::new();
    for &k_mean in k_means {
        let dirs: &[Direction] = if k_mean == 0.0 {
            &[Direction::Iso]
        } else if side_out {
            &[Direction::Out, Direction::Side]
        } else {
            &[Direction::Out]
        };
        for &direction in dirs {
            for i in 0..=steps {
                let dk = if steps == 0 {
                    0.0
                } else {
                    dk_max * i as f64 / steps as f64
                };
                points.push(CorrelationPoint {
                    k_mean,
                    dk,
                    direction,
                });
            }
        }
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationKind {
    Inclusive,
    Exclusive { n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub kind: CorrelationKind,
    pub derived: DerivedParams,
    pub n0: f64,
    pub points: Vec<CorrelationPoint>,
    pub values: Vec<f64>,
}

impl CorrelationTable {
    pub fn inclusive(d: &DerivedParams, n0: f64, points: &[CorrelationPoint]) -> Result<Self> {
        let s = InclusiveSpectra::new(d, n0)?;
        let values = points
            .par_iter()
            .map(|p| {
                let (k1, k2) = p.momenta();
                s.c2(&k1, &k2)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CorrelationTable {
            kind: CorrelationKind::Inclusive,
            derived: *d,
            n0,
            points: points.to_vec(),
            values,
        })
    }

    pub fn exclusive(
        d: &DerivedParams,
        n0: f64,
        n: usize,
        points: &[CorrelationPoint],
    ) -> Result<Self> {
        let s = ExclusiveSpectra::new(d, n0, n)?;
        let values = points
            .par_iter()
            .map(|p| {
                let (k1, k2) = p.momenta();
                s.c2(&k1, &k2)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CorrelationTable {
            kind: CorrelationKind::Exclusive { n },
            derived: *d,
            n0,
            points: points.to_vec(),
            values,
        })
    }
}
