use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 3-momentum in MeV.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Momentum3 {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl Momentum3 {
    pub const ZERO: Momentum3 = Momentum3 {
        kx: 0.0,
        ky: 0.0,
        kz: 0.0,
    };

    pub const fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Momentum3 { kx, ky, kz }
    }

    pub const fn along_x(k: f64) -> Self {
        Momentum3::new(k, 0.0, 0.0)
    }

    pub const fn along_z(k: f64) -> Self {
        Momentum3::new(0.0, 0.0, k)
    }

    /// Pair with magnitudes `k1`, `k2` and opening angle `theta` (radians),
    /// `k1` along z and `k2` in the x-z plane.
    pub fn polar_pair(k1: f64, k2: f64, theta: f64) -> (Self, Self) {
        (
            Momentum3::along_z(k1),
            Momentum3::new(k2 * theta.sin(), 0.0, k2 * theta.cos()),
        )
    }

    /// Pair with mean momentum `mean` and relative momentum `diff`:
    /// `k1 = mean + diff/2`, `k2 = mean − diff/2`.
    pub fn from_mean_and_difference(mean: Momentum3, diff: Momentum3) -> (Self, Self) {
        (mean + diff * 0.5, mean - diff * 0.5)
    }

    pub fn dot(&self, other: &Momentum3) -> f64 {
        self.kx * other.kx + self.ky * other.ky + self.kz * other.kz
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.kx.is_finite() && self.ky.is_finite() && self.kz.is_finite()
    }

    pub fn components(&self) -> [f64; 3] {
        [self.kx, self.ky, self.kz]
    }
}

impl From<[f64; 3]> for Momentum3 {
    fn from(c: [f64; 3]) -> Self {
        Momentum3::new(c[0], c[1], c[2])
    }
}

impl Add for Momentum3 {
    type Output = Momentum3;
    fn add(self, o: Momentum3) -> Momentum3 {
        Momentum3::new(self.kx + o.kx, self.ky + o.ky, self.kz + o.kz)
    }
}

impl Sub for Momentum3 {
    type Output = Momentum3;
    fn sub(self, o: Momentum3) -> Momentum3 {
        Momentum3::new(self.kx - o.kx, self.ky - o.ky, self.kz - o.kz)
    }
}

impl Mul<f64> for Momentum3 {
    type Output = Momentum3;
    fn mul(self, s: f64) -> Momentum3 {
        Momentum3::new(self.kx * s, self.ky * s, self.kz * s)
    }
}

impl Neg for Momentum3 {
    type Output = Momentum3;
    fn neg(self) -> Momentum3 {
        self * -1.0
    }
}

/// Splits `dk` into the component along the mean momentum `k_mean` (out)
/// and the remainder (side).
pub fn side_out_split(k_mean: Momentum3, dk: Momentum3) -> Result<(Momentum3, Momentum3)> {
    let kk = k_mean.norm2();
    if kk == 0.0 {
        return Err(Error::ZeroMeanMomentum);
    }
    let out = k_mean * (dk.dot(&k_mean) / kk);
    Ok((out, dk - out))
}
