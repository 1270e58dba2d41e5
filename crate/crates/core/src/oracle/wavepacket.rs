//! Gaussian wave packets, their overlaps, and permanents of overlap
//! matrices.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::HBARC;
use crate::spectra::Momentum3;

/// Largest matrix accepted by [`permanent_weight`].
pub const PERMANENT_MAX: usize = 10;
/// Above this size permanents use Ryser's formula instead of enumeration.
pub const ENUMERATION_MAX: usize = 6;

/// Packet centred at `xi` (fm) in space and `pi` (MeV) in momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    pub xi: [f64; 3],
    pub pi: Momentum3,
}

impl WavePacket {
    pub fn new(xi: [f64; 3], pi: Momentum3) -> Self {
        WavePacket { xi, pi }
    }

    /// Momentum-space amplitude
    /// `(πσ²)^{-3/4} exp(−(k−π)²/(2σ²) − i ξ·(k−π)/ħc)`.
    pub fn amplitude(&self, k: &Momentum3, sigma: f64) -> Complex64 {
        let d = *k - self.pi;
        let phase = -(self.xi[0] * d.kx + self.xi[1] * d.ky + self.xi[2] * d.kz) / HBARC;
        let modulus = (PI * sigma * sigma).powf(-0.75) * (-d.norm2() / (2.0 * sigma * sigma)).exp();
        Complex64::from_polar(modulus, phase)
    }
}

/// `⟨α_i|α_j⟩` for equal widths and emission times:
///
/// ```text
/// exp(−(π_i−π_j)²/(4σ²) − σ²(ξ_i−ξ_j)²/(4ħc²) + i(ξ_i+ξ_j)·(π_j−π_i)/(2ħc))
/// ```
///
/// The energy phases cancel at equal times, so the dispersion relation
/// never enters.
pub fn overlap(a: &WavePacket, b: &WavePacket, sigma: f64) -> Complex64 {
    let dp = a.pi - b.pi;
    let dxi: Momentum3 = [a.xi[0] - b.xi[0], a.xi[1] - b.xi[1], a.xi[2] - b.xi[2]].into();
    let sxi: Momentum3 = [a.xi[0] + b.xi[0], a.xi[1] + b.xi[1], a.xi[2] + b.xi[2]].into();
    let s2 = sigma * sigma;
    let modulus = (-dp.norm2() / (4.0 * s2) - s2 * dxi.norm2() / (4.0 * HBARC * HBARC)).exp();
    let phase = -sxi.dot(&dp) / (2.0 * HBARC);
    Complex64::from_polar(modulus, phase)
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Matrix with the given rows and columns removed.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        let keep_r: Vec<usize> = (0..self.n).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.n).filter(|j| !cols.contains(j)).collect();
        debug_assert_eq!(keep_r.len(), keep_c.len());
        CMatrix::from_fn(keep_r.len(), |i, j| self.get(keep_r[i], keep_c[j]))
    }

    pub fn overlaps(packets: &[WavePacket], sigma: f64) -> CMatrix {
        CMatrix::from_fn(packets.len(), |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                overlap(&packets[i], &packets[j], sigma)
            }
        })
    }
}

/// Sum over all `n!` permutations.
pub fn permanent_enumerate(m: &CMatrix) -> Complex64 {
    fn expand(m: &CMatrix, row: usize, used: u32) -> Complex64 {
        if row == m.n {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..m.n {
            if used & (1 << col) == 0 {
                acc += m.get(row, col) * expand(m, row + 1, used | (1 << col));
            }
        }
        acc
    }
    expand(m, 0, 0)
}

/// Ryser's inclusion-exclusion formula with Gray-code subset updates,
/// `O(2ⁿ n)`.
pub fn permanent_ryser(m: &CMatrix) -> Complex64 {
    let n = m.n;
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray = 0u64;
    for step in 1u64..(1u64 << n) {
        let next = step ^ (step >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m.get(i, col);
            } else {
                *s -= m.get(i, col);
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if (n - next.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

pub fn permanent(m: &CMatrix) -> Complex64 {
    if m.n <= ENUMERATION_MAX {
        permanent_enumerate(m)
    } else {
        permanent_ryser(m)
    }
}

/// A sampled set of packets with its induced-emission weight
/// `Σ_σ Π_k ⟨α_k|α_{σ_k}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketConfig {
    pub packets: Vec<WavePacket>,
    pub sigma: f64,
    pub overlaps: CMatrix,
    pub weight: f64,
}

impl WavePacketConfig {
    pub fn new(packets: Vec<WavePacket>, sigma: f64) -> Result<Self> {
        if packets.len() > PERMANENT_MAX {
            return Err(Error::SizeLimit {
                n: packets.len(),
                max: PERMANENT_MAX,
            });
        }
        let overlaps = CMatrix::overlaps(&packets, sigma);
        let weight = permanent(&overlaps).re;
        Ok(WavePacketConfig {
            packets,
            sigma,
            overlaps,
            weight,
        })
    }

    pub fn multiplicity(&self) -> usize {
        self.packets.len()
    }
}

/// Permanent of the overlap matrix; real and in `[1, n!]` for any packets.
pub fn permanent_weight(config: &WavePacketConfig) -> Result<f64> {
    let n = config.overlaps.size();
    if n > PERMANENT_MAX {
        return Err(Error::SizeLimit {
            n,
            max: PERMANENT_MAX,
        });
    }
    Ok(permanent(&config.overlaps).re)
}
