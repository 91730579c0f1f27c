//! Free lattice Green function `R_r(x) = ∫_{T³} e^{i2πp·x} / (e(p) + E*) d³p`.
//!
//! `R_r` is the kernel of `(−½Δ + E*)^{-1}`. The primary evaluation uses the
//! heat-kernel representation
//! `R_r(x) = ∫₀^∞ e^{−E* t} ∏_α e^{−t} I_{|x_α|}(t) dt`; a periodized discrete
//! Fourier sum serves as an independent check.

pub mod asymptotics;
pub mod bessel;
pub mod fft;
pub mod free;
pub mod table;

pub use asymptotics::{check_asymptotics, fit_k_bound, AsymptoticsReport};
pub use fft::{green_free_fft, periodization_bound};
pub use free::{green_free, green_free_many, green_table_bessel, BESSEL_TOLERANCE};
pub use table::{GreenMethod, GreenTable};

use serde::{Deserialize, Serialize};

/// Lattice site or difference vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub [i64; 3]);

impl LatticeVector {
    pub fn new(x1: i64, x2: i64, x3: i64) -> Self {
        LatticeVector([x1, x2, x3])
    }

    pub fn norm(&self) -> f64 {
        let [a, b, c] = self.0;
        ((a * a + b * b + c * c) as f64).sqrt()
    }

    pub fn norm_sqr(&self) -> i64 {
        let [a, b, c] = self.0;
        a * a + b * b + c * c
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    /// Representative under the octahedral group: sorted absolute values.
    pub fn canonical(&self) -> [u32; 3] {
        let mut v = self.0.map(|c| c.unsigned_abs() as u32);
        v.sort_unstable();
        v
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector([self.0[0] - other.0[0], self.0[1] - other.0[1], self.0[2] - other.0[2]])
    }
}

impl From<[i64; 3]> for LatticeVector {
    fn from(v: [i64; 3]) -> Self {
        LatticeVector(v)
    }
}

/// All octahedral representatives `0 ≤ a ≤ b ≤ c` with `a² + b² + c² ≤ r²`.
pub fn canonical_ball(radius: u32) -> Vec<[u32; 3]> {
    let r2 = (radius as u64) * (radius as u64);
    let mut out = Vec::new();
    for c in 0..=radius {
        for b in 0..=c {
            for a in 0..=b {
                let n = (a as u64).pow(2) + (b as u64).pow(2) + (c as u64).pow(2);
                if n <= r2 {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every lattice vector with `|x| ≤ radius`.
pub fn ball(radius: u32) -> Vec<LatticeVector> {
    let r = radius as i64;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if a * a + b * b + c * c <= r * r {
                    out.push(LatticeVector([a, b, c]));
                }
            }
        }
    }
    out
}
