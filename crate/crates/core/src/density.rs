//! Single-site potential laws.

use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Law of `V_ω(x)`: even, bounded, compactly supported, unit variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DensitySpec {
    /// Uniform on `[−√3, √3]`.
    #[default]
    UniformSqrt3,
}

impl DensitySpec {
    /// `(lo, hi)` of the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            DensitySpec::UniformSqrt3 => {
                let h = 3f64.sqrt();
                (-h, h)
            }
        }
    }

    /// Lower end `a` of the support (so `λa` bounds the spectrum from below).
    pub fn support_min(&self) -> f64 {
        self.support().0
    }

    pub fn mean(&self) -> f64 {
        0.0
    }

    pub fn variance(&self) -> f64 {
        1.0
    }

    pub fn pdf(&self, v: f64) -> f64 {
        match self {
            DensitySpec::UniformSqrt3 => {
                let (lo, hi) = self.support();
                if (lo..=hi).contains(&v) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
        }
    }

    /// Exact even moment `𝔼V^{2l}` as a rational, when the law admits one.
    pub fn even_moment_exact(&self, l: u32) -> Result<Ratio<i64>> {
        match self {
            // 𝔼V^{2l} = 3^l / (2l + 1)
            DensitySpec::UniformSqrt3 => {
                if l > 38 {
                    return Err(invalid("moment order overflows i64"));
                }
                Ok(Ratio::new(3i64.pow(l), 2 * l as i64 + 1))
            }
        }
    }

    /// Moment `𝔼V^k` as a float (zero for odd `k`).
    pub fn moment(&self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        match self {
            DensitySpec::UniformSqrt3 => 3f64.powi(k as i32 / 2) / (k as f64 + 1.0),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            DensitySpec::UniformSqrt3 => {
                let (lo, hi) = self.support();
                Uniform::new_inclusive(lo, hi).expect("finite support").sample(rng)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DensitySpec::UniformSqrt3 => "uniform-sqrt3",
        }
    }
}
