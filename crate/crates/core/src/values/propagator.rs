//! Propagators and sampling densities for momentum integrals.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

use crate::dispersion::dispersion_raw;

/// `F(q) = 1/((q²+1) ln⁴(q²+2))`.
pub fn f_log(q2: f64) -> f64 {
    1.0 / ((q2 + 1.0) * (q2 + 2.0).ln().powi(4))
}

pub fn ln_f_log(q2: f64) -> f64 {
    -(q2.ln_1p()) - 4.0 * (q2 + 2.0).ln().ln()
}

/// `1/(q² + E*)`.
pub fn continuum(q2: f64, estar: f64) -> f64 {
    1.0 / (q2 + estar)
}

/// `1/(e(p) + E*)` on the torus.
pub fn torus_lattice(p: [f64; 3], estar: f64) -> f64 {
    1.0 / (dispersion_raw(p) + estar)
}

/// `1/(|p|² + E*)` with `p` reduced to `[−1/2, 1/2]³`.
pub fn torus_quadratic(p: [f64; 3], estar: f64) -> f64 {
    let q2: f64 = p
        .iter()
        .map(|x| {
            let w = x - x.round();
            w * w
        })
        .sum();
    1.0 / (q2 + estar)
}

pub fn norm2(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

/// Isotropic density on ℝ³ with `P(|q| ≤ r) = 1 − 1/(1 + ln(1+r³))`:
/// `g(q) = 3 / (4π (1+r³) (1+ln(1+r³))²)`.
///
/// Its tail is heavier than `F²`, which keeps importance weights for
/// superficially convergent graphs square integrable.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogRadialProposal;

impl LogRadialProposal {
    /// Largest `ln(1+r³)` represented; beyond it the weight is treated as zero.
    pub const MAX_LOG: f64 = 600.0;

    /// Returns `(q, ln g(q))`, or `None` when the radius is beyond representable range.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<([f64; 3], f64)> {
        let u: f64 = rng.random();
        let l = u / (1.0 - u);
        if l > Self::MAX_LOG {
            return None;
        }
        let r = l.exp_m1().cbrt();
        let d: [f64; 3] = UnitSphere.sample(rng);
        let q = [r * d[0], r * d[1], r * d[2]];
        let ln_g = (3.0 / (4.0 * PI)).ln() - l - 2.0 * l.ln_1p();
        Some((q, ln_g))
    }

    pub fn ln_density(&self, q: [f64; 3]) -> f64 {
        let r3 = norm2(q).powf(1.5);
        let l = r3.ln_1p();
        (3.0 / (4.0 * PI)).ln() - l - 2.0 * l.ln_1p()
    }
}

/// Density `∝ 1/(k²+1)` on the ball `|k| ≤ cutoff`.
#[derive(Debug, Clone, Copy)]
pub struct CutoffProposal {
    pub cutoff: f64,
    norm: f64,
}

impl CutoffProposal {
    pub fn new(cutoff: f64) -> Self {
        CutoffProposal {
            cutoff,
            norm: 4.0 * PI * (cutoff - cutoff.atan()),
        }
    }

    pub fn density(&self, k: [f64; 3]) -> f64 {
        1.0 / ((norm2(k) + 1.0) * self.norm)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        // Radial CDF ∝ r − atan r.
        let target = rng.random::<f64>() * (self.cutoff - self.cutoff.atan());
        let (mut lo, mut hi) = (0.0f64, self.cutoff);
        let mut r = (3.0 * target).cbrt().min(hi);
        for _ in 0..100 {
            let f = r - r.atan() - target;
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let d = r * r / (1.0 + r * r);
            let next = if d > 0.0 { r - f / d } else { 0.5 * (lo + hi) };
            let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if (next - r).abs() <= 1e-15 * r.max(1e-300) {
                r = next;
                break;
            }
            r = next;
        }
        let d: [f64; 3] = UnitSphere.sample(rng);
        [r * d[0], r * d[1], r * d[2]]
    }
}

/// Mixture on `T³`: with probability `alpha` a wrapped Gaussian of width
/// `width` per component, otherwise uniform.
#[derive(Debug, Clone, Copy)]
pub struct TorusMixture {
    pub alpha: f64,
    pub width: f64,
}

impl TorusMixture {
    pub fn new(alpha: f64, width: f64) -> Self {
        TorusMixture { alpha, width }
    }

    fn wrapped_normal(&self, x: f64) -> f64 {
        let s = self.width;
        let c = 1.0 / (s * (2.0 * PI).sqrt());
        let images = (6.0 * s).ceil() as i64 + 1;
        (-images..=images)
            .map(|n| {
                let y = x + n as f64;
                c * (-0.5 * y * y / (s * s)).exp()
            })
            .sum()
    }

    pub fn density(&self, p: [f64; 3]) -> f64 {
        let g: f64 = p.iter().map(|&x| self.wrapped_normal(x)).product();
        self.alpha * g + (1.0 - self.alpha)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let gaussian = rng.random::<f64>() < self.alpha;
        let mut p = [0.0; 3];
        for x in p.iter_mut() {
            let v = if gaussian {
                let z: f64 = StandardNormal.sample(rng);
                z * self.width
            } else {
                rng.random::<f64>() - 0.5
            };
            *x = v - v.round();
        }
        p
    }
}
