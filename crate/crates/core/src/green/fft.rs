//! Periodized discrete-Fourier route to `R_r`.
//!
//! On the `M³` momentum grid `p = k/M` the inverse transform of `1/(e(p)+E*)`
//! equals the periodized Green function `Σ_n R_r(x + M n)`. Because the
//! summand is even in every component, only `k ∈ [0, M/2]³` is visited and the
//! transform is applied one axis at a time, restricted to `0 ≤ x_α ≤ radius`.

use std::collections::BTreeMap;

use super::table::{GreenMethod, GreenTable};
use super::{canonical_ball, LatticeVector};
use crate::dispersion::axis_term;
use crate::error::{invalid, Error, Result};
use crate::scalar::{cst, from_usize, Scalar};
use crate::torus::i1;

/// Default absolute tolerance on the periodization error.
pub const FFT_TOLERANCE: f64 = 1e-10;

/// Rigorous bound on `|Σ_{n≠0} R_r(x + M n)|` for `|x|_∞ ≤ radius`.
///
/// Shifting one momentum component by `i a/(2π)` with `cosh a = 1 + E*/2`
/// gives `R_r(y) ≤ I1(E*/2) e^{−a|y|_∞}`; the `24 j² + 2` images with
/// `|n|_∞ = j` sit at sup-distance at least `jM − radius`.
pub fn periodization_bound(m: usize, estar: f64, radius: u32) -> Result<f64> {
    if !(estar > 0.0) {
        return Err(invalid("estar must be positive"));
    }
    if radius as usize >= m {
        return Ok(f64::INFINITY);
    }
    let a = (1.0 + 0.5 * estar).acosh();
    let c = i1(0.5 * estar)?;
    let mut sum = 0.0;
    for j in 1..10_000usize {
        let d = (j * m) as f64 - radius as f64;
        let term = (24.0 * (j * j) as f64 + 2.0) * (-a * d).exp();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    Ok(c * sum)
}

/// Periodized values `G_M(x)` on the cube `0 ≤ x_α ≤ radius`.
#[derive(Debug, Clone)]
pub struct PeriodizedCube<T> {
    pub radius: u32,
    pub grid: usize,
    data: Vec<T>,
}

impl<T: Scalar> PeriodizedCube<T> {
    pub fn get(&self, x: [u32; 3]) -> T {
        let r = self.radius as usize + 1;
        self.data[(x[0] as usize * r + x[1] as usize) * r + x[2] as usize]
    }

    /// Largest deviation between entries related by a coordinate permutation.
    pub fn symmetry_defect(&self) -> T {
        let r = self.radius;
        let mut worst = T::zero();
        for a in 0..=r {
            for b in 0..=r {
                for c in 0..=r {
                    let v = self.get([a, b, c]);
                    for p in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                        worst = worst.max((v - self.get(p)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Computes the periodized cube without any error check.
pub fn periodized_cube<T: Scalar>(m: usize, estar: T, radius: u32) -> Result<PeriodizedCube<T>> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(invalid(format!("grid must be even, got {m}")));
    }
    let h = m / 2 + 1;
    let r = radius as usize + 1;
    let mf = from_usize::<T>(m);
    let two_pi = T::PI() * cst(2.0);
    // c[k][x] = w(k) cos(2π k x / M), w = 1 at k ∈ {0, M/2}, else 2.
    let mut c = vec![T::zero(); h * r];
    for k in 0..h {
        let w: T = if k == 0 || k == m / 2 { T::one() } else { cst(2.0) };
        for x in 0..r {
            let phase = ((k * x) % m) as f64;
            c[k * r + x] = w * (two_pi * cst::<T>(phase) / mf).cos();
        }
    }
    let terms: Vec<T> = (0..h).map(|k| axis_term(from_usize::<T>(k) / mf)).collect();

    // t1[k1][k2][x3]
    let mut t1 = vec![T::zero(); h * h * r];
    let mut row = vec![T::zero(); h];
    for k1 in 0..h {
        for k2 in 0..h {
            let base = estar + terms[k1] + terms[k2];
            for k3 in 0..h {
                row[k3] = T::one() / (base + terms[k3]);
            }
            let dst = &mut t1[(k1 * h + k2) * r..(k1 * h + k2 + 1) * r];
            for (k3, &d) in row.iter().enumerate() {
                let ck = &c[k3 * r..(k3 + 1) * r];
                for x3 in 0..r {
                    dst[x3] = dst[x3] + ck[x3] * d;
                }
            }
        }
    }
    // t2[k1][x2][x3]
    let mut t2 = vec![T::zero(); h * r * r];
    for k1 in 0..h {
        for k2 in 0..h {
            let src = &t1[(k1 * h + k2) * r..(k1 * h + k2 + 1) * r];
            for x2 in 0..r {
                let w = c[k2 * r + x2];
                let dst = &mut t2[(k1 * r + x2) * r..(k1 * r + x2 + 1) * r];
                for x3 in 0..r {
                    dst[x3] = dst[x3] + w * src[x3];
                }
            }
        }
    }
    drop(t1);
    let norm = T::one() / (mf * mf * mf);
    let mut data = vec![T::zero(); r * r * r];
    for x1 in 0..r {
        for k1 in 0..h {
            let w = c[k1 * r + x1] * norm;
            let src = &t2[k1 * r * r..(k1 + 1) * r * r];
            let dst = &mut data[x1 * r * r..(x1 + 1) * r * r];
            for (d, s) in dst.iter_mut().zip(src) {
                *d = *d + w * *s;
            }
        }
    }
    Ok(PeriodizedCube { radius, grid: m, data })
}

/// Green table on `|x| ≤ radius` from the `M³` grid.
///
/// Fails when `M < 64` or when the periodization bound exceeds `tolerance`.
pub fn green_free_fft<T: Scalar>(m: usize, estar: T, radius: u32, tolerance: f64) -> Result<GreenTable<T>> {
    if m < 64 || !m.is_multiple_of(2) {
        return Err(invalid(format!("fft grid must be even and ≥ 64, got {m}")));
    }
    if !(estar > T::zero()) {
        return Err(invalid("estar must be positive"));
    }
    let bound = periodization_bound(m, crate::scalar::to_f64(estar), radius)?;
    if !(bound <= tolerance) {
        return Err(Error::PeriodizationTooLarge {
            estimate: bound,
            tolerance,
            grid: m,
            radius: radius as usize,
        });
    }
    let cube = periodized_cube(m, estar, radius)?;
    let values: BTreeMap<[u32; 3], T> = canonical_ball(radius).into_iter().map(|k| (k, cube.get(k))).collect();
    Ok(GreenTable::from_canonical(
        estar,
        radius,
        GreenMethod::FftGrid,
        Some(m),
        bound,
        values,
    ))
}

/// Convenience lookup for a single vector from a freshly built FFT table.
pub fn green_fft_value<T: Scalar>(m: usize, estar: T, x: LatticeVector) -> Result<T> {
    let r = x.0.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as u32;
    let radius = ((x.norm_sqr() as f64).sqrt().ceil() as u32).max(r);
    Ok(green_free_fft(m, estar, radius, FFT_TOLERANCE)?.value(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_is_rejected_at_low_energy() {
        match green_free_fft(64, 1e-3f64, 4, FFT_TOLERANCE) {
            Err(Error::PeriodizationTooLarge { estimate, .. }) => assert!(estimate > 1e-3),
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(green_free_fft(32, 1.0f64, 2, FFT_TOLERANCE).is_err());
    }

    #[test]
    fn origin_value_matches_torus_integral() {
        let g = green_fft_value(128, 1.0f64, LatticeVector::new(0, 0, 0)).unwrap();
        let t = i1(1.0f64).unwrap();
        assert!((g - t).abs() < 1e-12);
    }

    #[test]
    fn cube_is_octahedrally_symmetric() {
        let cube = periodized_cube(64, 0.7f64, 6).unwrap();
        assert!(cube.symmetry_defect() < 1e-12);
    }
}
