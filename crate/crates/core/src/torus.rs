//! Torus integrals of powers of the free propagator.
//!
//! `I1(E*) = ∫_{T³} d³p / (e(p) + E*)` and `I2(E*) = ∫_{T³} d³p / (e(p) + E*)²`.
//!
//! Two of the three axes are integrated in closed form: for `b ≥ 0`
//!
//! ```text
//! ∫_{T²} dp₂ dp₃ / (b + e₂ + e₃)   = 1 / AGM(b + 2, √(b(b+4)))
//! ∫_{T²} dp₂ dp₃ / (b + e₂ + e₃)²  = (2/π) E(k) / (b(b+4)),   k = 2/(b+2)
//! ```
//!
//! so only the first axis is sampled with the midpoint rule. For `E* > 0` the
//! remaining one-dimensional integrand is periodic and analytic in a strip,
//! and the midpoint error is the alternating image sum `Σ_{n≠0} (−1)^n G(nM e₁)`,
//! which a contour shift bounds by `e^{−aM}` with `cosh a = 1 + E*/2`.
//! At `E* = 0` the integrand has a logarithmic singularity at `p₁ = 0`; the
//! midpoint error then expands in odd powers of the mesh width and is removed
//! by Richardson extrapolation.
//!
//! The full three-dimensional tensor midpoint rule is kept as an independent
//! route for cross-checks.

use serde::{Deserialize, Serialize};

use crate::dispersion::axis_term;
use crate::error::{invalid, Error, Result};
use crate::scalar::{cst, from_usize, to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethod {
    TensorMidpoint,
    TensorMidpointWithRichardson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    /// Smallest grid used; must be even and at least 8.
    pub grid_points_per_axis: usize,
    /// Relative error target.
    pub tolerance: f64,
    /// Largest grid the solver may refine to.
    pub max_grid: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: QuadratureMethod::TensorMidpointWithRichardson,
            grid_points_per_axis: 64,
            tolerance: 1e-13,
            max_grid: 1 << 22,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_axis < 8 || !self.grid_points_per_axis.is_multiple_of(2) {
            return Err(invalid(format!(
                "grid_points_per_axis must be even and ≥ 8, got {}",
                self.grid_points_per_axis
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid("quadrature tolerance must be positive"));
        }
        if self.max_grid < self.grid_points_per_axis {
            return Err(invalid("max_grid smaller than the initial grid"));
        }
        Ok(())
    }
}

/// Result of a torus integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusIntegral<T> {
    pub value: T,
    /// Estimated absolute error.
    pub error_estimate: T,
    /// Finest grid used.
    pub grid: usize,
}

/// Arithmetic-geometric mean.
pub fn agm<T: Scalar>(mut a: T, mut b: T) -> T {
    let tol = T::epsilon() * cst(4.0);
    for _ in 0..64 {
        if (a - b).abs() <= tol * a.abs() {
            break;
        }
        let an = (a + b) * cst(0.5);
        b = (a * b).sqrt();
        a = an;
    }
    (a + b) * cst(0.5)
}

/// Complete elliptic integrals `(K(k), E(k))` given the modulus and its complement `k' = √(1−k²)`.
///
/// Passing the complement separately avoids cancellation when `k → 1`.
pub fn complete_elliptic<T: Scalar>(k: T, kp: T) -> (T, T) {
    let mut a = T::one();
    let mut b = kp;
    let mut c = k;
    let mut weight = cst::<T>(0.5);
    let mut sum = weight * c * c;
    let tol = T::epsilon();
    for _ in 0..64 {
        if c.abs() <= tol * a {
            break;
        }
        let an = (a + b) * cst(0.5);
        let bn = (a * b).sqrt();
        c = (a - b) * cst(0.5);
        a = an;
        b = bn;
        weight = weight * cst(2.0);
        sum = sum + weight * c * c;
    }
    let kk = T::FRAC_PI_2() / a;
    (kk, kk * (T::one() - sum))
}

/// `∫_{T²} dp₂ dp₃ / (b + e₂ + e₃)` for `b ≥ 0` (infinite at `b = 0`).
#[inline]
pub fn plane_integral<T: Scalar>(b: T) -> T {
    let two = cst::<T>(2.0);
    let four = cst::<T>(4.0);
    T::one() / agm(b + two, (b * (b + four)).sqrt())
}

/// `∫_{T²} dp₂ dp₃ / (b + e₂ + e₃)²` for `b > 0`.
#[inline]
pub fn plane_integral_sq<T: Scalar>(b: T) -> T {
    let two = cst::<T>(2.0);
    let four = cst::<T>(4.0);
    let bp2 = b + two;
    let k = two / bp2;
    let kp = (b * (b + four)).sqrt() / bp2;
    let (_, e) = complete_elliptic(k, kp);
    two / T::PI() * e / (b * (b + four))
}

/// Which power of the propagator is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Power {
    One,
    Two,
}

/// Midpoint rule over the first axis with `m` (even) nodes; the other two axes are exact.
pub fn reduced_midpoint<T: Scalar>(estar: T, m: usize, power: Power) -> T {
    debug_assert!(m.is_multiple_of(2));
    let mf = from_usize::<T>(m);
    let half = cst::<T>(0.5);
    let mut sum = T::zero();
    // Nodes are symmetric about zero; sum the negative half twice.
    for k in 0..m / 2 {
        let p = (from_usize::<T>(k) + half) / mf - half;
        let b = estar + axis_term(p);
        sum = sum
            + match power {
                Power::One => plane_integral(b),
                Power::Two => plane_integral_sq(b),
            };
    }
    sum * cst(2.0) / mf
}

/// Full three-dimensional tensor midpoint rule, `m` even nodes per axis.
///
/// Independent of the closed-form plane integrals; `O(m³)` work.
pub fn tensor_midpoint_3d<T: Scalar>(estar: T, m: usize, power: Power) -> T {
    assert!(m.is_multiple_of(2), "tensor midpoint needs an even grid");
    let mf = from_usize::<T>(m);
    let half = cst::<T>(0.5);
    let terms: Vec<T> = (0..m / 2)
        .map(|k| axis_term((from_usize::<T>(k) + half) / mf - half))
        .collect();
    let mut total = T::zero();
    for &a1 in &terms {
        let mut plane = T::zero();
        for &a2 in &terms {
            let mut line = T::zero();
            for &a3 in &terms {
                let d = estar + a1 + a2 + a3;
                line = line
                    + match power {
                        Power::One => T::one() / d,
                        Power::Two => T::one() / (d * d),
                    };
            }
            plane = plane + line;
        }
        total = total + plane;
    }
    total * cst(8.0) / (mf * mf * mf)
}

/// Grid size for which the image-sum bound guarantees relative error ≤ `tol` at `E* > 0`.
///
/// Returns `None` when the estimate overflows `usize`.
pub fn required_grid(estar: f64, tol: f64, power: Power) -> Option<usize> {
    let a = (1.0 + 0.5 * estar).acosh();
    // Relative error ≤ c·q/(1−q), q = e^{−aM}; c = 4 for I1, 8 for I2.
    let c = match power {
        Power::One => 4.0,
        Power::Two => 8.0,
    };
    let need = ((c + tol) / tol).ln() / a;
    if !need.is_finite() || need > 1e15 {
        return None;
    }
    let m = need.ceil() as usize;
    Some(m + (m % 2))
}

fn image_bound(estar: f64, m: usize, power: Power) -> f64 {
    let a = (1.0 + 0.5 * estar).acosh();
    let q = (-a * m as f64).exp();
    let c = match power {
        Power::One => 4.0,
        Power::Two => 8.0,
    };
    c * q / (1.0 - q)
}

/// Richardson tableau over doubling grids with error exponents 1, 3, 5, ….
fn richardson<T: Scalar>(estar: T, spec: &QuadratureSpec, power: Power) -> Result<TorusIntegral<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut m = spec.grid_points_per_axis;
    let mut best: Option<TorusIntegral<T>> = None;
    while m <= spec.max_grid {
        let mut row = vec![reduced_midpoint(estar, m, power)];
        if let Some(prev) = rows.last() {
            for j in 1..=prev.len() {
                let p = 2 * j as i32 - 1;
                let factor = T::one() / (cst::<T>(2.0).powi(p) - T::one());
                let next = row[j - 1] + (row[j - 1] - prev[j - 1]) * factor;
                row.push(next);
            }
            let diag = *row.last().unwrap();
            let prev_diag = *prev.last().unwrap();
            let est = (diag - prev_diag).abs();
            let cand = TorusIntegral {
                value: diag,
                error_estimate: est,
                grid: m,
            };
            if est <= cst::<T>(spec.tolerance) * diag.abs() {
                return Ok(cand);
            }
            best = Some(cand);
        }
        rows.push(row);
        // Higher columns stop helping once round-off dominates.
        if rows.len() > 12 {
            break;
        }
        m *= 2;
    }
    let b = best.ok_or_else(|| invalid("max_grid allows fewer than two Richardson levels"))?;
    Err(Error::NonConvergence {
        estimate: to_f64(b.error_estimate / b.value.abs()),
        tolerance: spec.tolerance,
        grid: b.grid,
    })
}

fn torus_integral<T: Scalar>(estar: T, spec: &QuadratureSpec, power: Power) -> Result<TorusIntegral<T>> {
    spec.validate()?;
    if !(estar >= T::zero()) || !estar.is_finite() {
        return Err(invalid(format!("estar must be finite and ≥ 0, got {estar}")));
    }
    if power == Power::Two && estar <= T::zero() {
        return Err(invalid("I2 requires estar > 0"));
    }
    let es = to_f64(estar);
    // The closed-form error bound cannot beat the scalar's own precision.
    let tol = spec.tolerance.max(to_f64(T::epsilon()) * 64.0);
    let spec = &QuadratureSpec {
        tolerance: tol,
        ..*spec
    };
    if es > 0.0 {
        if let Some(m) = required_grid(es, tol, power) {
            let m = m.max(spec.grid_points_per_axis);
            if m <= spec.max_grid {
                let value = reduced_midpoint(estar, m, power);
                let bound = image_bound(es, m, power);
                return Ok(TorusIntegral {
                    value,
                    error_estimate: value * cst(bound),
                    grid: m,
                });
            }
        }
    }
    match spec.method {
        QuadratureMethod::TensorMidpointWithRichardson => richardson(estar, spec, power),
        QuadratureMethod::TensorMidpoint => {
            // No extrapolation: report the difference of the two finest grids.
            let m = spec.max_grid - spec.max_grid % 2;
            let fine = reduced_midpoint(estar, m, power);
            let coarse = reduced_midpoint(estar, m / 2 - (m / 2) % 2, power);
            Err(Error::NonConvergence {
                estimate: to_f64((fine - coarse).abs() / fine.abs()),
                tolerance: spec.tolerance,
                grid: m,
            })
        }
    }
}

/// `I1(E*) = ∫_{T³} d³p / (e(p) + E*)`, `E* ≥ 0`.
pub fn torus_integral_i1<T: Scalar>(estar: T, spec: &QuadratureSpec) -> Result<TorusIntegral<T>> {
    torus_integral(estar, spec, Power::One)
}

/// `I2(E*) = ∫_{T³} d³p / (e(p) + E*)² = −dI1/dE*`, `E* > 0`.
pub fn torus_integral_i2<T: Scalar>(estar: T, spec: &QuadratureSpec) -> Result<TorusIntegral<T>> {
    torus_integral(estar, spec, Power::Two)
}

/// Convenience: value of `I1` under the default specification.
pub fn i1<T: Scalar>(estar: T) -> Result<T> {
    Ok(torus_integral_i1(estar, &QuadratureSpec::default())?.value)
}

/// Convenience: value of `I2` under the default specification.
pub fn i2<T: Scalar>(estar: T) -> Result<T> {
    Ok(torus_integral_i2(estar, &QuadratureSpec::default())?.value)
}

/// Richardson extrapolation of the full 3D tensor midpoint rule at `E* = 0`.
///
/// Independent reference route for `I1(0)`: grids `m0, 2m0, …` with error
/// exponents 1, 3, 5, ….
pub fn tensor_midpoint_3d_richardson(m0: usize, levels: usize) -> f64 {
    let mut prev: Vec<f64> = Vec::new();
    let mut m = m0;
    for _ in 0..levels {
        let mut row = vec![tensor_midpoint_3d(0.0f64, m, Power::One)];
        for j in 1..=prev.len() {
            let p = 2 * j as i32 - 1;
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / (2f64.powi(p) - 1.0);
            row.push(next);
        }
        prev = row;
        m *= 2;
    }
    *prev.last().expect("at least one level")
}
