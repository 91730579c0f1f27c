//! Self-consistent self-energy `σ(E) = λ² I1(E − σ(E))`.
//!
//! Writing `E* = E − σ` the equation reads `E = E* + λ² I1(E*)`. The right-hand
//! side has a single minimum at `E* ~ λ⁴` and increases past it, so `E*` is
//! recovered by inverting it on the increasing branch.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{cst, to_f64, Scalar};
use crate::torus::{torus_integral_i1, torus_integral_i2, QuadratureSpec};

/// Default tail exponent ε.
pub const DEFAULT_EPSILON: f64 = 1.0;

/// A consistent `(λ, E, E*, σ)` tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyContext<T> {
    pub lambda: T,
    pub energy: T,
    pub estar: T,
    pub sigma: T,
    pub epsilon: T,
}

impl<T: Scalar> EnergyContext<T> {
    /// Builds the context whose renormalized energy is `estar`.
    ///
    /// This is the direct (non-inverting) route: `E = E* + λ² I1(E*)`.
    pub fn from_estar(estar: T, lambda: T, epsilon: T, spec: &QuadratureSpec) -> Result<Self> {
        check_lambda_epsilon(lambda, epsilon)?;
        if !(estar > T::zero()) {
            return Err(invalid(format!("estar must be positive, got {estar}")));
        }
        let sigma = lambda * lambda * torus_integral_i1(estar, spec)?.value;
        Ok(EnergyContext {
            lambda,
            energy: estar + sigma,
            estar,
            sigma,
            epsilon,
        })
    }

    /// `|σ − λ² I1(E*)|`.
    pub fn fixed_point_residual(&self, spec: &QuadratureSpec) -> Result<T> {
        let i1 = torus_integral_i1(self.estar, spec)?.value;
        Ok((self.sigma - self.lambda * self.lambda * i1).abs())
    }
}

fn check_lambda_epsilon<T: Scalar>(lambda: T, epsilon: T) -> Result<()> {
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(invalid(format!("lambda must be finite and ≥ 0, got {lambda}")));
    }
    if !(epsilon > T::zero() && epsilon < cst(4.0)) {
        return Err(invalid(format!("epsilon must lie in (0, 4), got {epsilon}")));
    }
    Ok(())
}

/// `I1(0) = ∫_{T³} d³p / e(p)`.
pub fn i1_at_zero<T: Scalar>(spec: &QuadratureSpec) -> Result<T> {
    Ok(torus_integral_i1(T::zero(), spec)?.value)
}

/// `E(E*) = E* + λ² I1(E*)`.
pub fn energy_of_estar<T: Scalar>(estar: T, lambda: T, spec: &QuadratureSpec) -> Result<T> {
    if !(estar >= T::zero()) {
        return Err(invalid(format!("estar must be ≥ 0, got {estar}")));
    }
    Ok(estar + lambda * lambda * torus_integral_i1(estar, spec)?.value)
}

/// `dE/dE* = 1 − λ² I2(E*)`.
pub fn energy_derivative<T: Scalar>(estar: T, lambda: T, spec: &QuadratureSpec) -> Result<T> {
    Ok(T::one() - lambda * lambda * torus_integral_i2(estar, spec)?.value)
}

/// Lower edge of the admissible window, `E_ε(λ) = λ² I1(0) + λ^{4−ε}`.
pub fn threshold_e_eps<T: Scalar>(lambda: T, epsilon: T, spec: &QuadratureSpec) -> Result<T> {
    check_lambda_epsilon(lambda, epsilon)?;
    if lambda == T::zero() {
        return Ok(T::zero());
    }
    let c = i1_at_zero::<T>(spec)?;
    Ok(lambda * lambda * c + lambda.powf(cst::<T>(4.0) - epsilon))
}

/// Solves `E = E* + λ² I1(E*)` for `E*` on the increasing branch.
///
/// Bisection narrows the bracket `[4(λ² I1(0))², 6]` (widened if needed), then
/// a safeguarded Newton iteration polishes the root.
pub fn solve_self_energy<T: Scalar>(
    energy: T,
    lambda: T,
    epsilon: T,
    spec: &QuadratureSpec,
) -> Result<EnergyContext<T>> {
    check_lambda_epsilon(lambda, epsilon)?;
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(invalid(format!("energy must be finite and positive, got {energy}")));
    }
    let threshold = threshold_e_eps(lambda, epsilon, spec)?;
    if energy < threshold {
        return Err(Error::BelowLifshitzWindow {
            energy: to_f64(energy),
            threshold: to_f64(threshold),
        });
    }
    if lambda == T::zero() {
        return Ok(EnergyContext {
            lambda,
            energy,
            estar: energy,
            sigma: T::zero(),
            epsilon,
        });
    }
    let l2 = lambda * lambda;
    let f = |x: T| -> Result<T> { Ok(energy_of_estar(x, lambda, spec)? - energy) };

    let c0 = l2 * i1_at_zero::<T>(spec)?;
    let mut lo = cst::<T>(4.0) * c0 * c0;
    let mut hi = cst::<T>(6.0).max(energy);
    while f(hi)? < T::zero() {
        lo = hi;
        hi = hi * cst(2.0);
    }
    // Only possible for energies just above the minimum of E(E*): walk the
    // lower end down while staying on the increasing branch.
    while f(lo)? > T::zero() {
        let next = lo * cst(0.5);
        if energy_derivative(next, lambda, spec)? <= T::zero() {
            return Err(Error::BelowLifshitzWindow {
                energy: to_f64(energy),
                threshold: to_f64(threshold),
            });
        }
        lo = next;
    }

    let rel = cst::<T>(1e-3);
    while hi - lo > rel * hi {
        let mid = (lo + hi) * cst(0.5);
        if f(mid)? > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let target = cst::<T>(1e-13) * energy.max(T::one());
    let target = target.max(T::epsilon() * cst(16.0) * energy.max(T::one()));
    let mut x = (lo + hi) * cst(0.5);
    for _ in 0..100 {
        let fx = f(x)?;
        if fx.abs() <= target {
            break;
        }
        if fx > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let d = energy_derivative(x, lambda, spec)?;
        let mut next = x - fx / d;
        if !(d > T::zero()) || !(next > lo && next < hi) {
            next = (lo + hi) * cst(0.5);
        }
        if next == x {
            break;
        }
        x = next;
    }
    let estar = x;
    Ok(EnergyContext {
        lambda,
        energy,
        estar,
        sigma: energy - estar,
        epsilon,
    })
}

/// Constants `(c, C)` with `c ≤ I2(E*)·√E* ≤ C` over the supplied points.
pub fn fit_i2_constants(estars: &[f64], spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &e in estars {
        let v = torus_integral_i2(e, spec)?.value * e.sqrt();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn free_case() {
        let ctx = solve_self_energy(0.3f64, 0.0, 1.0, &spec()).unwrap();
        assert_eq!(ctx.sigma, 0.0);
        assert_eq!(ctx.estar, 0.3);
        assert_eq!(energy_of_estar(0.7f64, 0.0, &spec()).unwrap(), 0.7);
        assert_eq!(threshold_e_eps(0.0f64, 1.0, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn threshold_plug_in() {
        let c = i1_at_zero::<f64>(&spec()).unwrap();
        let t = threshold_e_eps(0.1f64, 1.0, &spec()).unwrap();
        assert!((t - (0.01 * c + 0.001)).abs() < 1e-15);
    }

    #[test]
    fn below_window_is_reported() {
        let t = threshold_e_eps(0.2f64, 1.0, &spec()).unwrap();
        match solve_self_energy(0.9 * t, 0.2, 1.0, &spec()) {
            Err(Error::BelowLifshitzWindow { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(solve_self_energy(0.3f64, -0.1, 1.0, &spec()).is_err());
        assert!(solve_self_energy(0.3f64, 0.1, 4.0, &spec()).is_err());
        assert!(solve_self_energy(0.0f64, 0.1, 1.0, &spec()).is_err());
    }

    #[test]
    fn from_estar_round_trip() {
        let ctx = EnergyContext::from_estar(0.05f64, 0.3, 1.0, &spec()).unwrap();
        let back = solve_self_energy(ctx.energy, 0.3, 1.0, &spec()).unwrap();
        assert!((back.estar - 0.05).abs() < 1e-11);
        assert!(ctx.fixed_point_residual(&spec()).unwrap() < 1e-14);
    }
}
