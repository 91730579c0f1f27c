//! Dispersion law of the lattice Laplacian on the momentum torus.
//!
//! With the transform convention `f̂(p) = Σ_n e^{-i2πp·n} f(n)`, the operator
//! `-½Δ` acts on momentum space as multiplication by
//! `e(p) = 2 Σ_α sin²(π p_α) = Σ_α (1 − cos 2π p_α)`, which ranges over `[0, 6]`.

use serde::{Deserialize, Serialize};

use crate::scalar::{cst, Scalar};

/// A point of the torus `[-1/2, 1/2]³`; components are wrapped modulo 1 on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint<T>([T; 3]);

impl<T: Scalar> TorusPoint<T> {
    pub fn new(p: [T; 3]) -> Self {
        TorusPoint(p.map(wrap_component))
    }

    pub fn components(&self) -> [T; 3] {
        self.0
    }

    /// Squared Euclidean norm of the representative in `[-1/2, 1/2]³`.
    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &c| acc + c * c)
    }
}

/// Wraps a real number into `[-1/2, 1/2]`.
#[inline]
pub fn wrap_component<T: Scalar>(x: T) -> T {
    x - x.round()
}

/// One-axis contribution `2 sin²(π p) = 1 − cos 2πp`, evaluated without cancellation near `p = 0`.
#[inline]
pub fn axis_term<T: Scalar>(p: T) -> T {
    let s = (T::PI() * p).sin();
    cst::<T>(2.0) * s * s
}

/// `e(p) = 2 Σ_α sin²(π p_α)`.
pub fn dispersion<T: Scalar>(p: &TorusPoint<T>) -> T {
    p.0.iter().fold(T::zero(), |acc, &c| acc + axis_term(c))
}

/// Dispersion evaluated on raw (unwrapped) components; identical by periodicity.
#[inline]
pub fn dispersion_raw<T: Scalar>(p: [T; 3]) -> T {
    axis_term(p[0]) + axis_term(p[1]) + axis_term(p[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn special_points() {
        assert_eq!(dispersion(&TorusPoint::new([0.0f64, 0.0, 0.0])), 0.0);
        assert!((dispersion(&TorusPoint::new([0.5f64, 0.5, 0.5])) - 6.0).abs() < 1e-15);
        assert!((dispersion(&TorusPoint::new([0.5f64, 0.0, 0.0])) - 2.0).abs() < 1e-15);
        assert!((dispersion(&TorusPoint::new([0.5f32, 0.0, 0.0])) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn wrapping_lands_in_fundamental_cell() {
        let p = TorusPoint::new([1.25f64, -0.75, 3.0]);
        let c = p.components();
        assert!((c[0] - 0.25).abs() < 1e-15);
        assert!((c[1] - 0.25).abs() < 1e-15);
        assert!(c[2].abs() < 1e-15);
    }

    #[test]
    fn quadratic_lower_bound_on_dense_grid() {
        // e(p) ≥ (8/3)|p|² ≥ |p|², hence (e+E*)^{-1} ≤ (|p|²+E*)^{-1}.
        let m = 41;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let f = |n: usize| -0.5 + n as f64 / (m - 1) as f64;
                    let p = TorusPoint::new([f(i), f(j), f(k)]);
                    let e = dispersion(&p);
                    let q2 = p.norm_sqr();
                    assert!(e + 1e-14 >= 8.0 / 3.0 * q2, "{:?}", p);
                    for estar in [1e-3, 0.1, 1.0] {
                        assert!(1.0 / (e + estar) <= 1.0 / (q2 + estar) + 1e-12);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn range_parity_and_periodicity(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, s in -4i32..4) {
            let e = dispersion_raw([a, b, c]);
            prop_assert!((0.0..=6.0 + 1e-12).contains(&e));
            prop_assert!((e - dispersion_raw([-a, -b, -c])).abs() < 1e-12);
            let shift = s as f64;
            prop_assert!((e - dispersion_raw([a + shift, b, c - shift])).abs() < 1e-11);
            prop_assert!((e - dispersion(&TorusPoint::new([a, b, c]))).abs() < 1e-12);
        }
    }
}
