use std::collections::BTreeMap;

use super::bessel::scaled_bessel_i;
use super::table::{GreenMethod, GreenTable};
use super::{canonical_ball, LatticeVector};
use crate::error::{invalid, Error, Result};
use crate::quad::integrate_half_line;
use crate::scalar::{cst, Scalar};

/// Relative tolerance of the heat-kernel quadrature.
pub const BESSEL_TOLERANCE: f64 = 1e-10;

/// Largest table radius built without explicit opt-in.
pub const DEFAULT_MAX_RADIUS: u32 = 64;

fn check_estar<T: Scalar>(estar: T) -> Result<()> {
    if !(estar > T::zero()) || !estar.is_finite() {
        return Err(invalid(format!("estar must be finite and positive, got {estar}")));
    }
    Ok(())
}

/// Heat-kernel integral for a list of octahedral representatives.
fn integrate_canonical<T: Scalar>(points: &[[u32; 3]], estar: T, tol: T) -> Result<Vec<T>> {
    check_estar(estar)?;
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let nmax = points.iter().map(|p| p[2].max(p[1]).max(p[0])).max().unwrap() as usize;
    let mut b = vec![T::zero(); nmax + 1];
    let integrand = |t: T, out: &mut [T]| {
        scaled_bessel_i(t, &mut b);
        let damp = (-estar * t).exp();
        for (o, p) in out.iter_mut().zip(points) {
            *o = damp * b[p[0] as usize] * b[p[1] as usize] * b[p[2] as usize];
        }
    };
    // e^{−t}I_n(t) ≤ e^{−t}I₀(t), which decreases in t.
    let tail = |t: T| {
        let mut b0 = [T::zero()];
        scaled_bessel_i(t, &mut b0);
        b0[0] * b0[0] * b0[0] * (-estar * t).exp() / estar
    };
    let floor = T::min_positive_value() / T::epsilon();
    let (v, _) = integrate_half_line(integrand, points.len(), tail, tol, floor)?;
    if let Some(i) = v.iter().position(|x| !(*x > T::zero())) {
        return Err(Error::NonIntegrable(format!(
            "non-positive Green function value at {:?}",
            points[i]
        )));
    }
    Ok(v)
}

/// `R_r(x)` at `E* > 0` via the heat-kernel representation.
pub fn green_free<T: Scalar>(x: LatticeVector, estar: T) -> Result<T> {
    Ok(integrate_canonical(&[x.canonical()], estar, cst(BESSEL_TOLERANCE))?[0])
}

/// `R_r` at several points, sharing quadrature nodes.
pub fn green_free_many<T: Scalar>(xs: &[LatticeVector], estar: T) -> Result<Vec<T>> {
    let mut keys: Vec<[u32; 3]> = xs.iter().map(|x| x.canonical()).collect();
    keys.sort_unstable();
    keys.dedup();
    let vals = integrate_canonical(&keys, estar, cst(BESSEL_TOLERANCE))?;
    let map: BTreeMap<[u32; 3], T> = keys.into_iter().zip(vals).collect();
    Ok(xs.iter().map(|x| map[&x.canonical()]).collect())
}

/// Table of `R_r` on the ball `|x| ≤ radius` (at most 64).
pub fn green_table_bessel<T: Scalar>(radius: u32, estar: T) -> Result<GreenTable<T>> {
    if radius > DEFAULT_MAX_RADIUS {
        return Err(Error::TooLarge {
            what: "green table radius",
            size: radius as usize,
            limit: DEFAULT_MAX_RADIUS as usize,
        });
    }
    green_table_bessel_large(radius, estar)
}

/// As [`green_table_bessel`] without the radius guard.
pub fn green_table_bessel_large<T: Scalar>(radius: u32, estar: T) -> Result<GreenTable<T>> {
    let keys = canonical_ball(radius);
    let vals = integrate_canonical(&keys, estar, cst(BESSEL_TOLERANCE))?;
    Ok(GreenTable::from_canonical(
        estar,
        radius,
        GreenMethod::BesselIntegral,
        None,
        BESSEL_TOLERANCE,
        keys.into_iter().zip(vals).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::i1;

    #[test]
    fn origin_equals_torus_integral() {
        for &e in &[0.01f64, 0.3, 2.0] {
            let g = green_free(LatticeVector::new(0, 0, 0), e).unwrap();
            let t = i1(e).unwrap();
            assert!((g / t - 1.0).abs() < 1e-9, "E*={e}: {g} vs {t}");
        }
    }

    #[test]
    fn rejects_nonpositive_energy() {
        assert!(green_free(LatticeVector::new(1, 0, 0), 0.0f64).is_err());
        assert!(green_table_bessel(65, 0.1f64).is_err());
    }

    #[test]
    fn many_matches_single() {
        let xs = [
            LatticeVector::new(3, -1, 0),
            LatticeVector::new(0, 1, -3),
            LatticeVector::new(5, 5, 5),
        ];
        let many = green_free_many(&xs, 0.2f64).unwrap();
        assert_eq!(many[0], many[1]);
        let single = green_free(xs[2], 0.2f64).unwrap();
        assert!((many[2] / single - 1.0).abs() < 1e-9);
    }
}
