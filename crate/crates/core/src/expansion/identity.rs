//! Numerical check of the decomposition `R = Σ_{l<N} A_l + Σ_z Ã_N(·,z) R(z,y)` on a box.
//!
//! On a finite box the free propagator is `R_r = (H₀ + E* + iη)^{-1}` of the
//! same box, and `σ = E − E*`, so the decomposition is an exact operator
//! identity and the residual measures only solver error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::terms::{generate_terms, Insertion, Terminal};
use crate::anderson::{BoxHamiltonian, LatticeBox, LdlSymbolic, Resolvent};
use crate::error::{invalid, Error, Result};
use crate::selfenergy::EnergyContext;

/// Energies entering the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityContext {
    pub lambda: f64,
    pub energy: f64,
    pub estar: f64,
}

impl From<&EnergyContext<f64>> for IdentityContext {
    fn from(c: &EnergyContext<f64>) -> Self {
        IdentityContext {
            lambda: c.lambda,
            energy: c.energy,
            estar: c.estar,
        }
    }
}

impl IdentityContext {
    pub fn sigma(&self) -> f64 {
        self.energy - self.estar
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: usize,
    pub x: [i64; 3],
    pub y: [i64; 3],
    /// Largest deviation over the whole column `R(·, y)`.
    pub residual: f64,
    /// Deviation at `(x, y)`.
    pub residual_at_x: f64,
    pub column_norm: f64,
    pub terms: usize,
    pub eta: f64,
    /// Whether a singular solve at the requested `η` forced a retry.
    pub retried: bool,
}

fn evaluate(
    geometry: LatticeBox,
    potential: &[f64],
    ctx: &IdentityContext,
    x: usize,
    y: usize,
    n: usize,
    eta: f64,
) -> Result<(f64, f64, f64, usize)> {
    let free = BoxHamiltonian::free(geometry);
    let h = crate::anderson::build_hamiltonian(geometry, potential, ctx.lambda)?;
    let sym = LdlSymbolic::new(geometry);
    let rr = Resolvent::new(&free, ctx.estar, eta, Some(&sym))?;
    let full = Resolvent::new(&h, ctx.energy, eta, Some(&sym))?;
    let r_col = full.column(y)?.values;
    let rr_col = rr.column(y)?.values;
    let d = generate_terms(n)?;
    let sigma = ctx.sigma();
    let mut rhs = vec![Complex64::new(0.0, 0.0); geometry.sites()];
    let terms = d.terms();
    for t in &terms {
        let mut v = match t.terminal {
            Terminal::Free => rr_col.clone(),
            Terminal::Full => r_col.clone(),
        };
        for ins in t.insertions.iter().rev() {
            match ins {
                Insertion::Potential => {
                    for (a, p) in v.iter_mut().zip(potential) {
                        *a *= ctx.lambda * p;
                    }
                }
                Insertion::Bullet => {
                    for a in v.iter_mut() {
                        *a *= sigma;
                    }
                }
            }
            rr.apply(&mut v)?;
        }
        let s = t.sign();
        for (r, a) in rhs.iter_mut().zip(&v) {
            *r += s * a;
        }
    }
    let residual = r_col.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let norm = r_col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok((residual, (r_col[x] - rhs[x]).norm(), norm, terms.len()))
}

/// Residual of the decomposition at stopping order `n` for one disorder sample.
///
/// `x` and `y` must be at graph distance at least `side/4` from the outside
/// of the box. At `η = 0` a singular solve is retried once at `η = 10⁻⁸`.
pub fn evaluate_decomposition(
    geometry: LatticeBox,
    potential: &[f64],
    ctx: &IdentityContext,
    x: [i64; 3],
    y: [i64; 3],
    n: usize,
    eta: f64,
) -> Result<IdentityReport> {
    let xi = geometry.index(x).ok_or_else(|| invalid("x outside the box"))?;
    let yi = geometry.index(y).ok_or_else(|| invalid("y outside the box"))?;
    let margin = (geometry.side / 4).max(1) as i64;
    if geometry.distance_to_outside(xi) < margin || geometry.distance_to_outside(yi) < margin {
        return Err(invalid(format!(
            "x and y must be at distance ≥ {margin} from the box boundary"
        )));
    }
    if !(eta >= 0.0) {
        return Err(invalid("eta must be non-negative"));
    }
    let (result, eta_used, retried) = match evaluate(geometry, potential, ctx, xi, yi, n, eta) {
        Err(Error::Singular { .. }) if eta == 0.0 => {
            let e = 1e-8;
            (evaluate(geometry, potential, ctx, xi, yi, n, e)?, e, true)
        }
        other => (other?, eta, false),
    };
    let (residual, residual_at_x, column_norm, terms) = result;
    Ok(IdentityReport {
        n,
        x,
        y,
        residual,
        residual_at_x,
        column_norm,
        terms,
        eta: eta_used,
        retried,
    })
}
