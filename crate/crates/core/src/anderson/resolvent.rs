//! Resolvent columns `R(·, y) = (H + E + iη)^{-1} δ_y` on a box.

use std::sync::Arc;

use num_complex::Complex64;

use super::hamiltonian::BoxHamiltonian;
use super::iterative::minres;
use super::ldl::{LdlFactor, LdlSymbolic};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Residual contract relative to `‖δ_y‖ = 1`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Boxes above this many sites are solved with MINRES when `η = 0`.
pub const DIRECT_SITE_LIMIT: usize = 40_000;

/// How `H + E + iη` is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    /// Direct unless `η = 0` and the box exceeds [`DIRECT_SITE_LIMIT`].
    #[default]
    Auto,
    Direct,
    /// MINRES; requires `η = 0`.
    Iterative,
}

#[derive(Debug, Clone)]
pub struct ResolventColumn {
    pub site: usize,
    pub eta: f64,
    pub values: Vec<Complex64>,
    pub residual: f64,
}

/// A factorized `H + E + iη` for repeated column solves.
pub struct Resolvent<'a> {
    h: &'a BoxHamiltonian,
    shift: Complex64,
    factor: Option<LdlFactor>,
}

fn residual(h: &BoxHamiltonian, shift: Complex64, x: &[Complex64], site: usize, work: &mut Vec<Complex64>) -> f64 {
    work.resize(x.len(), Complex64::new(0.0, 0.0));
    h.apply_shifted(shift, x, work);
    work[site] -= 1.0;
    work.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl<'a> Resolvent<'a> {
    pub fn new(h: &'a BoxHamiltonian, energy: f64, eta: f64, symbolic: Option<&Arc<LdlSymbolic>>) -> Result<Self> {
        Self::with_solver(h, energy, eta, symbolic, SolverKind::Auto)
    }

    pub fn with_solver(
        h: &'a BoxHamiltonian,
        energy: f64,
        eta: f64,
        symbolic: Option<&Arc<LdlSymbolic>>,
        kind: SolverKind,
    ) -> Result<Self> {
        let shift = Complex64::new(energy, eta);
        let direct = match kind {
            SolverKind::Auto => eta != 0.0 || h.dim() <= DIRECT_SITE_LIMIT,
            SolverKind::Direct => true,
            SolverKind::Iterative if eta == 0.0 => false,
            SolverKind::Iterative => return Err(invalid("the iterative solver needs eta = 0")),
        };
        let factor = if direct {
            let sym = match symbolic {
                Some(s) => s.clone(),
                None => LdlSymbolic::new(h.geometry),
            };
            Some(LdlFactor::new(&sym, h, shift).map_err(|e| match e {
                Error::Singular { pivot, row, .. } => Error::Singular {
                    pivot,
                    row,
                    suggested_eta: if eta == 0.0 { 1e-4 } else { eta * 10.0 },
                },
                other => other,
            })?)
        } else {
            None
        };
        Ok(Resolvent { h, shift, factor })
    }

    /// `v ← (H + E + iη)^{-1} v`.
    pub fn apply(&self, v: &mut [Complex64]) -> Result<()> {
        match &self.factor {
            Some(f) => {
                f.solve_in_place(v);
                Ok(())
            }
            None => {
                let re: Vec<f64> = v.iter().map(|z| z.re).collect();
                let im: Vec<f64> = v.iter().map(|z| z.im).collect();
                let xr = minres(self.h, self.shift.re, &re, RESIDUAL_TOLERANCE * 0.1, 20 * v.len())?;
                let xi = minres(self.h, self.shift.re, &im, RESIDUAL_TOLERANCE * 0.1, 20 * v.len())?;
                for (k, z) in v.iter_mut().enumerate() {
                    *z = Complex64::new(xr[k], xi[k]);
                }
                Ok(())
            }
        }
    }

    pub fn column(&self, site: usize) -> Result<ResolventColumn> {
        let n = self.h.dim();
        let mut work = Vec::new();
        let values = match &self.factor {
            Some(f) => {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                x[site] = Complex64::new(1.0, 0.0);
                f.solve_in_place(&mut x);
                // Up to two steps of iterative refinement.
                for _ in 0..2 {
                    if residual(self.h, self.shift, &x, site, &mut work) <= RESIDUAL_TOLERANCE {
                        break;
                    }
                    let mut r: Vec<Complex64> = work.iter().map(|z| -z).collect();
                    f.solve_in_place(&mut r);
                    for (a, b) in x.iter_mut().zip(&r) {
                        *a += b;
                    }
                }
                x
            }
            None => {
                let mut rhs = vec![0.0; n];
                rhs[site] = 1.0;
                let x = minres(self.h, self.shift.re, &rhs, RESIDUAL_TOLERANCE * 0.1, 20 * n)?;
                x.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
            }
        };
        let res = residual(self.h, self.shift, &values, site, &mut work);
        if !(res <= RESIDUAL_TOLERANCE) {
            return Err(if self.shift.im == 0.0 {
                Error::Singular {
                    pivot: res,
                    row: site,
                    suggested_eta: 1e-4,
                }
            } else {
                Error::ResidualTooLarge {
                    residual: res,
                    tolerance: RESIDUAL_TOLERANCE,
                }
            });
        }
        Ok(ResolventColumn {
            site,
            eta: self.shift.im,
            values,
            residual: res,
        })
    }
}

/// One column of `(H + E + iη)^{-1}`.
pub fn resolvent_column(h: &BoxHamiltonian, energy: f64, eta: f64, site: usize) -> Result<ResolventColumn> {
    Resolvent::new(h, energy, eta, None)?.column(site)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anderson::geometry::LatticeBox;
    use crate::anderson::hamiltonian::build_hamiltonian;

    #[test]
    fn columns_are_symmetric() {
        let b = LatticeBox::with_side(6).unwrap();
        let v: Vec<f64> = (0..b.sites()).map(|i| ((i * 13) % 11) as f64 / 5.5 - 1.0).collect();
        let h = build_hamiltonian(b, &v, 0.7).unwrap();
        let r = Resolvent::new(&h, 0.2, 1e-3, None).unwrap();
        let (i, j) = (3, 150);
        let ci = r.column(i).unwrap();
        let cj = r.column(j).unwrap();
        assert!((ci.values[j] - cj.values[i]).norm() < 1e-10);
        assert!(ci.residual < RESIDUAL_TOLERANCE);
    }
}
