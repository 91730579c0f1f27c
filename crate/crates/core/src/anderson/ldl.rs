//! Sparse `LDLᵀ` factorization of complex symmetric box operators.
//!
//! Sites are permuted by geometric nested dissection; the factorization is
//! the up-looking algorithm driven by the elimination tree. No pivoting is
//! done, so a vanishing pivot is reported as a singular operator.

use std::sync::Arc;

use num_complex::Complex64;

use super::geometry::LatticeBox;
use super::hamiltonian::{BoxHamiltonian, HOPPING};
use crate::error::{invalid, Error, Result};

const NONE: usize = usize::MAX;

/// Ordering, elimination tree and column counts for one box.
#[derive(Debug, Clone)]
pub struct LdlSymbolic {
    pub geometry: LatticeBox,
    /// `perm[new] = old`.
    pub perm: Vec<usize>,
    pub pinv: Vec<usize>,
    parent: Vec<usize>,
    lp: Vec<usize>,
    /// Upper-triangular pattern of the permuted matrix, column `k` lists rows `< k`.
    upper: Vec<Vec<usize>>,
}

fn dissect(side: usize, lo: [usize; 3], hi: [usize; 3], out: &mut Vec<usize>) {
    let ext = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
    if ext.contains(&0) {
        return;
    }
    if ext[0] * ext[1] * ext[2] <= 32 || ext.iter().all(|&e| e <= 2) {
        for x in lo[0]..hi[0] {
            for y in lo[1]..hi[1] {
                for z in lo[2]..hi[2] {
                    out.push((x * side + y) * side + z);
                }
            }
        }
        return;
    }
    let axis = (0..3).max_by_key(|&a| (ext[a], 3 - a)).unwrap();
    let mid = lo[axis] + ext[axis] / 2;
    let mut left_hi = hi;
    left_hi[axis] = mid;
    let mut right_lo = lo;
    right_lo[axis] = mid + 1;
    let mut sep_lo = lo;
    sep_lo[axis] = mid;
    let mut sep_hi = hi;
    sep_hi[axis] = mid + 1;
    dissect(side, lo, left_hi, out);
    dissect(side, right_lo, hi, out);
    dissect(side, sep_lo, sep_hi, out);
}

/// Nested-dissection permutation `new → old` of the box sites.
pub fn nested_dissection(geometry: &LatticeBox) -> Vec<usize> {
    let s = geometry.side;
    let mut out = Vec::with_capacity(geometry.sites());
    dissect(s, [0; 3], [s; 3], &mut out);
    out
}

impl LdlSymbolic {
    pub fn new(geometry: LatticeBox) -> Arc<Self> {
        let n = geometry.sites();
        let perm = nested_dissection(&geometry);
        let mut pinv = vec![0; n];
        for (k, &old) in perm.iter().enumerate() {
            pinv[old] = k;
        }
        let upper: Vec<Vec<usize>> = (0..n)
            .map(|k| {
                let mut rows: Vec<usize> = geometry
                    .neighbors(perm[k])
                    .map(|j| pinv[j])
                    .filter(|&i| i < k)
                    .collect();
                rows.sort_unstable();
                rows
            })
            .collect();
        let mut parent = vec![NONE; n];
        let mut flag = vec![NONE; n];
        let mut lnz = vec![0usize; n];
        for k in 0..n {
            flag[k] = k;
            for &i0 in &upper[k] {
                let mut i = i0;
                while flag[i] != k {
                    if parent[i] == NONE {
                        parent[i] = k;
                    }
                    lnz[i] += 1;
                    flag[i] = k;
                    i = parent[i];
                }
            }
        }
        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + lnz[k];
        }
        Arc::new(LdlSymbolic {
            geometry,
            perm,
            pinv,
            parent,
            lp,
            upper,
        })
    }

    /// Number of strictly lower entries of `L`.
    pub fn factor_entries(&self) -> usize {
        *self.lp.last().unwrap()
    }
}

/// `P(H + shift)Pᵀ = L D Lᵀ`.
#[derive(Debug, Clone)]
pub struct LdlFactor {
    symbolic: Arc<LdlSymbolic>,
    li: Vec<u32>,
    lx: Vec<Complex64>,
    d: Vec<Complex64>,
}

impl LdlFactor {
    pub fn new(symbolic: &Arc<LdlSymbolic>, h: &BoxHamiltonian, shift: Complex64) -> Result<Self> {
        let sym = symbolic.clone();
        if h.geometry != sym.geometry {
            return Err(invalid("factorization pattern built for another box"));
        }
        let n = h.dim();
        let nnz = sym.factor_entries();
        let mut li = vec![0u32; nnz];
        let mut lx = vec![Complex64::new(0.0, 0.0); nnz];
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        let mut pattern = vec![0usize; n];
        let mut flag = vec![NONE; n];
        let mut lnz = vec![0usize; n];
        let scale = h.diagonal.iter().fold(0.0f64, |a, v| a.max(v.abs())) + shift.norm() + 3.0;
        for k in 0..n {
            y[k] = Complex64::new(0.0, 0.0);
            let mut top = n;
            flag[k] = k;
            let diag = h.diagonal[sym.perm[k]] + shift;
            for (i0, a) in sym.upper[k]
                .iter()
                .map(|&i| (i, Complex64::new(HOPPING, 0.0)))
                .chain(std::iter::once((k, diag)))
            {
                y[i0] += a;
                let mut len = 0;
                let mut i = i0;
                while flag[i] != k {
                    pattern[len] = i;
                    len += 1;
                    flag[i] = k;
                    i = sym.parent[i];
                }
                while len > 0 {
                    top -= 1;
                    len -= 1;
                    pattern[top] = pattern[len];
                }
            }
            d[k] = y[k];
            y[k] = Complex64::new(0.0, 0.0);
            for &i in &pattern[top..n] {
                let yi = y[i];
                y[i] = Complex64::new(0.0, 0.0);
                let p2 = sym.lp[i] + lnz[i];
                for p in sym.lp[i]..p2 {
                    y[li[p] as usize] -= lx[p] * yi;
                }
                let l_ki = yi / d[i];
                d[k] -= l_ki * yi;
                li[p2] = k as u32;
                lx[p2] = l_ki;
                lnz[i] += 1;
            }
            if !(d[k].norm() > 1e-14 * scale) || !d[k].is_finite() {
                return Err(Error::Singular {
                    pivot: d[k].norm(),
                    row: sym.perm[k],
                    suggested_eta: 1e-4,
                });
            }
        }
        Ok(LdlFactor {
            symbolic: sym,
            li,
            lx,
            d,
        })
    }

    /// Solves `(H + shift) x = b` in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let sym = &self.symbolic;
        let n = b.len();
        let mut x: Vec<Complex64> = sym.perm.iter().map(|&o| b[o]).collect();
        for j in 0..n {
            let xj = x[j];
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for p in sym.lp[j]..sym.lp[j + 1] {
                x[self.li[p] as usize] -= self.lx[p] * xj;
            }
        }
        for j in 0..n {
            x[j] /= self.d[j];
        }
        for j in (0..n).rev() {
            let mut s = x[j];
            for p in sym.lp[j]..sym.lp[j + 1] {
                s -= self.lx[p] * x[self.li[p] as usize];
            }
            x[j] = s;
        }
        for (k, &o) in sym.perm.iter().enumerate() {
            b[o] = x[k];
        }
    }

    /// Number of pivots with negative real part; for a real shift this is the
    /// number of eigenvalues of `H` below `−shift`.
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|z| z.re < 0.0).count()
    }
}
