//! MINRES for real symmetric, possibly indefinite, shifted box operators.

use super::hamiltonian::BoxHamiltonian;
use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `(H + shift) x = b` to relative residual `tol`.
pub fn minres(h: &BoxHamiltonian, shift: f64, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = b.len();
    let beta1 = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if beta1 == 0.0 {
        return Ok(x);
    }
    let mut r1 = b.to_vec();
    let mut r2 = b.to_vec();
    let mut y = b.to_vec();
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut w1 = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0f64, 0.0f64);
    let mut ax = vec![0.0; n];
    for itn in 1..=max_iter {
        for i in 0..n {
            v[i] = y[i] / beta;
        }
        h.apply_real(shift, &v, &mut y);
        if itn >= 2 {
            for i in 0..n {
                y[i] -= beta / oldb * r1[i];
            }
        }
        let alfa = dot(&v, &y);
        for i in 0..n {
            y[i] -= alfa / beta * r2[i];
        }
        std::mem::swap(&mut r1, &mut r2);
        r2.copy_from_slice(&y);
        oldb = beta;
        beta = dot(&y, &y).sqrt();
        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;
        std::mem::swap(&mut w1, &mut w2);
        std::mem::swap(&mut w2, &mut w);
        for i in 0..n {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
            x[i] += phi * w[i];
        }
        if phibar <= tol * beta1 || beta == 0.0 {
            h.apply_real(shift, &x, &mut ax);
            let res = ax.iter().zip(b).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
            if res <= tol * beta1 {
                return Ok(x);
            }
        }
    }
    h.apply_real(shift, &x, &mut ax);
    let res = ax.iter().zip(b).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
    Err(Error::ResidualTooLarge {
        residual: res / beta1,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anderson::geometry::LatticeBox;

    #[test]
    fn indefinite_solve() {
        let b = LatticeBox::with_side(9).unwrap();
        let h = BoxHamiltonian {
            geometry: b,
            diagonal: (0..b.sites())
                .map(|i| 3.0 + ((i * 31) % 7) as f64 * 0.2 - 0.6)
                .collect(),
        };
        let mut rhs = vec![0.0; b.sites()];
        rhs[b.index([0, 0, 0]).unwrap()] = 1.0;
        let x = minres(&h, -0.7, &rhs, 1e-12, 5000).unwrap();
        let mut ax = vec![0.0; b.sites()];
        h.apply_real(-0.7, &x, &mut ax);
        let err: f64 = ax.iter().zip(&rhs).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }
}
