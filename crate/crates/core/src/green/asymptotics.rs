//! Large-distance behaviour `R_r(x) ≈ e^{−√(2E*)|x|} / (2π(|x|+1))`.

use serde::{Deserialize, Serialize};

use super::free::green_free_many;
use super::LatticeVector;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub estar: f64,
    /// `(|x|, R_r(x), ratio)` with ratio `R_r·2π(|x|+1)·e^{√(2E*)|x|}`.
    pub points: Vec<(f64, f64, f64)>,
    /// Least-squares slope of `−ln(R_r(x)(|x|+1))` against `|x|`.
    pub fitted_rate: f64,
    /// `√(2E*)`.
    pub continuum_rate: f64,
    /// Exact axis decay rate of the lattice kernel, `2 asinh(√(E*/2))`.
    pub lattice_rate: f64,
    /// Envelope `|ratio − 1| ≤ c1 √E* + c2/|x|` over the points.
    pub c1: f64,
    pub c2: f64,
    /// Smallest `K` with `R_r(x) ≤ K/(|x|+1)` over the points.
    pub k_bound: f64,
}

/// Ordinary least squares `y ≈ a + b x`; returns `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// `max (|x|+1)·R_r(x)` over `(|x|, R_r)` pairs.
pub fn fit_k_bound(points: &[(f64, f64)]) -> f64 {
    points.iter().map(|(r, g)| g * (r + 1.0)).fold(0.0, f64::max)
}

/// Evaluates `R_r` along the first axis at the given distances and compares with
/// the continuum asymptotics.
pub fn check_asymptotics(distances: &[u32], estar: f64) -> Result<AsymptoticsReport> {
    if distances.len() < 3 {
        return Err(invalid("need at least three distances"));
    }
    let xs: Vec<LatticeVector> = distances.iter().map(|&d| LatticeVector::new(d as i64, 0, 0)).collect();
    let vals = green_free_many(&xs, estar)?;
    let kappa = (2.0 * estar).sqrt();
    let two_pi = 2.0 * std::f64::consts::PI;
    let points: Vec<(f64, f64, f64)> = distances
        .iter()
        .zip(&vals)
        .map(|(&d, &g)| {
            let r = d as f64;
            (r, g, g * two_pi * (r + 1.0) * (kappa * r).exp())
        })
        .collect();
    let rs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let logs: Vec<f64> = points.iter().map(|p| (p.1 * (p.0 + 1.0)).ln()).collect();
    let (_, slope) = linear_fit(&rs, &logs);

    // Least squares for (c1, c2) on |ratio − 1|, clipped to ≥ 0, then widened to
    // an envelope through c2.
    let sq = estar.sqrt();
    let devs: Vec<f64> = points.iter().map(|p| (p.2 - 1.0).abs()).collect();
    let inv: Vec<f64> = rs.iter().map(|r| 1.0 / r.max(1.0)).collect();
    let (a, _) = linear_fit(&inv, &devs);
    let c1 = (a / sq).max(0.0);
    let c2 = devs
        .iter()
        .zip(&rs)
        .map(|(d, r)| ((d - c1 * sq) * r.max(1.0)).max(0.0))
        .fold(0.0, f64::max);
    let k_bound = fit_k_bound(&points.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>());
    Ok(AsymptoticsReport {
        estar,
        points,
        fitted_rate: -slope,
        continuum_rate: kappa,
        lattice_rate: 2.0 * (0.5 * estar).sqrt().asinh(),
        c1,
        c2,
        k_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_line() {
        let (a, b) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((a - 1.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
    }
}
