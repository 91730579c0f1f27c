//! Decay of `𝔼 A_l(0, y)²` along a lattice axis.

use serde::{Deserialize, Serialize};

use super::lattice_sum::{DenseGreen, Region, RegionKernel};
use crate::density::DensitySpec;
use crate::error::{invalid, Result};
use crate::selfenergy::EnergyContext;
use crate::values::bound::{c_of_estar, ln_factorial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub l: usize,
    pub estar: f64,
    pub lambda: f64,
    pub distances: Vec<i64>,
    /// Gate-free partition sums of `𝔼 A_l(0, d e₁)²`.
    pub values: Vec<f64>,
    pub fitted_rate: f64,
    /// `√(E*/3)`.
    pub envelope_rate: f64,
    /// `2√(2E*)`.
    pub continuum_rate: f64,
    pub holds: bool,
    /// Smallest `K` for which `(4l)!·E*·(C(E*)λ²/√E*)^l·e^{−√(E*/3)d}` bounds every value.
    pub fitted_k: f64,
}

/// Least-squares slope of `ln v` against `d`, negated.
pub fn fit_rate(distances: &[i64], values: &[f64]) -> f64 {
    let n = distances.len() as f64;
    let xs: Vec<f64> = distances.iter().map(|&d| d as f64).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    -sxy / sxx
}

pub fn check_decay_envelope(
    l: usize,
    ctx: &EnergyContext<f64>,
    distances: &[i64],
    margin: i64,
    density: &DensitySpec,
) -> Result<DecayReport> {
    if !(1..=2).contains(&l) {
        return Err(invalid("only l = 1 and l = 2 are supported"));
    }
    if distances.len() < 3 || distances.iter().any(|&d| d < 0) {
        return Err(invalid("need at least three non-negative distances"));
    }
    let x = [0, 0, 0];
    let far = [*distances.iter().max().unwrap(), 0, 0];
    let green = DenseGreen::new(ctx.estar, Region::around(x, far, margin).extent(x, far))?;
    let mut values = Vec::with_capacity(distances.len());
    for &d in distances {
        let y = [d, 0, 0];
        let kernel = RegionKernel::new(&green, Region::around(x, y, margin), x, y, l >= 2)?;
        values.push(ctx.lambda.powi(2 * l as i32) * kernel.gate_free_sum(l, density)?);
    }
    let fitted_rate = fit_rate(distances, &values);
    let envelope_rate = (ctx.estar / 3.0).sqrt();
    let c1 = c_of_estar(ctx.estar, 1.0);
    let ln_prefactor =
        ln_factorial(4 * l as u64) + ctx.estar.ln() + l as f64 * (c1 * ctx.lambda * ctx.lambda / ctx.estar.sqrt()).ln();
    // The bound scales as K^l.
    let fitted_k = distances
        .iter()
        .zip(&values)
        .map(|(&d, &v)| ((v.ln() - ln_prefactor + envelope_rate * d as f64) / l as f64).exp())
        .fold(0.0, f64::max);
    Ok(DecayReport {
        l,
        estar: ctx.estar,
        lambda: ctx.lambda,
        distances: distances.to_vec(),
        values,
        fitted_rate,
        envelope_rate,
        continuum_rate: 2.0 * (2.0 * ctx.estar).sqrt(),
        holds: fitted_rate >= envelope_rate,
        fitted_k,
    })
}
