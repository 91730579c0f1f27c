//! Monte Carlo of `𝔼 A_l(x,y)²` against the gate-free partition sum.

use serde::{Deserialize, Serialize};

use super::lattice_sum::{DenseGreen, Region, RegionKernel};
use super::terms::{generate_terms, Insertion};
use crate::density::DensitySpec;
use crate::error::{invalid, Error, Result};
use crate::selfenergy::EnergyContext;
use crate::values::{run_mc, McEstimate, McParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TadpoleComparison {
    pub l: usize,
    pub x: [i64; 3],
    pub y: [i64; 3],
    pub estar: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub region_margin: i64,
    pub region_sites: usize,
    pub mc: McEstimate,
    /// `λ^{2l}` times the gate-free partition sum.
    pub diagram_sum: f64,
    pub deviation_in_stderr: f64,
    /// Relative change of the `l = 1` sum when the margin grows by one.
    pub truncation_estimate: f64,
}

/// Relative truncation tolerance for the summation region.
pub const TRUNCATION_TOLERANCE: f64 = 1e-2;

pub fn mc_moment_al_squared(
    l: usize,
    ctx: &EnergyContext<f64>,
    x: [i64; 3],
    y: [i64; 3],
    mc: &McParams,
    margin: i64,
    density: &DensitySpec,
) -> Result<TadpoleComparison> {
    if !(1..=2).contains(&l) {
        return Err(invalid("only l = 1 and l = 2 are supported"));
    }
    if margin < 1 {
        return Err(invalid("region margin must be positive"));
    }
    let big = Region::around(x, y, margin + 1);
    let green = DenseGreen::new(ctx.estar, big.extent(x, y))?;
    let kernel = RegionKernel::new(&green, Region::around(x, y, margin), x, y, l >= 2)?;
    let outer = RegionKernel::new(&green, big, x, y, false)?;
    let one = |k: &RegionKernel| -> f64 { (0..k.len()).map(|i| (k.from_x[i] * k.to_y[i]).powi(2)).sum() };
    let (inner_sum, outer_sum) = (one(&kernel), one(&outer));
    let truncation_estimate = (outer_sum - inner_sum).abs() / outer_sum;
    if truncation_estimate > TRUNCATION_TOLERANCE {
        return Err(Error::TruncationTooLarge {
            estimate: truncation_estimate,
            tolerance: TRUNCATION_TOLERANCE,
            radius: margin as usize,
        });
    }
    let lam2l = ctx.lambda.powi(2 * l as i32);
    let diagram_sum = lam2l * kernel.gate_free_sum(l, density)?;

    let terms = generate_terms(l + 1)?;
    let a_l: Vec<_> = terms.explicit_of_order(l).into_iter().cloned().collect();
    let m = kernel.len();
    let stream = format!("tadpole/l{l}");
    let est = run_mc(mc, &stream, |rng| {
        let v: Vec<f64> = (0..m).map(|_| density.sample(rng)).collect();
        let mut total = 0.0;
        let mut w = vec![0.0; m];
        for t in &a_l {
            let mut u = kernel.to_y.clone();
            for (k, ins) in t.insertions.iter().rev().enumerate() {
                if k > 0 {
                    let g = kernel.matrix.as_ref().unwrap();
                    for i in 0..m {
                        let row = &g[i * m..(i + 1) * m];
                        w[i] = row.iter().zip(&u).map(|(a, b)| a * b).sum();
                    }
                    std::mem::swap(&mut u, &mut w);
                }
                match ins {
                    Insertion::Potential => {
                        for (a, p) in u.iter_mut().zip(&v) {
                            *a *= ctx.lambda * p;
                        }
                    }
                    Insertion::Bullet => {
                        for a in u.iter_mut() {
                            *a *= ctx.sigma;
                        }
                    }
                }
            }
            let val: f64 = kernel.from_x.iter().zip(&u).map(|(a, b)| a * b).sum();
            total += t.sign() * val;
        }
        total * total
    })?;
    Ok(TadpoleComparison {
        l,
        x,
        y,
        estar: ctx.estar,
        lambda: ctx.lambda,
        sigma: ctx.sigma,
        region_margin: margin,
        region_sites: m,
        mc: est,
        diagram_sum,
        deviation_in_stderr: (est.mean - diagram_sum).abs() / est.stderr,
        truncation_estimate,
    })
}
