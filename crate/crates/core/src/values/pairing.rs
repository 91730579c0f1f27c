//! Pairing integrals with the propagators `1/(e(p)+E*)` and `1/(p²+E*)`.

use serde::{Deserialize, Serialize};

use super::graph_value::LoopParametrization;
use super::mc::{run_mc, run_mc_vec, McEstimate, McParams};
use super::propagator::{norm2, torus_lattice, torus_quadratic, CutoffProposal, TorusMixture};
use crate::diagrams::{build_feynman_graph, Partition};
use crate::error::{invalid, Result};

/// Default cutoff on rescaled loop momenta `|k| = |p|/√E*`.
pub const DEFAULT_SURROGATE_CUTOFF: f64 = 8.0;

fn check(partition: &Partition, estar: f64) -> Result<LoopParametrization> {
    if !(estar > 0.0) || !estar.is_finite() {
        return Err(invalid(format!("estar must be positive, got {estar}")));
    }
    if !partition.is_pairing() {
        return Err(invalid("pairing partition required"));
    }
    let g = build_feynman_graph(partition)?;
    LoopParametrization::new(g.vertex_count, &g.edges)
}

/// `∫ Π d³p Π_lines 1/(p²+E*)` over `ℝ^{3L}` with every loop momentum
/// restricted to `|p| ≤ cutoff·√E*`.
///
/// The cutoff scales with `√E*`, so the exact relation
/// `value(E*) = E*^{3L/2 − I} value(1)` holds for any cutoff.
pub fn continuum_pairing_integral(partition: &Partition, estar: f64, cutoff: f64, mc: &McParams) -> Result<McEstimate> {
    let lp = check(partition, estar)?;
    if !(cutoff > 0.0) {
        return Err(invalid("cutoff must be positive"));
    }
    let h = CutoffProposal::new(cutoff);
    let s = estar.sqrt();
    let stream = format!("continuum/{partition}/{estar:e}");
    run_mc(mc, &stream, |rng| {
        let mut w = vec![[0.0; 3]; lp.loops];
        // Density of p = √E* k is h(k) / E*^{3/2}.
        let mut ln_q = 0.0;
        for wj in w.iter_mut() {
            let k = h.sample(rng);
            ln_q += (h.density(k) / (estar * s)).ln();
            *wj = [s * k[0], s * k[1], s * k[2]];
        }
        let ln_f: f64 = (0..lp.lines.len())
            .map(|k| -(norm2(lp.momentum(k, &w)) + estar).ln())
            .sum();
        (ln_f - ln_q).exp()
    })
}

/// Ratio `value(E*)/value(2E*)` with independent samples and its expected value `2^{n/2−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub n: usize,
    pub estar: f64,
    pub at_estar: McEstimate,
    pub at_double: McEstimate,
    pub ratio: f64,
    pub ratio_stderr: f64,
    pub expected: f64,
}

impl ScalingCheck {
    pub fn deviation_in_stderr(&self) -> f64 {
        (self.ratio - self.expected).abs() / self.ratio_stderr
    }
}

pub fn continuum_scaling_check(partition: &Partition, estar: f64, cutoff: f64, mc: &McParams) -> Result<ScalingCheck> {
    let a = continuum_pairing_integral(partition, estar, cutoff, mc)?;
    let b = continuum_pairing_integral(partition, 2.0 * estar, cutoff, mc)?;
    let (ratio, ratio_stderr) = a.ratio(&b);
    let n = partition.blocks().len();
    Ok(ScalingCheck {
        n,
        estar,
        at_estar: a,
        at_double: b,
        ratio,
        ratio_stderr,
        expected: 2f64.powf(n as f64 / 2.0 - 1.0),
    })
}

/// Torus integrals with lattice and quadratic propagators on common samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPairingEstimate {
    pub partition: String,
    pub estar: f64,
    pub lattice: McEstimate,
    pub quadratic: McEstimate,
    /// `(lattice/quadratic)^{1/(2n+2)}`.
    pub fitted_c: f64,
}

/// `∫_{(T³)^L} Π_lines 1/(e(p)+E*)` after eliminating the deltas, together
/// with the same integral for `1/(p²+E*)`.
pub fn torus_pairing_integral(partition: &Partition, estar: f64, mc: &McParams) -> Result<TorusPairingEstimate> {
    let lp = check(partition, estar)?;
    let width = (estar.sqrt() / (2.0 * std::f64::consts::PI)).clamp(1e-4, 0.25);
    let mix = TorusMixture::new(0.5, width);
    let stream = format!("torus/{partition}/{estar:e}");
    let est = run_mc_vec(mc, &stream, 2, |rng, out| {
        let mut w = vec![[0.0; 3]; lp.loops];
        let mut q = 1.0;
        for wj in w.iter_mut() {
            *wj = mix.sample(rng);
            q *= mix.density(*wj);
        }
        let mut lat = 1.0 / q;
        let mut quad = 1.0 / q;
        for k in 0..lp.lines.len() {
            let p = lp.momentum(k, &w);
            lat *= torus_lattice(p, estar);
            quad *= torus_quadratic(p, estar);
        }
        out[0] = lat;
        out[1] = quad;
    })?;
    let lines = lp.lines.len() as f64;
    Ok(TorusPairingEstimate {
        partition: partition.to_string(),
        estar,
        lattice: est[0],
        quadratic: est[1],
        fitted_c: (est[0].mean / est[1].mean).powf(1.0 / lines),
    })
}
