//! Finite-volume localization criterion `B_s L⁴ λ^{−2s} Σ_{n∈∂Λ} 𝔼|R^Λ(n,0)|^s < b`.

use serde::{Deserialize, Serialize};

use super::geometry::LatticeBox;
use super::hamiltonian::build_hamiltonian;
use super::ldl::LdlSymbolic;
use super::moments::DisorderSettings;
use super::potential::sample_potential;
use super::resolvent::Resolvent;
use crate::error::{invalid, Result};
use crate::selfenergy::EnergyContext;
use crate::values::{run_mc_indexed, McEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionParams {
    pub s: f64,
    pub b: f64,
    #[serde(default = "default_b_s")]
    pub b_s: f64,
    #[serde(default)]
    pub eta: f64,
}

fn default_b_s() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub l: usize,
    /// Sites per axis, `2L+1`.
    pub side: usize,
    pub boundary_sites: usize,
    pub params: CriterionParams,
    pub lambda: f64,
    pub energy: f64,
    pub estar: f64,
    /// `Σ_{n∈∂Λ} 𝔼|R^Λ(n,0)|^s`.
    pub boundary_sum: McEstimate,
    /// `B_s L⁴ λ^{−2s}` times the boundary sum; infinite at `λ = 0`.
    pub value: f64,
    pub value_stderr: f64,
    /// `b − value`.
    pub margin: f64,
    pub passes: bool,
    /// `−ln(b)/L`, the decay rate the criterion would imply.
    pub decay_rate: f64,
}

/// Evaluates the criterion on the box `{−L, …, L}³`; `∂Λ` is the set of sites
/// at graph distance at most 1 from the complement.
pub fn finite_volume_criterion(
    l: usize,
    ctx: &EnergyContext<f64>,
    params: &CriterionParams,
    settings: &DisorderSettings,
) -> Result<CriterionReport> {
    if !(params.s > 0.0 && params.s < 0.25) {
        return Err(invalid(format!("s must lie in (0, 1/4), got {}", params.s)));
    }
    if !(params.b > 0.0 && params.b < 1.0) || !(params.b_s > 0.0) {
        return Err(invalid("need 0 < b < 1 and B_s > 0"));
    }
    if l == 0 {
        return Err(invalid("L must be positive"));
    }
    let geometry = LatticeBox::centered(l)?;
    let origin = geometry.index([0, 0, 0]).unwrap();
    let boundary = geometry.boundary_sites();
    let sym = (params.eta != 0.0 || geometry.sites() <= super::resolvent::DIRECT_SITE_LIMIT)
        .then(|| LdlSymbolic::new(geometry));
    let sum = run_mc_indexed(&settings.mc, 1, |i, out| {
        let v = sample_potential(&geometry, &settings.density, settings.mc.seed, i);
        let h = build_hamiltonian(geometry, &v, ctx.lambda)?;
        let r = Resolvent::with_solver(&h, ctx.energy, params.eta, sym.as_ref(), settings.solver)?;
        let col = r.column(origin)?;
        out[0] = boundary.iter().map(|&n| col.values[n].norm().powf(params.s)).sum();
        Ok(())
    })?[0];
    let factor = params.b_s * (l as f64).powi(4) * ctx.lambda.powf(-2.0 * params.s);
    let value = factor * sum.mean;
    Ok(CriterionReport {
        l,
        side: geometry.side,
        boundary_sites: boundary.len(),
        params: *params,
        lambda: ctx.lambda,
        energy: ctx.energy,
        estar: ctx.estar,
        boundary_sum: sum,
        value,
        value_stderr: factor * sum.stderr,
        margin: params.b - value,
        passes: value < params.b,
        decay_rate: -params.b.ln() / l as f64,
    })
}
