//! Disorder averages of fractional powers of resolvent entries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::geometry::LatticeBox;
use super::hamiltonian::{build_hamiltonian, BoxHamiltonian};
use super::ldl::LdlSymbolic;
use super::potential::sample_potential;
use super::resolvent::{Resolvent, SolverKind};
use crate::density::DensitySpec;
use crate::error::{invalid, Result};
use crate::selfenergy::EnergyContext;
use crate::values::{run_mc_indexed, McEstimate, McParams};

/// Default imaginary parts replacing the `+i0` boundary value.
pub const DEFAULT_ETA_SCHEDULE: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Sampling and solver settings shared by the disorder averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSettings {
    pub mc: McParams,
    #[serde(default)]
    pub density: DensitySpec,
    #[serde(default)]
    pub solver: SolverKind,
}

impl DisorderSettings {
    pub fn new(samples: usize, seed: u64) -> Self {
        DisorderSettings {
            mc: McParams::new(samples, seed),
            density: DensitySpec::default(),
            solver: SolverKind::Auto,
        }
    }
}

pub type Pair = ([i64; 3], [i64; 3]);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalMomentEstimate {
    pub s: f64,
    pub pairs: Vec<Pair>,
    pub etas: Vec<f64>,
    /// `estimates[e][p]` is `𝔼|R(x_p, y_p)|^s` at `etas[e]`.
    pub estimates: Vec<Vec<McEstimate>>,
    pub samples: usize,
}

impl FractionalMomentEstimate {
    /// `max/min − 1` of the estimates for one pair across the `η` schedule.
    pub fn eta_spread(&self, pair: usize) -> f64 {
        let v: Vec<f64> = self.estimates.iter().map(|e| e[pair].mean).collect();
        let hi = v.iter().cloned().fold(f64::MIN, f64::max);
        let lo = v.iter().cloned().fold(f64::MAX, f64::min);
        hi / lo - 1.0
    }
}

fn check_s(s: f64, limit: f64) -> Result<()> {
    if !(s > 0.0 && s < limit) {
        return Err(invalid(format!("s must lie in (0, {limit}), got {s}")));
    }
    Ok(())
}

struct PairIndex {
    /// `(x, y)` as site indices.
    sites: Vec<(usize, usize)>,
    /// Distinct `y` and the column slot of each pair.
    columns: Vec<usize>,
    slot: Vec<usize>,
}

fn index_pairs(geometry: &LatticeBox, pairs: &[Pair]) -> Result<PairIndex> {
    if pairs.is_empty() {
        return Err(invalid("no pairs given"));
    }
    let mut sites = Vec::with_capacity(pairs.len());
    let mut slots = BTreeMap::new();
    let mut columns = Vec::new();
    let mut slot = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        let xi = geometry
            .index(x)
            .ok_or_else(|| invalid(format!("{x:?} outside the box")))?;
        let yi = geometry
            .index(y)
            .ok_or_else(|| invalid(format!("{y:?} outside the box")))?;
        sites.push((xi, yi));
        let k = *slots.entry(yi).or_insert_with(|| {
            columns.push(yi);
            columns.len() - 1
        });
        slot.push(k);
    }
    Ok(PairIndex { sites, columns, slot })
}

fn disorder_hamiltonian(
    geometry: LatticeBox,
    ctx: &EnergyContext<f64>,
    settings: &DisorderSettings,
    index: u64,
) -> Result<BoxHamiltonian> {
    let v = sample_potential(&geometry, &settings.density, settings.mc.seed, index);
    build_hamiltonian(geometry, &v, ctx.lambda)
}

/// `𝔼|R(x,y)|^s` at `R = (H + E + iη)^{-1}` for every `η` of the schedule.
///
/// All `η` share the same disorder samples.
pub fn fractional_moment(
    geometry: LatticeBox,
    ctx: &EnergyContext<f64>,
    s: f64,
    pairs: &[Pair],
    etas: &[f64],
    settings: &DisorderSettings,
) -> Result<FractionalMomentEstimate> {
    check_s(s, 1.0)?;
    if etas.is_empty() || etas.iter().any(|e| !(*e >= 0.0)) {
        return Err(invalid("eta schedule must be non-empty and non-negative"));
    }
    let idx = index_pairs(&geometry, pairs)?;
    let sym = LdlSymbolic::new(geometry);
    let np = pairs.len();
    let flat = run_mc_indexed(&settings.mc, etas.len() * np, |i, out| {
        let h = disorder_hamiltonian(geometry, ctx, settings, i)?;
        for (e, &eta) in etas.iter().enumerate() {
            let r = Resolvent::with_solver(&h, ctx.energy, eta, Some(&sym), settings.solver)?;
            let cols = idx.columns.iter().map(|&y| r.column(y)).collect::<Result<Vec<_>>>()?;
            for p in 0..np {
                out[e * np + p] = cols[idx.slot[p]].values[idx.sites[p].0].norm().powf(s);
            }
        }
        Ok(())
    })?;
    Ok(FractionalMomentEstimate {
        s,
        pairs: pairs.to_vec(),
        etas: etas.to_vec(),
        estimates: flat.chunks(np).map(|c| c.to_vec()).collect(),
        samples: settings.mc.samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDifference {
    pub x: [i64; 3],
    pub y: [i64; 3],
    pub distance: f64,
    pub estimate: McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentDifference {
    pub s: f64,
    pub lambda: f64,
    pub estar: f64,
    pub eta: f64,
    pub pairs: Vec<PairDifference>,
    /// Pairs with `|x−y| ≥ (E*)^{-1/2}`, left out.
    pub excluded: Vec<Pair>,
    /// `max_p 𝔼|R − R_r|^s (|x−y|+1)^{s/2} / λ^s`; zero when every estimate vanishes.
    pub c1: f64,
}

fn distance(x: [i64; 3], y: [i64; 3]) -> f64 {
    ((0..3).map(|a| ((x[a] - y[a]) as f64).powi(2)).sum::<f64>()).sqrt()
}

/// `𝔼|R(x,y) − R_r(x,y)|^s` with `R_r = (H₀ + E* + iη)^{-1}` on the same box.
pub fn moment_difference(
    geometry: LatticeBox,
    ctx: &EnergyContext<f64>,
    s: f64,
    pairs: &[Pair],
    eta: f64,
    settings: &DisorderSettings,
) -> Result<MomentDifference> {
    check_s(s, 0.5)?;
    let window = ctx.estar.powf(-0.5);
    let (kept, excluded): (Vec<Pair>, Vec<Pair>) = pairs.iter().partition(|(x, y)| distance(*x, *y) < window);
    if kept.is_empty() {
        return Err(invalid(format!("no pair with |x−y| < {window:.3}")));
    }
    let idx = index_pairs(&geometry, &kept)?;
    let sym = LdlSymbolic::new(geometry);
    let free = BoxHamiltonian::free(geometry);
    let rr = Resolvent::with_solver(&free, ctx.estar, eta, Some(&sym), settings.solver)?;
    let free_cols = idx.columns.iter().map(|&y| rr.column(y)).collect::<Result<Vec<_>>>()?;
    let np = kept.len();
    let est = run_mc_indexed(&settings.mc, np, |i, out| {
        let h = disorder_hamiltonian(geometry, ctx, settings, i)?;
        let r = Resolvent::with_solver(&h, ctx.energy, eta, Some(&sym), settings.solver)?;
        let cols = idx.columns.iter().map(|&y| r.column(y)).collect::<Result<Vec<_>>>()?;
        for p in 0..np {
            let (xi, _) = idx.sites[p];
            let k = idx.slot[p];
            out[p] = (cols[k].values[xi] - free_cols[k].values[xi]).norm().powf(s);
        }
        Ok(())
    })?;
    let pairs: Vec<PairDifference> = kept
        .iter()
        .zip(est)
        .map(|(&(x, y), estimate)| PairDifference {
            x,
            y,
            distance: distance(x, y),
            estimate,
        })
        .collect();
    let c1 = pairs
        .iter()
        .filter(|p| p.estimate.mean > 0.0)
        .map(|p| p.estimate.mean * (p.distance + 1.0).powf(s / 2.0) / ctx.lambda.powf(s))
        .fold(0.0, f64::max);
    Ok(MomentDifference {
        s,
        lambda: ctx.lambda,
        estar: ctx.estar,
        eta,
        pairs,
        excluded,
        c1,
    })
}
