//! One function per subcommand; each writes its files into `out`.

use lifshitz_core::anderson::{
    correlation_length_fit, finite_volume_criterion, fractional_moment, sample_potential, CriterionParams, DecayPoint,
    DisorderSettings, LatticeBox, Pair,
};
use lifshitz_core::density::DensitySpec;
use lifshitz_core::diagrams::{
    build_feynman_graph, build_feynman_graph_for, classify_superficial_convergence, enumerate_partitions, IndexSet,
    Partition,
};
use lifshitz_core::expansion::{evaluate_decomposition, generate_terms, mc_moment_al_squared, IdentityContext};
use lifshitz_core::green::fft::FFT_TOLERANCE;
use lifshitz_core::green::{check_asymptotics, green_free_fft, green_table_bessel};
use lifshitz_core::report::{graph_value_row, GRAPH_VALUE_HEADER};
use lifshitz_core::selfenergy::{energy_of_estar, i1_at_zero, solve_self_energy, threshold_e_eps, EnergyContext};
use lifshitz_core::torus::QuadratureSpec;
use lifshitz_core::values::graph_value::{bubble_edges, graph_f_edges};
use lifshitz_core::values::{graph_value, graph_value_lines, McParams};
use lifshitz_core::{Error, Result};
use num_rational::Ratio;
use serde_json::json;

use crate::config::*;
use crate::output::Outputs;

fn mc(cfg: &RunConfig, samples: usize) -> McParams {
    let mut m = McParams::new(samples, cfg.seed);
    m.threads = cfg.threads;
    m
}

fn context(estar: f64, lambda: f64) -> Result<EnergyContext<f64>> {
    EnergyContext::from_estar(estar, lambda, 1.0, &QuadratureSpec::default())
}

fn sci(x: f64) -> String {
    format!("{x:e}")
}

pub fn run(cfg: &RunConfig, out: &mut Outputs) -> Result<serde_json::Value> {
    match &cfg.params {
        CommandParams::SelfEnergy(p) => selfenergy(cfg, p, out),
        CommandParams::Green(p) => green(p, out),
        CommandParams::Diagrams(p) => diagrams(p, out),
        CommandParams::DiagramValue(p) => diagram_value(cfg, p, out),
        CommandParams::ExpandVerify(p) => expand_verify(cfg, p, out),
        CommandParams::Fracmom(p) => fracmom(cfg, p, out),
        CommandParams::Criterion(p) => criterion(cfg, p, out),
    }
}

fn selfenergy(cfg: &RunConfig, p: &SelfEnergyParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let spec = QuadratureSpec::default();
    let e_eps: f64 = threshold_e_eps(p.lambda, p.epsilon, &spec)?;
    let i1_zero: f64 = i1_at_zero(&spec)?;
    let top = p.lambda * p.lambda * i1_zero + p.lambda;
    let mut rows = Vec::new();
    let (mut max_res, mut max_trip) = (0.0f64, 0.0f64);
    for k in 0..p.points {
        let e = e_eps + (top - e_eps) * (k as f64 + 0.5) / p.points as f64;
        let ctx = solve_self_energy(e, p.lambda, p.epsilon, &spec)?;
        let res = ctx.fixed_point_residual(&spec)?;
        let trip = (energy_of_estar(ctx.estar, p.lambda, &spec)? - e).abs();
        max_res = max_res.max(res);
        max_trip = max_trip.max(trip);
        rows.push(vec![sci(e), sci(ctx.estar), sci(ctx.sigma), sci(res), sci(trip)]);
    }
    out.csv(
        "selfenergy.csv",
        &["energy", "estar", "sigma", "fixed_point_residual", "roundtrip_error"],
        &rows,
    )?;
    let summary = json!({
        "lambda": p.lambda,
        "epsilon": p.epsilon,
        "e_eps": e_eps,
        "window_top": top,
        "i1_zero": i1_zero,
        "max_fixed_point_residual": max_res,
        "max_roundtrip_error": max_trip,
        "passes": max_res < cfg.tolerances.fixed_point && max_trip < cfg.tolerances.fixed_point,
    });
    out.json("selfenergy.json", &summary)?;
    Ok(summary)
}

fn green(p: &GreenParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let table = match p.method {
        GreenRoute::Bessel => green_table_bessel(p.radius, p.estar)?,
        GreenRoute::Fft => green_free_fft(p.fft_grid, p.estar, p.radius, FFT_TOLERANCE)?,
    };
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    out.text("green_table.csv", &String::from_utf8_lossy(&buf))?;
    let asymptotics = if p.asymptotics.is_empty() {
        None
    } else {
        Some(check_asymptotics(&p.asymptotics, p.estar)?)
    };
    let summary = json!({
        "estar": p.estar,
        "radius": p.radius,
        "method": p.method,
        "tolerance": table.tolerance,
        "entries": table.len_canonical(),
        "origin": table.value(lifshitz_core::green::LatticeVector::new(0, 0, 0)),
        "asymptotics": asymptotics,
    });
    out.json("green.json", &summary)?;
    Ok(summary)
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidArgument(format!("epsilon must be a fraction like 1/10, got {s:?}"));
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(a, b))
}

fn diagrams(p: &DiagramsParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let eps = parse_ratio(&p.epsilon)?;
    let set = IndexSet::symmetric(p.n);
    let mut entries = Vec::new();
    let mut all = true;
    for part in enumerate_partitions(&set, p.pairings_only, p.gate_free)? {
        let g = build_feynman_graph_for(set, &part)?;
        let r = classify_superficial_convergence(&g, eps, p.budget);
        all &= r.summary.superficially_convergent;
        entries.push(json!({ "partition": r.partition, "summary": r.summary }));
    }
    let summary = json!({
        "n": p.n,
        "gate_free": p.gate_free,
        "pairings_only": p.pairings_only,
        "epsilon": p.epsilon,
        "count": entries.len(),
        "all_superficially_convergent": all,
        "partitions": entries,
    });
    out.json("diagrams.json", &summary)?;
    Ok(json!({ "count": summary["count"], "all_superficially_convergent": all }))
}

fn diagram_value(cfg: &RunConfig, p: &DiagramValueParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let m = mc(cfg, p.samples);
    let (est, n) = match &p.partition {
        Some(s) => {
            let part: Partition = s.parse()?;
            let g = build_feynman_graph(&part)?;
            let n = part.blocks().iter().map(|b| b.len()).sum::<usize>() / 2;
            (graph_value(&g, &m)?, n)
        }
        None if p.graph == "bubble" => (graph_value_lines("bubble", 2, &bubble_edges(), &m)?, 0),
        None => (graph_value_lines("F", 2, &graph_f_edges(), &m)?, 0),
    };
    out.csv(
        "diagram_values.csv",
        &GRAPH_VALUE_HEADER,
        &[graph_value_row(&est, n, cfg.seed)],
    )?;
    Ok(json!({ "graph_id": est.graph_id, "value": est.value, "stderr": est.stderr, "samples": est.samples }))
}

fn expand_verify(cfg: &RunConfig, p: &ExpandVerifyParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let d = generate_terms(p.n)?;
    out.text("expansion_terms.tsv", &d.to_table())?;
    let geometry = LatticeBox::with_side(p.box_side)?;
    let ctx = context(p.estar, p.lambda)?;
    let density = DensitySpec::default();
    let mut identity = Vec::new();
    let mut max_res = 0.0f64;
    for i in 0..p.samples as u64 {
        let v = sample_potential(&geometry, &density, cfg.seed, i);
        let r = evaluate_decomposition(
            geometry,
            &v,
            &IdentityContext::from(&ctx),
            [0, 0, 0],
            [1, 0, 0],
            p.n,
            p.eta,
        )?;
        max_res = max_res.max(r.residual);
        identity.push(r);
    }
    let mut tadpole = Vec::new();
    let mut tadpole_ok = true;
    if !p.tadpole.is_empty() {
        let tctx = context(p.tadpole_estar, p.lambda)?;
        for &l in &p.tadpole {
            let r = mc_moment_al_squared(
                l,
                &tctx,
                [0, 0, 0],
                [1, 0, 0],
                &mc(cfg, p.tadpole_samples),
                p.tadpole_margin,
                &density,
            )?;
            tadpole_ok &= r.deviation_in_stderr < cfg.tolerances.tadpole_stderr;
            tadpole.push(r);
        }
    }
    let summary = json!({
        "N": p.n,
        "terms": d.terms().len(),
        "rendered": d.render(),
        "lambda": p.lambda,
        "estar": ctx.estar,
        "energy": ctx.energy,
        "max_residual": max_res,
        "identity_passes": max_res < cfg.tolerances.identity_residual,
        "identity": identity,
        "tadpole": tadpole,
        "tadpole_passes": tadpole_ok,
    });
    out.json("expand_verify.json", &summary)?;
    Ok(json!({ "max_residual": max_res, "identity_passes": summary["identity_passes"], "tadpole_passes": tadpole_ok }))
}

fn settings(cfg: &RunConfig, samples: usize, solver: lifshitz_core::anderson::SolverKind) -> DisorderSettings {
    DisorderSettings {
        mc: mc(cfg, samples),
        density: DensitySpec::default(),
        solver,
    }
}

fn fracmom(cfg: &RunConfig, p: &FracmomParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let geometry = LatticeBox::with_side(p.box_side)?;
    let ctx = context(p.estar, p.lambda)?;
    let pairs: Vec<Pair> = p.distances.iter().map(|&d| ([d, 0, 0], [0, 0, 0])).collect();
    let f = fractional_moment(
        geometry,
        &ctx,
        p.s,
        &pairs,
        &p.etas,
        &settings(cfg, p.samples, p.solver),
    )?;
    let mut rows = Vec::new();
    for (e, eta) in f.etas.iter().enumerate() {
        for (k, (x, y)) in f.pairs.iter().enumerate() {
            let est = f.estimates[e][k];
            rows.push(vec![
                format!("{x:?}-{y:?}"),
                p.s.to_string(),
                sci(*eta),
                sci(est.mean),
                sci(est.stderr),
                est.samples.to_string(),
            ]);
        }
    }
    out.csv(
        "fracmom.csv",
        &["pair", "s", "eta", "estimate", "stderr", "samples"],
        &rows,
    )?;
    let spreads: Vec<f64> = (0..pairs.len()).map(|k| f.eta_spread(k)).collect();
    let points: Vec<DecayPoint> = p
        .distances
        .iter()
        .zip(&f.estimates[0])
        .map(|(&d, e)| DecayPoint {
            distance: d.unsigned_abs() as f64,
            moment: e.mean,
            stderr: e.stderr,
        })
        .collect();
    let xi = match correlation_length_fit(&points, p.s) {
        Ok(fit) => json!(fit),
        Err(e) => json!({ "skipped": e.to_string() }),
    };
    let max_spread = spreads.iter().cloned().fold(0.0, f64::max);
    let summary = json!({
        "box": p.box_side,
        "lambda": p.lambda,
        "estar": ctx.estar,
        "energy": ctx.energy,
        "s": p.s,
        "eta_spread": spreads,
        "eta_stable": max_spread < cfg.tolerances.eta_spread,
        "xi_fit": xi,
    });
    out.json("fracmom.json", &summary)?;
    Ok(json!({ "max_eta_spread": max_spread, "xi_fit": summary["xi_fit"] }))
}

fn criterion(cfg: &RunConfig, p: &CriterionCmdParams, out: &mut Outputs) -> Result<serde_json::Value> {
    let ctx = context(p.estar, p.lambda)?;
    let params = CriterionParams {
        s: p.s,
        b: p.b,
        b_s: p.b_s,
        eta: p.eta,
    };
    let st = settings(cfg, p.samples, p.solver);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &l in &p.l {
        let r = finite_volume_criterion(l, &ctx, &params, &st)?;
        rows.push(vec![
            l.to_string(),
            r.side.to_string(),
            r.boundary_sites.to_string(),
            sci(r.boundary_sum.mean),
            sci(r.boundary_sum.stderr),
            sci(r.value),
            sci(r.value_stderr),
            sci(r.margin),
            r.passes.to_string(),
            sci(r.decay_rate),
        ]);
        reports.push(r);
    }
    out.csv(
        "criterion.csv",
        &[
            "L",
            "side",
            "boundary_sites",
            "boundary_sum",
            "boundary_sum_stderr",
            "value",
            "value_stderr",
            "margin",
            "passes",
            "decay_rate",
        ],
        &rows,
    )?;
    let monotone = reports.windows(2).all(|w| w[1].margin > w[0].margin);
    let summary = json!({
        "lambda": p.lambda,
        "estar": ctx.estar,
        "energy": ctx.energy,
        "margin_improves_with_L": monotone,
        "reports": reports,
    });
    out.json("criterion.json", &summary)?;
    Ok(json!({ "margins": reports.iter().map(|r| r.margin).collect::<Vec<_>>(), "margin_improves_with_L": monotone }))
}
