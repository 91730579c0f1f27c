//! Command-line flags. Every flag is optional and overrides the config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lifshitz_core::anderson::SolverKind;

use crate::config::*;

#[derive(Debug, Parser)]
#[command(
    name = "lifshitz",
    version,
    about = "Weak-disorder band-edge experiments for the 3D Anderson model"
)]
pub struct Cli {
    /// TOML configuration file; unknown keys are errors.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: $LIFSHITZ_OUT_DIR, else ./lifshitz-out).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// σ(E), E* and fixed-point residuals across the admissible window.
    Selfenergy(SelfEnergyArgs),
    /// Free Green function tables and asymptotics.
    Green(GreenArgs),
    /// Power-counting census of partition graphs.
    Diagrams(DiagramsArgs),
    /// Monte Carlo value of one momentum graph.
    DiagramValue(DiagramValueArgs),
    /// Decomposition residuals and tadpole comparisons.
    ExpandVerify(ExpandVerifyArgs),
    /// Fractional moments and correlation-length fits.
    Fracmom(FracmomArgs),
    /// Finite-volume criterion margins.
    Criterion(CriterionArgs),
}

macro_rules! set {
    ($p:ident, $a:ident, $($f:ident),*) => {
        $(if let Some(v) = $a.$f.clone() { $p.$f = v; })*
    };
}

#[derive(Debug, Args)]
pub struct SelfEnergyArgs {
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

impl SelfEnergyArgs {
    pub fn apply(&self, p: &mut SelfEnergyParams) {
        let a = self;
        set!(p, a, lambda, epsilon, points);
    }
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long)]
    pub estar: Option<f64>,
    #[arg(long)]
    pub radius: Option<u32>,
    #[arg(long, value_enum)]
    pub method: Option<GreenRoute>,
    #[arg(long)]
    pub fft_grid: Option<usize>,
    /// Comma-separated axis distances for the asymptotics fit.
    #[arg(long, value_delimiter = ',')]
    pub asymptotics: Option<Vec<u32>>,
}

impl GreenArgs {
    pub fn apply(&self, p: &mut GreenParams) {
        let a = self;
        set!(p, a, estar, radius, method, fft_grid, asymptotics);
    }
}

#[derive(Debug, Args)]
pub struct DiagramsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub gate_free: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub pairings_only: Option<bool>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub budget: Option<usize>,
}

impl DiagramsArgs {
    pub fn apply(&self, p: &mut DiagramsParams) {
        let a = self;
        set!(p, a, n, gate_free, pairings_only, epsilon, budget);
    }
}

#[derive(Debug, Args)]
pub struct DiagramValueArgs {
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
}

impl DiagramValueArgs {
    pub fn apply(&self, p: &mut DiagramValueParams) {
        if let Some(v) = &self.partition {
            p.partition = Some(v.clone());
        }
        let a = self;
        set!(p, a, graph, samples);
    }
}

#[derive(Debug, Args)]
pub struct ExpandVerifyArgs {
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "box")]
    pub box_side: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub estar: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Comma-separated orders for the tadpole comparison.
    #[arg(long, value_delimiter = ',')]
    pub tadpole: Option<Vec<usize>>,
    #[arg(long)]
    pub tadpole_samples: Option<usize>,
    #[arg(long)]
    pub tadpole_estar: Option<f64>,
    #[arg(long)]
    pub tadpole_margin: Option<i64>,
}

impl ExpandVerifyArgs {
    pub fn apply(&self, p: &mut ExpandVerifyParams) {
        let a = self;
        set!(
            p,
            a,
            n,
            box_side,
            lambda,
            estar,
            samples,
            eta,
            tadpole,
            tadpole_samples,
            tadpole_estar,
            tadpole_margin
        );
    }
}

#[derive(Debug, Args)]
pub struct FracmomArgs {
    #[arg(long = "box")]
    pub box_side: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub estar: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub distances: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    pub etas: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_parser = parse_solver)]
    pub solver: Option<SolverKind>,
}

impl FracmomArgs {
    pub fn apply(&self, p: &mut FracmomParams) {
        let a = self;
        set!(p, a, box_side, lambda, estar, s, distances, etas, samples, solver);
    }
}

#[derive(Debug, Args)]
pub struct CriterionArgs {
    /// Comma-separated half-widths.
    #[arg(long = "L", value_delimiter = ',')]
    pub l: Option<Vec<usize>>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub estar: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub b_s: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_parser = parse_solver)]
    pub solver: Option<SolverKind>,
}

impl CriterionArgs {
    pub fn apply(&self, p: &mut CriterionCmdParams) {
        let a = self;
        set!(p, a, l, lambda, estar, s, b, b_s, eta, samples, solver);
    }
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    match s {
        "auto" => Ok(SolverKind::Auto),
        "direct" => Ok(SolverKind::Direct),
        "iterative" => Ok(SolverKind::Iterative),
        _ => Err(format!("unknown solver {s:?}; expected auto, direct or iterative")),
    }
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let params = match &self.command {
            Command::Selfenergy(a) => {
                let mut p = file.selfenergy.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::SelfEnergy(p)
            }
            Command::Green(a) => {
                let mut p = file.green.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::Green(p)
            }
            Command::Diagrams(a) => {
                let mut p = file.diagrams.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::Diagrams(p)
            }
            Command::DiagramValue(a) => {
                let mut p = file.diagram_value.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::DiagramValue(p)
            }
            Command::ExpandVerify(a) => {
                let mut p = file.expand_verify.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::ExpandVerify(p)
            }
            Command::Fracmom(a) => {
                let mut p = file.fracmom.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::Fracmom(p)
            }
            Command::Criterion(a) => {
                let mut p = file.criterion.clone().unwrap_or_default();
                a.apply(&mut p);
                CommandParams::Criterion(p)
            }
        };
        let out_dir = self
            .out_dir
            .clone()
            .or(file.out_dir)
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("lifshitz-out"));
        let cfg = RunConfig {
            seed: self.seed.or(file.seed).unwrap_or(1),
            threads: self.threads.or(file.threads).unwrap_or(1),
            out_dir,
            tolerances: file.tolerances.unwrap_or_default(),
            params,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
