//! Experiment configuration: defaults, TOML file, then command-line flags.

use std::path::{Path, PathBuf};

use lifshitz_core::anderson::{SolverKind, DEFAULT_ETA_SCHEDULE};
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LIFSHITZ_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Pass threshold for decomposition residuals.
    pub identity_residual: f64,
    /// Pass threshold, in standard errors, for tadpole comparisons.
    pub tadpole_stderr: f64,
    /// Pass threshold for the relative spread of moments across `η`.
    pub eta_spread: f64,
    /// Pass threshold for self-energy fixed-point residuals.
    pub fixed_point: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity_residual: 1e-9,
            tadpole_stderr: 3.0,
            eta_spread: 0.2,
            fixed_point: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfEnergyParams {
    pub lambda: f64,
    pub epsilon: f64,
    pub points: usize,
}

impl Default for SelfEnergyParams {
    fn default() -> Self {
        SelfEnergyParams {
            lambda: 0.1,
            epsilon: 1.0,
            points: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GreenRoute {
    Bessel,
    Fft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GreenParams {
    pub estar: f64,
    pub radius: u32,
    pub method: GreenRoute,
    pub fft_grid: usize,
    /// Axis distances for the asymptotics fit; empty skips it.
    pub asymptotics: Vec<u32>,
}

impl Default for GreenParams {
    fn default() -> Self {
        GreenParams {
            estar: 0.5,
            radius: 20,
            method: GreenRoute::Bessel,
            fft_grid: 256,
            asymptotics: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagramsParams {
    pub n: usize,
    pub gate_free: bool,
    pub pairings_only: bool,
    /// Rational `ε`, e.g. `"1/10"`.
    pub epsilon: String,
    pub budget: usize,
}

impl Default for DiagramsParams {
    fn default() -> Self {
        DiagramsParams {
            n: 3,
            gate_free: false,
            pairings_only: true,
            epsilon: "1/10".into(),
            budget: lifshitz_core::diagrams::census::DEFAULT_SUBGRAPH_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagramValueParams {
    /// Partition in display form, e.g. `{{1,4},{2,3}}`; overrides `graph`.
    pub partition: Option<String>,
    /// `bubble` or `f`.
    pub graph: String,
    pub samples: usize,
}

impl Default for DiagramValueParams {
    fn default() -> Self {
        DiagramValueParams {
            partition: None,
            graph: "bubble".into(),
            samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpandVerifyParams {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "box")]
    pub box_side: usize,
    pub lambda: f64,
    pub estar: f64,
    /// Number of disorder samples checked.
    pub samples: usize,
    pub eta: f64,
    /// Orders `l` for the tadpole comparison; empty skips it.
    pub tadpole: Vec<usize>,
    pub tadpole_samples: usize,
    pub tadpole_estar: f64,
    pub tadpole_margin: i64,
}

impl Default for ExpandVerifyParams {
    fn default() -> Self {
        ExpandVerifyParams {
            n: 2,
            box_side: 8,
            lambda: 0.5,
            estar: 0.5,
            samples: 1,
            eta: 0.0,
            tadpole: Vec::new(),
            tadpole_samples: 10_000,
            tadpole_estar: 1.0,
            tadpole_margin: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FracmomParams {
    #[serde(rename = "box")]
    pub box_side: usize,
    pub lambda: f64,
    pub estar: f64,
    pub s: f64,
    /// Pairs `(d e₁, 0)`.
    pub distances: Vec<i64>,
    pub etas: Vec<f64>,
    pub samples: usize,
    pub solver: SolverKind,
}

impl Default for FracmomParams {
    fn default() -> Self {
        FracmomParams {
            box_side: 12,
            lambda: 0.5,
            estar: 0.5,
            s: 0.3,
            distances: vec![1, 2, 3, 4],
            etas: DEFAULT_ETA_SCHEDULE.to_vec(),
            samples: 1000,
            solver: SolverKind::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriterionCmdParams {
    /// Half-widths `L`; each box is `{−L, …, L}³`.
    #[serde(rename = "L")]
    pub l: Vec<usize>,
    pub lambda: f64,
    pub estar: f64,
    pub s: f64,
    pub b: f64,
    pub b_s: f64,
    pub eta: f64,
    pub samples: usize,
    pub solver: SolverKind,
}

impl Default for CriterionCmdParams {
    fn default() -> Self {
        CriterionCmdParams {
            l: vec![6],
            lambda: 0.5,
            estar: 0.5,
            s: 0.24,
            b: 0.5,
            b_s: 1.0,
            eta: 0.0,
            samples: 8,
            solver: SolverKind::Auto,
        }
    }
}

/// Contents of a configuration file. Only the section of the invoked command is used.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub tolerances: Option<Tolerances>,
    pub selfenergy: Option<SelfEnergyParams>,
    pub green: Option<GreenParams>,
    pub diagrams: Option<DiagramsParams>,
    #[serde(rename = "diagram-value")]
    pub diagram_value: Option<DiagramValueParams>,
    #[serde(rename = "expand-verify")]
    pub expand_verify: Option<ExpandVerifyParams>,
    pub fracmom: Option<FracmomParams>,
    pub criterion: Option<CriterionCmdParams>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// The parameter block of one command.
#[derive(Debug, Clone, PartialEq)]
pub enum CommandParams {
    SelfEnergy(SelfEnergyParams),
    Green(GreenParams),
    Diagrams(DiagramsParams),
    DiagramValue(DiagramValueParams),
    ExpandVerify(ExpandVerifyParams),
    Fracmom(FracmomParams),
    Criterion(CriterionCmdParams),
}

impl CommandParams {
    pub fn name(&self) -> &'static str {
        match self {
            CommandParams::SelfEnergy(_) => "selfenergy",
            CommandParams::Green(_) => "green",
            CommandParams::Diagrams(_) => "diagrams",
            CommandParams::DiagramValue(_) => "diagram-value",
            CommandParams::ExpandVerify(_) => "expand-verify",
            CommandParams::Fracmom(_) => "fracmom",
            CommandParams::Criterion(_) => "criterion",
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub threads: usize,
    pub out_dir: PathBuf,
    pub tolerances: Tolerances,
    pub params: CommandParams,
}

impl RunConfig {
    /// The configuration file that reproduces this run; the output directory is left out.
    pub fn to_file(&self) -> ConfigFile {
        let mut f = ConfigFile {
            seed: Some(self.seed),
            threads: Some(self.threads),
            out_dir: None,
            tolerances: Some(self.tolerances.clone()),
            ..Default::default()
        };
        match &self.params {
            CommandParams::SelfEnergy(p) => f.selfenergy = Some(p.clone()),
            CommandParams::Green(p) => f.green = Some(p.clone()),
            CommandParams::Diagrams(p) => f.diagrams = Some(p.clone()),
            CommandParams::DiagramValue(p) => f.diagram_value = Some(p.clone()),
            CommandParams::ExpandVerify(p) => f.expand_verify = Some(p.clone()),
            CommandParams::Fracmom(p) => f.fracmom = Some(p.clone()),
            CommandParams::Criterion(p) => f.criterion = Some(p.clone()),
        }
        f
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("configuration serializes to TOML")
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.threads == 0 {
            return Err("threads must be positive".into());
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(format!("{name} must be positive and finite, got {v}"))
            }
        };
        let nonneg = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(format!("{name} must be non-negative and finite, got {v}"))
            }
        };
        match &self.params {
            CommandParams::SelfEnergy(p) => {
                positive("lambda", p.lambda)?;
                positive("epsilon", p.epsilon)?;
                if p.points == 0 {
                    return Err("points must be positive".into());
                }
            }
            CommandParams::Green(p) => positive("estar", p.estar)?,
            CommandParams::Diagrams(p) => {
                if p.n == 0 {
                    return Err("n must be positive".into());
                }
            }
            CommandParams::DiagramValue(p) => {
                if p.partition.is_none() && !matches!(p.graph.as_str(), "bubble" | "f") {
                    return Err(format!("graph must be `bubble` or `f`, got {:?}", p.graph));
                }
            }
            CommandParams::ExpandVerify(p) => {
                nonneg("lambda", p.lambda)?;
                positive("estar", p.estar)?;
                positive("tadpole_estar", p.tadpole_estar)?;
                nonneg("eta", p.eta)?;
                if p.samples == 0 || p.box_side < 4 {
                    return Err("samples must be positive and box at least 4".into());
                }
            }
            CommandParams::Fracmom(p) => {
                nonneg("lambda", p.lambda)?;
                positive("estar", p.estar)?;
                if p.distances.is_empty() || p.etas.is_empty() {
                    return Err("distances and etas must be non-empty".into());
                }
            }
            CommandParams::Criterion(p) => {
                nonneg("lambda", p.lambda)?;
                positive("estar", p.estar)?;
                if p.l.is_empty() {
                    return Err("L must list at least one half-width".into());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ConfigFile>("sed = 3").is_err());
        assert!(toml::from_str::<ConfigFile>("[fracmom]\nlamda = 0.3").is_err());
        let f: ConfigFile = toml::from_str("seed = 3\n[expand-verify]\nN = 3\nbox = 10").unwrap();
        let p = f.expand_verify.unwrap();
        assert_eq!((p.n, p.box_side, p.lambda), (3, 10, 0.5));
    }

    #[test]
    fn resolved_config_round_trips() {
        let c = RunConfig {
            seed: 9,
            threads: 1,
            out_dir: "o".into(),
            tolerances: Tolerances::default(),
            params: CommandParams::Criterion(CriterionCmdParams::default()),
        };
        let back: ConfigFile = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c.to_file());
    }
}
