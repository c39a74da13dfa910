//! JSON run configuration. Unknown keys are rejected everywhere.

use std::path::Path;

use proxkit::nlpdps::NLStepParams;
use proxkit::problems::{
    make_boxqp, make_lasso, make_lasso_duplicated, make_nl_instance, make_split, make_tv1d, make_tv1d_huber,
    nl_params, ProblemInstance,
};
use proxkit::splitting::{Accel, Algo, LambdaSchedule, LineSearch, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub algo: String,
    #[serde(default)]
    pub wrappers: Wrappers,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "name", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Lasso(LassoParams),
    LassoDuplicated(LassoDuplicatedParams),
    Tv1d(Tv1dParams),
    Tv1dHuber(Tv1dHuberParams),
    Boxqp(SizeSeed),
    Split(SizeSeed),
    Nl(NlParams),
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct LassoParams {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for LassoParams {
    fn default() -> Self {
        Self { n: 200, m: 100, alpha: 0.002, seed: 0 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct LassoDuplicatedParams {
    pub p: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for LassoDuplicatedParams {
    fn default() -> Self {
        Self { p: 20, m: 40, alpha: 0.05, seed: 0 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Tv1dParams {
    pub n: usize,
    pub alpha: f64,
    pub signal: Option<Vec<f64>>,
    /// Noise seed; `null` gives the clean signal.
    pub seed: Option<u64>,
}

impl Default for Tv1dParams {
    fn default() -> Self {
        Self { n: 100, alpha: 0.5, signal: None, seed: Some(0) }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Tv1dHuberParams {
    pub n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub seed: Option<u64>,
}

impl Default for Tv1dHuberParams {
    fn default() -> Self {
        Self { n: 100, alpha: 1.0, eps: 0.1, seed: Some(0) }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SizeSeed {
    pub n: usize,
    pub seed: u64,
}

impl Default for SizeSeed {
    fn default() -> Self {
        Self { n: 50, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct NlParams {}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::Lasso(_) => "lasso",
            ProblemSpec::LassoDuplicated(_) => "lasso_duplicated",
            ProblemSpec::Tv1d(_) => "tv1d",
            ProblemSpec::Tv1dHuber(_) => "tv1d_huber",
            ProblemSpec::Boxqp(_) => "boxqp",
            ProblemSpec::Split(_) => "split",
            ProblemSpec::Nl(_) => "nl",
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ProblemSpec::Lasso(p) => p.seed = seed,
            ProblemSpec::LassoDuplicated(p) => p.seed = seed,
            ProblemSpec::Tv1d(p) => p.seed = Some(seed),
            ProblemSpec::Tv1dHuber(p) => p.seed = Some(seed),
            ProblemSpec::Boxqp(p) | ProblemSpec::Split(p) => p.seed = seed,
            ProblemSpec::Nl(_) => {}
        }
    }

    pub fn build(&self) -> proxkit::Result<ProblemInstance> {
        match self {
            ProblemSpec::Lasso(p) => make_lasso(p.n, p.m, p.alpha, p.seed),
            ProblemSpec::LassoDuplicated(p) => make_lasso_duplicated(p.p, p.m, p.alpha, p.seed),
            ProblemSpec::Tv1d(p) => make_tv1d(p.n, p.alpha, p.signal.as_deref(), p.seed),
            ProblemSpec::Tv1dHuber(p) => make_tv1d_huber(p.n, p.alpha, p.eps, p.seed),
            ProblemSpec::Boxqp(p) => make_boxqp(p.n, p.seed),
            ProblemSpec::Split(p) => make_split(p.n, p.seed),
            ProblemSpec::Nl(_) => make_nl_instance(),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Wrappers {
    pub overrelax: Option<Overrelax>,
    pub inertia: bool,
    pub linesearch: Option<LineSearchCfg>,
}

/// Neither field: λ = max(lower bound, 1).
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Overrelax {
    pub lambda: Option<f64>,
    pub schedule: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct LineSearchCfg {
    pub theta: f64,
    pub tau_init: f64,
}

impl Default for LineSearchCfg {
    fn default() -> Self {
        Self { theta: 0.5, tau_init: 1.0 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum AccelCfg {
    StrongPrimal { gamma: f64 },
    StrongBoth { gamma: f64, rho: f64 },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub tau0: Option<f64>,
    pub sigma0: Option<f64>,
    pub theta0: Option<f64>,
    pub accel: Option<AccelCfg>,
    pub gap_mode: bool,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    /// Dual neighbourhood radius for nlpdps.
    pub rho_y: Option<f64>,
    pub kappa: Option<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            tau0: None,
            sigma0: None,
            theta0: None,
            accel: None,
            gap_mode: false,
            max_iter: 1000,
            tol: 1e-8,
            seed: 0,
            rho_y: None,
            kappa: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// CSV destination; standard output when absent.
    pub csv_path: Option<String>,
    pub log_every: usize,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { csv_path: None, log_every: 1 }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(format!("config field `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies a seed override to both the instance and the solver.
    pub fn override_seed(&mut self, seed: u64) {
        self.problem.set_seed(seed);
        self.solver.seed = seed;
    }

    pub fn algo(&self) -> Result<Algo, CliError> {
        self.algo.parse().map_err(|_| {
            let names: Vec<&str> = Algo::ALL.iter().map(|a| a.name()).collect();
            CliError::config(format!("config field `algo`: unknown algorithm `{}`, expected one of {}", self.algo, names.join(", ")))
        })
    }

    pub fn solver_config(&self) -> Result<SolverConfig<f64>, CliError> {
        let s = &self.solver;
        let w = &self.wrappers;
        if w.inertia && w.overrelax.is_some() {
            return Err(CliError::config("config field `wrappers`: inertia and overrelax are mutually exclusive"));
        }
        if s.max_iter == 0 {
            return Err(CliError::config("config field `solver.max_iter`: must be at least 1"));
        }
        if self.outputs.log_every == 0 {
            return Err(CliError::config("config field `outputs.log_every`: must be at least 1"));
        }
        let overrelax = match &w.overrelax {
            None => None,
            Some(Overrelax { lambda: Some(_), schedule: Some(_) }) => {
                return Err(CliError::config(
                    "config field `wrappers.overrelax`: give either `lambda` or `schedule`, not both",
                ))
            }
            Some(Overrelax { lambda: Some(l), .. }) => Some(LambdaSchedule::Constant(*l)),
            Some(Overrelax { schedule: Some(v), .. }) => Some(LambdaSchedule::Explicit(v.clone())),
            Some(_) => Some(LambdaSchedule::Auto),
        };
        let accel = match s.accel {
            None => Accel::None,
            Some(AccelCfg::StrongPrimal { gamma }) => Accel::StrongPrimal { gamma },
            Some(AccelCfg::StrongBoth { gamma, rho }) => Accel::StrongBoth { gamma, rho },
        };
        Ok(SolverConfig {
            tau0: s.tau0,
            sigma0: s.sigma0,
            theta0: s.theta0,
            accel,
            gap_mode: s.gap_mode,
            overrelax,
            inertia: w.inertia,
            linesearch: w.linesearch.as_ref().map(|l| LineSearch { theta: l.theta, tau_init: l.tau_init }),
            max_iter: s.max_iter,
            tol: s.tol,
            seed: s.seed,
        })
    }

    /// Step parameters for nlpdps; unset fields take the instance defaults.
    pub fn nl_params(&self) -> NLStepParams<f64> {
        let d = nl_params();
        let tau = self.solver.tau0.unwrap_or(d.tau);
        NLStepParams {
            tau,
            sigma: self.solver.sigma0.unwrap_or(tau * d.sigma / d.tau),
            rho_y: self.solver.rho_y.unwrap_or(d.rho_y),
            kappa: self.solver.kappa.unwrap_or(d.kappa),
        }
    }
}
