//! The `solve` and `rates` commands as library functions.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use proxkit::diagnostics::{fit_rate, RateFit, RateModel};
use proxkit::nlpdps::{nl_step_admissibility, nlpdps_run};
use proxkit::problems::{nl_grad_bound, nl_safe_start, Composite, ProblemInstance};
use proxkit::splitting::{run_with, Algo, RunOptions, Trace};
use proxkit::{Error, Point64};

use crate::config::RunConfig;
use crate::csvio::{format_float, read_column, write_trace};
use crate::CliError;

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_MAX_ITER: i32 = 2;

/// Direction along which the nonlinear instance's safe start is bisected.
pub const NL_START_DIRECTION: [f64; 4] = [1.0, -1.0, 0.5, 0.5];
pub const NL_START_ITERS: usize = 200;

pub struct SolveReport {
    pub exit_code: i32,
    pub summary: String,
    pub trace: Trace<f64>,
}

/// Runs the configured solver on the configured instance, without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<(ProblemInstance, Trace<f64>), CliError> {
    let algo = cfg.algo()?;
    let solver = cfg.solver_config()?;
    let inst = cfg.problem.build()?;
    let trace = match (&inst.composite, algo) {
        (Composite::Nonlinear(prob), Algo::Nlpdps) => {
            if solver.inertia || solver.overrelax.is_some() || solver.linesearch.is_some() {
                return Err(CliError::config("config field `wrappers`: nlpdps takes no wrappers"));
            }
            let params = cfg.nl_params();
            let adm = nl_step_admissibility(prob, &params, nl_grad_bound())?;
            if !adm.admissible {
                return Err(Error::Inadmissible(format!(
                    "NL-PDPS needs τ < κ/(λ + 3Lρ_y) and τσR_K² ≤ 1 − κ; slacks {} and {}",
                    adm.tau_slack, adm.product_slack
                ))
                .into());
            }
            let dir = Point64::from_f64s(&NL_START_DIRECTION);
            let (x0, y0, _) = nl_safe_start(&inst, &params, &dir, 1.0, NL_START_ITERS)?;
            let (xh, yh) = (inst.reference_x.as_ref(), inst.reference_y.as_ref());
            let reference = xh.zip(yh);
            nlpdps_run(prob, &params, x0, y0, solver.max_iter, solver.tol, reference, false)?.trace
        }
        (Composite::Nonlinear(_), a) => {
            return Err(CliError::config(format!(
                "config field `algo`: `{a}` needs a linear operator; the `{}` instance takes nlpdps",
                cfg.problem.name()
            )))
        }
        (Composite::Convex(_), Algo::Nlpdps) => {
            return Err(CliError::config(format!(
                "config field `algo`: nlpdps needs a nonlinear operator; `{}` is linear",
                cfg.problem.name()
            )))
        }
        (Composite::Convex(prob), a) => {
            let opts = RunOptions { reference: inst.reference(), ..Default::default() };
            run_with(prob, a, &solver, &opts)?
        }
    };
    Ok((inst, trace))
}

/// `solve`: runs, writes the CSV and returns the exit code with a one-line summary.
pub fn solve_config(cfg: &RunConfig) -> Result<SolveReport, CliError> {
    let start = Instant::now();
    let (_, trace) = execute(cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    match &cfg.outputs.csv_path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::config(format!("config field `outputs.csv_path`: {p}: {e}")))?;
            write_trace(BufWriter::new(f), &trace.records, cfg.outputs.log_every)?;
        }
        None => write_trace(std::io::stdout().lock(), &trace.records, cfg.outputs.log_every)?,
    }
    let exit_code = if trace.converged { EXIT_CONVERGED } else { EXIT_MAX_ITER };
    let summary = format!(
        "{} on {}: residual={} iterations={} time={:.3}s status={}",
        trace.algo,
        cfg.problem.name(),
        format_float(trace.final_residual()),
        trace.iterations(),
        elapsed,
        if trace.converged { "converged" } else { "max_iter" }
    );
    Ok(SolveReport { exit_code, summary, trace })
}

pub fn cmd_solve(path: &Path, seed_override: Option<u64>) -> Result<SolveReport, CliError> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = seed_override {
        cfg.override_seed(seed);
    }
    solve_config(&cfg)
}

/// Parses `a:b` with a ≤ b.
pub fn parse_window(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::config(format!("--window: expected a:b with integers a ≤ b, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn describe_fit(fit: &RateFit) -> String {
    let model = match fit.model {
        RateModel::Power { slope } => format!("power slope={slope:.4}"),
        RateModel::Linear { factor } => format!("linear mu={factor:.6}"),
        RateModel::Superlinear => "superlinear".to_string(),
    };
    format!(
        "{model} r2={:.6} window={}:{} excluded_inf={} (power slope={:.4} r2={:.6}; linear mu={:.6} r2={:.6})",
        fit.r2,
        fit.window.0,
        fit.window.1,
        fit.excluded,
        fit.power.slope,
        fit.power.r2,
        fit.linear.slope.exp(),
        fit.linear.r2
    )
}

/// `rates`: fits a CSV column.
pub fn cmd_rates(csv: &Path, column: &str, window: Option<(usize, usize)>) -> Result<RateFit, CliError> {
    let f = File::open(csv).map_err(|e| CliError::config(format!("--csv {}: {e}", csv.display())))?;
    let values = read_column(f, column)?;
    Ok(fit_rate(&values, window)?)
}
