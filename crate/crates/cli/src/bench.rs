//! The acceptance suite: one check per criterion, each against an independent oracle.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use proxkit::core::{
    estimate_op_norm, grad_check, normal_point, seeded_rng, uniform_point, Adjoint, LeastSquares, LinOp, LinearMap,
    Matrix, Point, Rng64, ScaledIdentity, SmoothFn,
};
use proxkit::diagnostics::{fejer_check, fit_rate, pdps_metric, FejerNorm, RateFit, RateModel};
use proxkit::newton::{approximation_ratios, build_fb_residual, fb_warm_start, ssn_solve, DEFAULT_WARM_START};
use proxkit::nlpdps::{nlpdps_run, NLStepParams, NonlinearSaddleProblem};
use proxkit::problems::{
    lasso_data, make_boxqp, make_lasso, make_lasso_from, make_lasso_duplicated, make_nl_instance, make_split, make_tv1d,
    make_tv1d_huber, nl_params, nl_safe_start, split_center, zoo, ProblemInstance, SPLIT_WEIGHT,
};
use proxkit::prox::{
    moreau_envelope, proj_interval, proj_linf_ball, prox_abs, prox_l1, prox_l2norm, prox_quadratic, BoxIndicator,
    Conjugate, Extended, HuberDual, L2Norm, Outer, ProxFn, SharedProx, SquaredNorm, ZeroFn, L1,
};
use proxkit::splitting::{
    inertia_sequence, precond_admm_step, resolve_steps, run_with, Accel, AdmmProblem, Algo, CompositeProblem,
    GapKind, LineSearch, RunOptions, SolverConfig, SolverState, Trace,
};
use proxkit::{Point64, Result as PkResult};

use crate::commands::{cmd_rates, solve_config, NL_START_DIRECTION, NL_START_ITERS};
use crate::config::{LassoParams, Outputs, ProblemSpec, RunConfig, SolverSection, Wrappers};
use crate::csvio::HEADER;
use crate::CliError;

pub const SUITES: [&str; 1] = ["default"];

pub const LASSO_N: usize = 200;
pub const LASSO_M: usize = 100;
pub const LASSO_ALPHA: f64 = 0.002;
pub const LASSO_SEED: u64 = 0;
pub const RATE_WINDOW: (usize, usize) = (50, 5000);
pub const TV_N: usize = 100;
pub const TV_ALPHA: f64 = 1.0;
pub const TV_SEED: u64 = 0;
pub const HUBER_ALPHA: f64 = 1.0;
pub const HUBER_EPS: f64 = 0.1;
pub const BOXQP_N: usize = 50;
pub const BLOCK_LASSO_N: usize = 50;
pub const SEED: u64 = 0;

/// A deliberately planted defect, to check that the suite notices it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Soft-shrinkage that forgets to zero the dead zone.
    ProxL1,
}

impl FromStr for Mutation {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "none" => Ok(Mutation::None),
            "prox_l1" => Ok(Mutation::ProxL1),
            _ => Err(CliError::config(format!("--mutate: unknown mutation `{s}`, expected none or prox_l1"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} criterion {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [(u8, &str); 18] = [
    (1, "prox closed forms"),
    (2, "Moreau identity"),
    (3, "firm nonexpansivity"),
    (4, "Moreau-Yosida envelope"),
    (5, "forward-backward linear rate"),
    (6, "forward-backward value rate"),
    (7, "inertial forward-backward"),
    (8, "line-search inertial forward-backward"),
    (9, "PDPS ergodic gap rate"),
    (10, "accelerated PDPS"),
    (11, "Fejer monotonicity"),
    (12, "ADMM-PDPS equivalence"),
    (13, "Douglas-Rachford"),
    (14, "semismooth Newton"),
    (15, "NL-PDPS"),
    (16, "local linear rate under subregularity"),
    (17, "gradient checks"),
    (18, "CLI round trip"),
];

/// ℓ¹ prox routed through the (possibly mutated) soft-shrinkage.
#[derive(Clone, Copy)]
struct BenchL1 {
    alpha: f64,
    mutation: Mutation,
}

impl BenchL1 {
    fn shrink(&self, x: &Point64, gamma: f64) -> Point64 {
        match self.mutation {
            Mutation::None => prox_l1(x, gamma),
            Mutation::ProxL1 => x.map(|t| if t.abs() > gamma { t - gamma * t.signum() } else { t }),
        }
    }
}

impl ProxFn<f64> for BenchL1 {
    fn value(&self, x: &Point64) -> Extended<f64> {
        Extended::Finite(self.alpha * x.norm_l1())
    }
    fn prox(&self, gamma: f64, x: &Point64) -> Point64 {
        self.shrink(x, gamma * self.alpha)
    }
    fn conjugate_value(&self, y: &Point64) -> Option<Extended<f64>> {
        Some(Extended::indicator(y.norm_inf() <= self.alpha * (1.0 + 1e-12)))
    }
    fn name(&self) -> String {
        "bench-l1".into()
    }
}

struct Ctx {
    mutation: Mutation,
    lasso: Option<ProblemInstance>,
    fb_slope: Option<f64>,
}

impl Ctx {
    fn l1(&self, alpha: f64) -> BenchL1 {
        BenchL1 { alpha, mutation: self.mutation }
    }

    fn lasso(&mut self) -> PkResult<ProblemInstance> {
        if self.lasso.is_none() {
            self.lasso = Some(make_lasso(LASSO_N, LASSO_M, LASSO_ALPHA, LASSO_SEED)?);
        }
        Ok(self.lasso.clone().expect("built above"))
    }
}

type Outcome = PkResult<(bool, String)>;

pub fn run_suite(name: &str, mutation: Mutation) -> Result<Vec<CriterionResult>, CliError> {
    if !SUITES.contains(&name) {
        return Err(CliError::config(format!("unknown suite `{name}`, expected one of {}", SUITES.join(", "))));
    }
    let mut ctx = Ctx { mutation, lasso: None, fb_slope: None };
    Ok(CRITERIA.iter().map(|&(id, name)| run_one(&mut ctx, id, name)).collect())
}

fn run_one(ctx: &mut Ctx, id: u8, name: &'static str) -> CriterionResult {
    let out = match id {
        1 => c01_closed_forms(ctx),
        2 => c02_moreau_identity(ctx),
        3 => c03_firm_nonexpansive(ctx),
        4 => c04_moreau_yosida(ctx),
        5 => c05_fb_linear(),
        6 => c06_fb_value_rate(ctx),
        7 => c07_inertial(ctx),
        8 => c08_linesearch(ctx),
        9 => c09_pdps_gap(),
        10 => c10_accelerated(),
        11 => c11_fejer(),
        12 => c12_admm_pdps(),
        13 => c13_drs(),
        14 => c14_newton(),
        15 => c15_nlpdps(),
        16 => c16_subregular(),
        17 => c17_grad_checks(),
        18 => c18_round_trip(ctx),
        _ => unreachable!("criterion ids are fixed"),
    };
    let (pass, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, pass, detail }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn gauss(rng: &mut Rng64, n: usize, scale: f64) -> Point64 {
    normal_point::<f64>(rng, n).scale(scale)
}

fn unif(rng: &mut Rng64, lo: f64, hi: f64) -> f64 {
    uniform_point::<f64>(rng, 1, lo, hi)[0]
}

fn c01_closed_forms(ctx: &Ctx) -> Outcome {
    let mut rng = seeded_rng(SEED + 1);
    let mut bad = Vec::new();
    let l1 = ctx.l1(1.0);
    for _ in 0..10_000 {
        let t = 3.0 * normal_point::<f64>(&mut rng, 1)[0];
        let g = unif(&mut rng, 0.01, 3.0);
        if !close(prox_quadratic(t, g), t / (1.0 + g), 1e-14) {
            bad.push("prox_quadratic");
        }
        let soft = t.signum() * (t.abs() - g).max(0.0);
        if !close(prox_abs(t, g), soft, 1e-14) {
            bad.push("prox_abs");
        }
        let (a, w) = (normal_point::<f64>(&mut rng, 1)[0], unif(&mut rng, 0.0, 2.0));
        if !close(proj_interval(t, a, a + w)?, t.max(a).min(a + w), 1e-14) {
            bad.push("proj_interval");
        }
        let x = gauss(&mut rng, 5, 2.0);
        let p = l1.prox(g, &x);
        if (0..5).any(|i| !close(p[i], x[i].signum() * (x[i].abs() - g).max(0.0), 1e-14)) {
            bad.push("prox_l1");
        }
        let q = proj_linf_ball(&x);
        if (0..5).any(|i| !close(q[i], x[i].clamp(-1.0, 1.0), 1e-14)) {
            bad.push("proj_linf_ball");
        }
        let r = prox_l2norm(&x, g);
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let factor = (1.0 - g / nx).max(0.0);
        if (0..5).any(|i| !close(r[i], factor * x[i], 1e-14)) {
            bad.push("prox_l2norm");
        }
    }
    bad.sort_unstable();
    bad.dedup();
    Ok((bad.is_empty(), if bad.is_empty() { "6 maps x 10^4 samples within 1e-14".into() } else { format!("mismatch in {}", bad.join(", ")) }))
}

/// Euclidean projection onto the α-ball, the prox of the conjugate of α‖·‖₂.
struct L2Ball(f64);

impl ProxFn<f64> for L2Ball {
    fn value(&self, x: &Point64) -> Extended<f64> {
        Extended::indicator(x.norm() <= self.0 * (1.0 + 1e-12))
    }
    fn prox(&self, _gamma: f64, x: &Point64) -> Point64 {
        let n = x.norm();
        if n <= self.0 {
            x.clone()
        } else {
            x.scale(self.0 / n)
        }
    }
    fn name(&self) -> String {
        "l2-ball".into()
    }
}

fn c02_moreau_identity(ctx: &Ctx) -> Outcome {
    let pairs: Vec<(&str, Box<dyn ProxFn<f64>>, Box<dyn ProxFn<f64>>)> = vec![
        ("l1/linf-ball", Box::new(ctx.l1(0.7)), Box::new(BoxIndicator::uniform(-0.7, 0.7)?)),
        ("squared-norm", Box::new(SquaredNorm::new(2.5, None)?), Box::new(SquaredNorm::new(0.4, None)?)),
        ("l2-norm/l2-ball", Box::new(L2Norm::new(1.3)?), Box::new(L2Ball(1.3))),
        ("zero/origin", Box::new(ZeroFn), Box::new(BoxIndicator::uniform(0.0, 0.0)?)),
        ("huber-dual/huber", Box::new(HuberDual::new(1.0, 0.2)?), Box::new(Conjugate::new(Arc::new(HuberDual::new(1.0, 0.2)?))?)),
    ];
    let mut rng = seeded_rng(SEED + 2);
    let mut worst: f64 = 0.0;
    let mut worst_name = "";
    for (name, f, fs) in &pairs {
        for _ in 0..200 {
            let x = gauss(&mut rng, 6, 2.0);
            let g = unif(&mut rng, 0.05, 5.0);
            let res = (&(&f.prox(g, &x) + &fs.prox(1.0 / g, &x.scale(1.0 / g)).scale(g)) - &x).norm();
            if res > worst {
                worst = res;
                worst_name = name;
            }
        }
    }
    Ok((worst <= 1e-10, format!("{} pairs x 200 points, worst residual {worst:.2e} ({worst_name})", pairs.len())))
}

fn shipped_proxes(ctx: &Ctx) -> PkResult<Vec<(&'static str, SharedProx<f64>)>> {
    Ok(vec![
        ("zero", Arc::new(ZeroFn)),
        ("squared-norm", Arc::new(SquaredNorm::new(1.5, Some(Point::from_f64s(&[0.3, -0.2, 0.1, 0.0, 1.0, -1.0])))?)),
        ("l1", Arc::new(ctx.l1(0.8))),
        ("box", Arc::new(BoxIndicator::uniform(-0.5, 1.5)?)),
        ("l2-norm", Arc::new(L2Norm::new(0.9)?)),
        ("huber-dual", Arc::new(HuberDual::new(1.0, 0.1)?)),
        ("conjugate-l1", Arc::new(Conjugate::new(Arc::new(ctx.l1(0.8)))?)),
    ])
}

fn c03_firm_nonexpansive(ctx: &Ctx) -> Outcome {
    let mut rng = seeded_rng(SEED + 3);
    let mut worst = f64::INFINITY;
    let mut worst_name = "";
    let proxes = shipped_proxes(ctx)?;
    for (name, f) in &proxes {
        for g in [0.1, 1.0, 10.0] {
            for _ in 0..200 {
                let (x1, x2) = (gauss(&mut rng, 6, 2.0), gauss(&mut rng, 6, 2.0));
                let (p1, p2) = (f.prox(g, &x1), f.prox(g, &x2));
                let dp = &p1 - &p2;
                let slack = dp.dot(&(&x1 - &x2)) - dp.norm_sq();
                if slack < worst {
                    worst = slack;
                    worst_name = name;
                }
            }
        }
    }
    Ok((worst >= -1e-10, format!("{} proxes x 3 steps x 200 pairs, worst slack {worst:.2e} ({worst_name})", proxes.len())))
}

fn c04_moreau_yosida(ctx: &Ctx) -> Outcome {
    let mut rng = seeded_rng(SEED + 4);
    let abs = ctx.l1(1.0);
    let mut env_err: f64 = 0.0;
    for _ in 0..1000 {
        let t = 3.0 * normal_point::<f64>(&mut rng, 1)[0];
        let g = unif(&mut rng, 0.05, 3.0);
        let huber = if t.abs() <= g { t * t / (2.0 * g) } else { t.abs() - g / 2.0 };
        let e = moreau_envelope(&abs, g, &Point::from_f64s(&[t]))?.env_value;
        env_err = env_err.max((e - huber).abs());
    }
    let mut lip_excess = f64::NEG_INFINITY;
    let mut fd_err: f64 = 0.0;
    for (_, f) in shipped_proxes(ctx)? {
        for g in [0.1, 1.0, 10.0] {
            for _ in 0..50 {
                let (x1, x2) = (gauss(&mut rng, 6, 2.0), gauss(&mut rng, 6, 2.0));
                let (e1, e2) = (moreau_envelope(&*f, g, &x1)?, moreau_envelope(&*f, g, &x2)?);
                let q = e1.yosida_grad.dist(&e2.yosida_grad) / x1.dist(&x2);
                lip_excess = lip_excess.max(q - 1.0 / g);
            }
            let x = gauss(&mut rng, 6, 2.0);
            let grad = moreau_envelope(&*f, g, &x)?.yosida_grad;
            let h = 1e-6;
            for i in 0..6 {
                let e = Point::basis(6, i);
                let fp = moreau_envelope(&*f, g, &x.axpy(h, &e))?.env_value;
                let fm = moreau_envelope(&*f, g, &x.axpy(-h, &e))?.env_value;
                let d = (fp - fm) / (2.0 * h);
                fd_err = fd_err.max((grad[i] - d).abs() / d.abs().max(1.0));
            }
        }
    }
    let pass = env_err <= 1e-12 && lip_excess <= 1e-9 && fd_err <= 1e-5;
    Ok((pass, format!("huber error {env_err:.2e}, Lipschitz excess over 1/γ {lip_excess:.2e}, gradient vs differences {fd_err:.2e}")))
}

fn fb_run(prob: &CompositeProblem<f64>, cfg: &SolverConfig<f64>, inst: &ProblemInstance, iterates: bool) -> PkResult<Trace<f64>> {
    let opts = RunOptions { reference: inst.reference(), record_iterates: iterates, ..Default::default() };
    run_with(prob, Algo::Fb, cfg, &opts)
}

fn c05_fb_linear() -> Outcome {
    let inst = make_boxqp(BOXQP_N, SEED)?;
    let prob = inst.convex()?;
    let l = inst.metadata.lipschitz.expect("boxqp has L");
    let gamma = inst.metadata.strong_convexity;
    let tau = 1.0 / l;
    let cfg = SolverConfig { tau0: Some(tau), max_iter: 200, tol: 0.0, ..SolverConfig::default() };
    let trace = fb_run(prob, &cfg, &inst, true)?;
    let xh = inst.reference_x.as_ref().expect("reference");
    let d0 = trace.iterates[0].0.dist(xh).powi(2);
    let q = 1.0 / (1.0 + 2.0 * tau * gamma);
    let mut first_bad = None;
    let mut worst_ratio: f64 = 0.0;
    for (n, (x, _)) in trace.iterates.iter().enumerate() {
        let bound = d0 * q.powi(n as i32) * (1.0 + 1e-6);
        let d = x.dist(xh).powi(2);
        worst_ratio = worst_ratio.max(d / bound);
        if d > bound && first_bad.is_none() {
            first_bad = Some(n);
        }
    }
    Ok(match first_bad {
        None => (true, format!("N ≤ 200, τL = 1, γ = {gamma}, largest ratio to the bound {worst_ratio:.3}")),
        Some(n) => (false, format!("bound violated at N = {n}")),
    })
}

fn rate_detail(fit: &RateFit) -> String {
    let p = format!("power slope {:.3} (r² {:.4})", fit.power.slope, fit.power.r2);
    match fit.model {
        RateModel::Power { .. } => format!("{p}, selected"),
        RateModel::Linear { factor } => format!("{p}; linear μ {factor:.4} (r² {:.4}), selected", fit.linear.r2),
        RateModel::Superlinear => format!("{p}; superlinear selected"),
    }
}

fn value_gaps(trace: &Trace<f64>) -> Vec<(usize, f64)> {
    trace.column(|r| r.gap)
}

fn lasso_fb_trace(inst: &ProblemInstance, inertia: bool) -> PkResult<Trace<f64>> {
    let prob = inst.convex()?;
    let cfg = SolverConfig { inertia, max_iter: RATE_WINDOW.1, tol: 0.0, ..SolverConfig::default() };
    fb_run(prob, &cfg, inst, false)
}

fn c06_fb_value_rate(ctx: &mut Ctx) -> Outcome {
    let inst = ctx.lasso()?;
    let trace = lasso_fb_trace(&inst, false)?;
    if trace.gap_kind != GapKind::Value {
        return Ok((false, "value gap unavailable".into()));
    }
    let fit = fit_rate(&value_gaps(&trace), Some(RATE_WINDOW))?;
    let slope = fit.power.slope;
    ctx.fb_slope = Some(slope);
    Ok(((-1.3..=-0.9).contains(&slope), format!("{} over k ∈ [50, 5000]", rate_detail(&fit))))
}

/// First N ≤ n with λ_N⁻¹ < N + 1, if any.
fn inertia_bound_violation(n: usize) -> Option<(usize, f64)> {
    let lam: Vec<f64> = inertia_sequence(n);
    lam.iter().enumerate().skip(1).find(|&(k, l)| 1.0 / l < (k + 1) as f64).map(|(k, l)| (k, 1.0 / l))
}

fn c07_inertial(ctx: &mut Ctx) -> Outcome {
    let inst = ctx.lasso()?;
    let trace = lasso_fb_trace(&inst, true)?;
    let fit = fit_rate(&value_gaps(&trace), Some(RATE_WINDOW))?;
    let slope_ok = fit.power.slope <= -1.7;
    let bound = inertia_bound_violation(10_000);
    let bound_msg = match bound {
        None => "λ_N⁻¹ ≥ N + 1 for N ≤ 10⁴".to_string(),
        Some((k, inv)) => format!("λ_N⁻¹ ≥ N + 1 fails at N = {k} (λ⁻¹ = {inv:.6})"),
    };
    let verdict = if slope_ok { "rate ok" } else { "rate too slow" };
    Ok((slope_ok && bound.is_none(), format!("power slope {:.3} (r² {:.4}), {verdict}; {bound_msg}", fit.power.slope, fit.power.r2)))
}

fn c08_linesearch(ctx: &mut Ctx) -> Outcome {
    let inst = ctx.lasso()?;
    let prob = inst.convex()?;
    let (a, b) = lasso_data(LASSO_N, LASSO_M, LASSO_SEED);
    let l_true = estimate_op_norm(&a, 1e-12, 1_000_000)?.powi(2);
    let unknown = LeastSquares::new(a, b)?.with_lipschitz(None);
    let blind = CompositeProblem::new(prob.primal_dim(), prob.f0.clone(), prob.g.clone())?.with_smooth(Arc::new(unknown))?;
    if blind.smooth_lipschitz().is_some() {
        return Ok((false, "Lipschitz factor still visible".into()));
    }
    let cfg = SolverConfig {
        inertia: true,
        linesearch: Some(LineSearch::default()),
        max_iter: RATE_WINDOW.1,
        tol: 0.0,
        ..SolverConfig::default()
    };
    let opts = RunOptions { reference: inst.reference(), ..Default::default() };
    let trace = run_with(&blind, Algo::Fb, &cfg, &opts)?;
    let fit = fit_rate(&value_gaps(&trace), Some(RATE_WINDOW))?;
    let min_tau = trace.records.iter().map(|r| r.tau).fold(f64::INFINITY, f64::min);
    let pass = fit.power.slope <= -1.7 && min_tau >= 0.5 / l_true;
    Ok((pass, format!("power slope {:.3} (r² {:.4}); smallest τ·L = {:.3}", fit.power.slope, fit.power.r2, min_tau * l_true)))
}

fn pdps_trace(inst: &ProblemInstance, cfg: &SolverConfig<f64>, iterates: bool) -> PkResult<Trace<f64>> {
    let opts = RunOptions { reference: inst.reference(), record_iterates: iterates, ..Default::default() };
    run_with(inst.convex()?, Algo::Pdps, cfg, &opts)
}

fn c09_pdps_gap() -> Outcome {
    let inst = make_tv1d(TV_N, TV_ALPHA, None, Some(TV_SEED))?;
    let cfg = SolverConfig { max_iter: RATE_WINDOW.1, tol: 0.0, ..SolverConfig::default() };
    let trace = pdps_trace(&inst, &cfg, false)?;
    if trace.gap_kind != GapKind::ErgodicUniform {
        return Ok((false, "ergodic gap unavailable".into()));
    }
    let gaps = trace.column(|r| r.gap);
    let min_gap = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    let fit = fit_rate(&gaps, Some(RATE_WINDOW))?;
    let in_band = (-1.3..=-0.9).contains(&fit.power.slope);
    Ok((in_band && min_gap >= -1e-9, format!("{}; smallest gap {min_gap:.2e}; {} infinite", rate_detail(&fit), trace.infinite_gaps)))
}

fn squared_distances(trace: &Trace<f64>) -> Vec<(usize, f64)> {
    trace.column(|r| r.dist_to_ref.map(|d| d * d))
}

fn c10_accelerated() -> Outcome {
    let tv = make_tv1d(TV_N, TV_ALPHA, None, Some(TV_SEED))?;
    let cfg = SolverConfig { accel: Accel::StrongPrimal { gamma: 1.0 }, max_iter: RATE_WINDOW.1, tol: 0.0, ..SolverConfig::default() };
    let fit1 = fit_rate(&squared_distances(&pdps_trace(&tv, &cfg, false)?), Some(RATE_WINDOW))?;
    let ok1 = fit1.power.slope <= -1.7;

    let hub = make_tv1d_huber(TV_N, HUBER_ALPHA, HUBER_EPS, Some(TV_SEED))?;
    let cfg = SolverConfig {
        accel: Accel::StrongBoth { gamma: 1.0, rho: HUBER_EPS },
        max_iter: 300,
        tol: 0.0,
        ..SolverConfig::default()
    };
    let steps = resolve_steps(hub.convex()?, Algo::Pdps, &cfg)?;
    let theta = (HUBER_EPS * steps.sigma).min(steps.tau);
    let predicted = 1.0 / (1.0 + 2.0 * theta);
    let d2 = squared_distances(&pdps_trace(&hub, &cfg, false)?);
    let fit2 = fit_rate(&d2, Some((10, 300)))?;
    let ok2 = matches!(fit2.model, RateModel::Linear { factor } if factor <= predicted + 0.02);
    Ok((
        ok1 && ok2,
        format!(
            "primal-strong: slope {:.3} (r² {:.4}); both-strong: {} vs 1/(1+2θ) = {predicted:.4}",
            fit1.power.slope,
            fit1.power.r2,
            rate_detail(&fit2)
        ),
    ))
}

fn fejer_runs(seed: u64) -> PkResult<Vec<(String, bool)>> {
    let mut out = Vec::new();
    for inst in zoo(seed)? {
        let prob = inst.convex()?;
        let xh = inst.reference_x.clone().expect("reference");
        let cfg = SolverConfig { max_iter: 300, tol: 0.0, ..SolverConfig::default() };
        if prob.k.is_some() {
            let trace = pdps_trace(&inst, &cfg, true)?;
            let s = &trace.final_state;
            let metric = pdps_metric(prob.k.clone().expect("operator"), s.tau_k, s.sigma_k);
            let stacked: Vec<Point64> = trace.iterates.iter().map(|(x, y)| Point::concat(&[x, y.as_ref().expect("dual")])).collect();
            let uh = Point::concat(&[&xh, inst.reference_y.as_ref().expect("dual reference")]);
            out.push((format!("pdps/{}", inst.metadata.name), fejer_check(&stacked, &uh, FejerNorm::Weighted(&metric))?.holds));
        } else if prob.e.is_some() {
            let trace = fb_run(prob, &cfg, &inst, true)?;
            let xs: Vec<Point64> = trace.iterates.iter().map(|p| p.0.clone()).collect();
            out.push((format!("fb/{}", inst.metadata.name), fejer_check(&xs, &xh, FejerNorm::Euclidean)?.holds));
        } else if let Outer::Primal(g) = &prob.g {
            // Proximal point on each term alone; the minimizers are known in closed form.
            for (label, f, min) in [("f0", prob.f0.clone(), Point::zeros(xh.dim())), ("g", g.clone(), g.prox(1e12, &xh))] {
                let single = CompositeProblem::prox_only(xh.dim(), f)?;
                let cfg = SolverConfig { tau0: Some(0.5), max_iter: 100, tol: 0.0, ..SolverConfig::default() };
                let opts = RunOptions { x0: Some(xh.clone()), record_iterates: true, ..Default::default() };
                let trace = run_with(&single, Algo::Pp, &cfg, &opts)?;
                let xs: Vec<Point64> = trace.iterates.iter().map(|p| p.0.clone()).collect();
                out.push((format!("pp/{}/{label}", inst.metadata.name), fejer_check(&xs, &min, FejerNorm::Euclidean)?.holds));
            }
        }
    }
    Ok(out)
}

fn c11_fejer() -> Outcome {
    let runs = fejer_runs(SEED)?;
    let failed: Vec<&str> = runs.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    Ok((failed.is_empty(), if failed.is_empty() { format!("{} runs monotone", runs.len()) } else { format!("violated on {}", failed.join(", ")) }))
}

fn c12_admm_pdps() -> Outcome {
    let (m, n) = (15, 25);
    let mut rng = seeded_rng(SEED + 12);
    let v = gauss(&mut rng, m * n, 1.0 / (m as f64).sqrt());
    let a = Matrix::from_fn(m, n, |i, j| v[i * n + j]);
    let center = gauss(&mut rng, m, 1.0);
    let f: SharedProx<f64> = Arc::new(L1::new(0.2)?);
    let g: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(center))?);
    let a_op: Arc<Matrix<f64>> = Arc::new(a);
    let admm = AdmmProblem::new(f.clone(), g.clone(), a_op.clone(), Arc::new(ScaledIdentity::identity(m)), Point::zeros(m))?;
    let tau = 0.8;
    let na = estimate_op_norm(&*a_op, 1e-12, 100_000)?;
    let sigma = 0.9 / (tau * na * na);
    let theta = 1.0 / tau;
    let mut s = SolverState::new(Point::zeros(n), tau).with_shadow(Point::zeros(m)).with_dual(Point::zeros(m), sigma);
    let mut xs = Vec::new();
    let mut lams = vec![s.y.clone().expect("multiplier")];
    for _ in 0..=200 {
        s = precond_admm_step(&s, &admm, sigma, theta, tau)?;
        xs.push(s.x.clone());
        lams.push(s.y.clone().expect("multiplier"));
    }
    let dual = CompositeProblem::new(m, Arc::new(Conjugate::new(g)?), Outer::Conjugate(f))?.with_operator(Arc::new(Adjoint { inner: a_op }))?;
    let cfg = SolverConfig { tau0: Some(tau), sigma0: Some(sigma), max_iter: 200, tol: 0.0, ..SolverConfig::default() };
    let opts = RunOptions { x0: Some(lams[0].scale(-1.0)), y0: Some(xs[0].clone()), record_iterates: true, ..Default::default() };
    let trace = run_with(&dual, Algo::Pdps, &cfg, &opts)?;
    let mut worst: f64 = 0.0;
    for (k, (p, d)) in trace.iterates.iter().enumerate() {
        worst = worst.max(p.dist(&lams[k].scale(-1.0))).max(d.as_ref().expect("dual").dist(&xs[k]));
    }
    Ok((worst <= 1e-8, format!("200 iterations, largest deviation under (p, d) = (−λᵏ, x^(k+1)): {worst:.2e}")))
}

fn c13_drs() -> Outcome {
    let inst = make_split(40, SEED)?;
    let prob = inst.convex()?;
    let cfg = SolverConfig { tau0: Some(1.0), max_iter: 10_000, tol: 1e-12, ..SolverConfig::default() };
    let trace = run_with(prob, Algo::Drs, &cfg, &RunOptions::default())?;
    let s = &trace.final_state;
    let gap = s.x.dist(s.y.as_ref().expect("drs keeps y"));
    // G is smooth here: the forward-backward residual of F₀ + G at the limit.
    let (w, z) = (SPLIT_WEIGHT, split_center(inst.metadata.n, SEED));
    let tau = 1.0 / w;
    let forward = s.x.axpy(-tau * w, &(&s.x - &z));
    let fb_res = s.x.dist(&prob.f0.prox(tau, &forward));
    let pass = trace.converged && gap <= 1e-8 && fb_res <= 1e-8;
    Ok((pass, format!("{} iterations, ‖x − y‖ = {gap:.2e}, forward-backward residual {fb_res:.2e}", trace.iterations())))
}

fn ssn_check(label: &str, inst: &ProblemInstance) -> PkResult<(bool, String)> {
    let prob = inst.convex()?;
    let tau = 1.0 / inst.metadata.lipschitz.expect("L");
    let nd = build_fb_residual(prob, tau)?;
    let xh = inst.reference_x.as_ref().expect("reference");
    let e = prob.e.as_ref().expect("smooth part");
    let start = fb_warm_start(&*prob.f0, e.as_ref(), tau, &Point::zeros(xh.dim()), DEFAULT_WARM_START);
    let rep = ssn_solve(&nd, &start, 1e-12, 30, Some(xh))?;
    let res = *rep.residual_norms.last().expect("at least one residual");
    let r = &rep.ratios;
    let t = &r[r.len().saturating_sub(3)..];
    let tail_ok = !t.is_empty() && t.windows(2).all(|w| w[0] > w[1]) && t[t.len() - 1] < 0.1;
    let mut rng = seeded_rng(SEED + 14);
    let dir = gauss(&mut rng, xh.dim(), 1.0);
    let hs = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let q = approximation_ratios(&nd, &start, &dir, &hs);
    let q_ok = q.windows(2).all(|w| w[1] <= w[0] + 1e-9) && q[q.len() - 1] < 1e-3;
    let pass = rep.converged && res <= 1e-12 && rep.iterations() <= 30 && tail_ok && q_ok;
    let ratios: Vec<String> = r.iter().map(|v| format!("{v:.1e}")).collect();
    let qs: Vec<String> = q.iter().map(|v| format!("{v:.1e}")).collect();
    Ok((
        pass,
        format!("{label}: {} steps, residual {res:.1e}, error ratios [{}], derivative ratios [{}]", rep.iterations(), ratios.join(" "), qs.join(" ")),
    ))
}

fn c14_newton() -> Outcome {
    let a = ssn_check("boxqp", &make_boxqp(BOXQP_N, SEED)?)?;
    let mut rng = seeded_rng(SEED + 140);
    let d = uniform_point(&mut rng, BLOCK_LASSO_N, 0.5, 2.0);
    let b = normal_point(&mut rng, BLOCK_LASSO_N);
    let b = ssn_check("1-D-block lasso", &make_lasso_from(Matrix::diag(&d), b, 0.5)?)?;
    Ok((a.0 && b.0, format!("{}; {}", a.1, b.1)))
}

fn c15_nlpdps() -> Outcome {
    let inst = make_nl_instance()?;
    let params = nl_params();
    let dir = Point::from_f64s(&NL_START_DIRECTION);
    let (x0, y0, radius) = nl_safe_start(&inst, &params, &dir, 1.0, NL_START_ITERS)?;
    let (xh, yh) = (inst.reference_x.as_ref().expect("x̂"), inst.reference_y.as_ref().expect("ŷ"));
    let run = nlpdps_run(inst.nonlinear()?, &params, x0, y0, 200, 0.0, Some((xh, yh)), false)?;
    let dist = run.trace.column(|r| r.dist_to_ref);
    let fit = fit_rate(&dist, Some((1, 200)))?;
    let lin_ok = matches!(fit.model, RateModel::Linear { factor } if factor < 1.0) && fit.r2 >= 0.95;

    let mut rng = seeded_rng(SEED + 15);
    let v = gauss(&mut rng, 5 * 7, 1.0 / 5f64.sqrt());
    let k: Arc<dyn LinOp<f64>> = Arc::new(Matrix::from_fn(5, 7, |i, j| v[i * 7 + j]));
    let z = gauss(&mut rng, 7, 1.0);
    let f0: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(z))?);
    let g: SharedProx<f64> = Arc::new(L1::new(0.2)?);
    let nl = NonlinearSaddleProblem::new(f0.clone(), Outer::Primal(g.clone()), Arc::new(LinearMap { op: k.clone() }))?;
    let lin = CompositeProblem::new(7, f0, Outer::Primal(g))?.with_operator(k)?;
    let p = NLStepParams { tau: 0.3, sigma: 0.3, rho_y: 1.0, kappa: 0.5 };
    let x0 = gauss(&mut rng, 7, 1.0);
    let a = nlpdps_run(&nl, &p, x0.clone(), Point::zeros(5), 100, 0.0, None, true)?;
    let cfg = SolverConfig { tau0: Some(0.3), sigma0: Some(0.3), max_iter: 100, tol: 0.0, ..SolverConfig::default() };
    let opts = RunOptions { x0: Some(x0), y0: Some(Point::zeros(5)), record_iterates: true, ..Default::default() };
    let b = run_with(&lin, Algo::Pdps, &cfg, &opts)?;
    let mut dev: f64 = 0.0;
    for ((x1, y1), (x2, y2)) in a.trace.iterates.iter().zip(&b.iterates) {
        dev = dev.max(x1.dist(x2)).max(y1.as_ref().expect("y").dist(y2.as_ref().expect("y")));
    }
    Ok((
        lin_ok && dev <= 1e-14 && run.excursions.is_empty(),
        format!("safe radius {radius:.3}; {}; affine K deviation from PDPS {dev:.1e}", rate_detail(&fit)),
    ))
}

fn c16_subregular() -> Outcome {
    let inst = make_lasso_duplicated(20, 40, 0.05, SEED)?;
    let prob = inst.convex()?;
    let face = inst.face.as_ref().expect("solution face");
    let cfg = SolverConfig { max_iter: 20_000, tol: 0.0, ..SolverConfig::default() };
    let trace = fb_run(prob, &cfg, &inst, true)?;
    // The face is known to reference accuracy; distances below that carry no information.
    let dist: Vec<(usize, f64)> = trace
        .iterates
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, (x, _))| (k, face.distance(x)))
        .take_while(|&(_, d)| d > 1e-10)
        .collect();
    let fit = fit_rate(&dist, None)?;
    let pass = matches!(fit.model, RateModel::Linear { factor } if factor < 1.0);
    let rank_note = "rank-deficient A = [B B]";
    Ok((pass, format!("{rank_note}; {} over k ∈ [{}, {}]", rate_detail(&fit), fit.window.0, fit.window.1)))
}

fn c17_grad_checks() -> Outcome {
    let mut rng = seeded_rng(SEED + 17);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut smooth: Vec<Arc<dyn SmoothFn<f64>>> = Vec::new();
    for inst in zoo(SEED)? {
        if let Some(e) = &inst.convex()?.e {
            smooth.push(e.clone());
        }
    }
    for e in &smooth {
        for _ in 0..5 {
            let x = gauss(&mut rng, e.dim(), 1.0);
            worst = worst.max(grad_check(e.as_ref(), &x, 1e-6)?);
            count += 1;
        }
    }
    Ok((worst < 1e-6, format!("{} smooth parts, {count} points, worst relative error {worst:.1e}", smooth.len())))
}

fn c18_round_trip(ctx: &mut Ctx) -> Outcome {
    let Some(slope) = ctx.fb_slope else {
        return Ok((false, "needs the in-process slope of the forward-backward value rate".into()));
    };
    let dir = std::env::temp_dir().join(format!("proxkit-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| proxkit::Error::Config(e.to_string()))?;
    let csv = dir.join("fb.csv");
    let cfg = RunConfig {
        problem: ProblemSpec::Lasso(LassoParams { n: LASSO_N, m: LASSO_M, alpha: LASSO_ALPHA, seed: LASSO_SEED }),
        algo: "fb".into(),
        wrappers: Wrappers::default(),
        solver: SolverSection { max_iter: RATE_WINDOW.1, tol: 0.0, ..SolverSection::default() },
        outputs: Outputs { csv_path: Some(csv.to_string_lossy().into_owned()), log_every: 1 },
    };
    let text = serde_json::to_string(&cfg).map_err(|e| proxkit::Error::Config(e.to_string()))?;
    let cfg = RunConfig::from_json(&text).map_err(|e| proxkit::Error::Config(e.message))?;
    let outcome = (|| -> Result<(bool, String), CliError> {
        let report = solve_config(&cfg)?;
        let header = std::fs::read_to_string(&csv).map_err(|e| CliError::config(e.to_string()))?;
        let header_ok = header.lines().next() == Some(HEADER.join(",").as_str());
        let fit = cmd_rates(&csv, "gap", Some(RATE_WINDOW))?;
        let cli_slope = fit.power.slope;
        let pass = header_ok && (cli_slope - slope).abs() <= 0.02 && report.exit_code == 2;
        Ok((pass, format!("CLI slope {cli_slope:.4} vs in-process {slope:.4}; header {}", if header_ok { "exact" } else { "wrong" })))
    })();
    let _ = std::fs::remove_dir_all(&dir);
    outcome.map_err(|e| proxkit::Error::Config(e.message))
}
