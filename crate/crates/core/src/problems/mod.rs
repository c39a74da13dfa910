//! Benchmark instances with closed-form ingredients and high-accuracy reference solutions.

use std::sync::Arc;

use rand::seq::index::sample;

use crate::core::{
    normal_point, seeded_rng, CoordinateSquare, ForwardDiff, LeastSquares, Lu, Matrix, NonlinearOp, Point,
    Quadratic, SmoothFn,
};
use crate::error::{invalid, Error, Result};
use crate::newton::{build_fb_residual, build_saddle_residual, ssn_solve, NewtonDifferentiable};
use crate::nlpdps::{NLStepParams, NonlinearSaddleProblem, nlpdps_run};
use crate::prox::{BoxIndicator, HuberDual, Outer, ProxFn, SharedProx, SquaredNorm, ZeroFn, L1};
use crate::splitting::{run_with, Algo, CompositeProblem, Reference, RunOptions, SolverConfig};
use crate::{Matrix64, Point64};

pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const REFERENCE_TOL: f64 = 1e-10;
const CHUNK: usize = 500;
const POLISH_TOL: f64 = 1e-13;
const POLISH_MAX_ITER: usize = 50;

#[derive(Clone)]
pub enum Composite {
    Convex(CompositeProblem<f64>),
    Nonlinear(NonlinearSaddleProblem<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub name: String,
    pub n: usize,
    pub seed: Option<u64>,
    /// Lipschitz factor of the smooth part's gradient, when there is one.
    pub lipschitz: Option<f64>,
    /// Strong convexity factor of the primal objective (0 when merely convex).
    pub strong_convexity: f64,
    pub op_norm: Option<f64>,
}

/// Solution set {x = (u, v) : u + v = w, uᵢvᵢ ≥ 0, sign(uᵢ) = sign(wᵢ)} of a LASSO with duplicated
/// columns, where w solves the reduced problem.
#[derive(Clone, Debug, PartialEq)]
pub struct LassoFace {
    pub w: Point64,
}

impl LassoFace {
    pub fn distance(&self, x: &Point64) -> f64 {
        let p = self.w.dim();
        (0..p)
            .map(|i| {
                let (u, v, w) = (x[i], x[p + i], self.w[i]);
                if w == 0.0 {
                    return u * u + v * v;
                }
                // Project onto the segment from (w, 0) to (0, w).
                let t = ((u - v + w) / (2.0 * w)).clamp(0.0, 1.0);
                let (pu, pv) = (t * w, (1.0 - t) * w);
                (u - pu).powi(2) + (v - pv).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Clone)]
pub struct ProblemInstance {
    pub composite: Composite,
    pub reference_x: Option<Point64>,
    pub reference_y: Option<Point64>,
    pub reference_value: Option<f64>,
    pub metadata: Metadata,
    pub face: Option<LassoFace>,
}

impl ProblemInstance {
    pub fn convex(&self) -> Result<&CompositeProblem<f64>> {
        match &self.composite {
            Composite::Convex(p) => Ok(p),
            Composite::Nonlinear(_) => Err(Error::Shape(format!("{} has a nonlinear operator", self.metadata.name))),
        }
    }

    pub fn nonlinear(&self) -> Result<&NonlinearSaddleProblem<f64>> {
        match &self.composite {
            Composite::Nonlinear(p) => Ok(p),
            Composite::Convex(_) => Err(Error::Shape(format!("{} has a linear operator", self.metadata.name))),
        }
    }

    pub fn reference(&self) -> Option<Reference<f64>> {
        self.reference_x.as_ref().map(|x| Reference {
            x: x.clone(),
            y: self.reference_y.clone(),
            value: self.reference_value,
        })
    }

    fn with_reference(mut self, r: ReferenceSolution) -> Self {
        self.reference_x = Some(r.x);
        self.reference_y = r.y;
        self.reference_value = Some(r.value);
        self
    }
}

#[derive(Clone, Debug)]
pub struct ReferenceSolution {
    pub x: Point64,
    pub y: Option<Point64>,
    pub value: f64,
    pub residual: f64,
}

/// ‖x − prox_{τG}(x − τ∇E(x))‖ for problems without K.
pub fn fb_fixed_point_residual(prob: &CompositeProblem<f64>, x: &Point64, tau: f64) -> Result<f64> {
    Ok(build_fb_residual(prob, tau)?.residual(x).norm())
}

fn fb_tau(prob: &CompositeProblem<f64>) -> Result<f64> {
    let l = prob
        .smooth_lipschitz()
        .ok_or_else(|| Error::Shape("reference solve needs a known Lipschitz factor".into()))?;
    Ok(if l > 0.0 { 1.0 / l } else { 1.0 })
}

fn polish<N: NewtonDifferentiable<f64>>(nd: &N, u: &Point64) -> Option<Point64> {
    let rep = ssn_solve(nd, u, POLISH_TOL, POLISH_MAX_ITER, None).ok()?;
    rep.converged.then(|| rep.solution().clone())
}

/// Inertial forward-backward (or PDPS when K is present) in chunks, each followed by a semismooth
/// Newton polish, until the fixed-point residual is at rounding level or the budget is spent.
pub fn reference_solve(prob: &CompositeProblem<f64>, budget: usize) -> Result<ReferenceSolution> {
    if prob.k.is_none() {
        let tau = fb_tau(prob)?;
        let nd = build_fb_residual(prob, tau).ok();
        let cfg = SolverConfig { tau0: Some(tau), inertia: true, max_iter: CHUNK, tol: 0.0, ..SolverConfig::default() };
        let mut x = Point::zeros(prob.primal_dim());
        let mut spent = 0;
        let residual = |x: &Point64| fb_fixed_point_residual(prob, x, tau);
        loop {
            let trace = run_with(prob, Algo::Fb, &cfg, &RunOptions { x0: Some(x.clone()), ..Default::default() })?;
            spent += trace.iterations();
            x = trace.final_state.x;
            if let Some(p) = nd.as_ref().and_then(|nd| polish(nd, &x)) {
                if residual(&p)? <= residual(&x)? {
                    x = p;
                }
            }
            let r = residual(&x)?;
            if r <= POLISH_TOL || spent >= budget {
                if r > REFERENCE_TOL {
                    return Err(Error::Reference { residual: r, iterations: spent });
                }
                let value = prob.primal_value(&x).map_or(f64::INFINITY, |v| v.to_scalar());
                return Ok(ReferenceSolution { x, y: None, value, residual: r });
            }
        }
    }
    let nd = build_saddle_residual(prob).ok();
    let cfg = SolverConfig { max_iter: CHUNK, tol: 0.0, ..SolverConfig::default() };
    let (n, m) = (prob.primal_dim(), prob.dual_dim());
    let mut u = Point::zeros(n + m);
    let mut spent = 0;
    let split = |u: &Point64| (Point::from_fn(n, |i| u[i]), Point::from_fn(m, |i| u[n + i]));
    let residual = |u: &Point64| {
        let (x, y) = split(u);
        let rx = &x - &prob.f0.prox(1.0, &(&x - &prob.apply_k_adjoint(&y)).axpy(-1.0, &grad_or_zero(prob, &x)));
        let ry = &y - &prob.prox_outer_conjugate(1.0, &(&y + &prob.apply_k(&x)));
        (rx.norm_sq() + ry.norm_sq()).sqrt()
    };
    loop {
        let (x0, y0) = split(&u);
        let opts = RunOptions { x0: Some(x0), y0: Some(y0), ..Default::default() };
        let trace = run_with(prob, Algo::Pdps, &cfg, &opts)?;
        spent += trace.iterations();
        let s = trace.final_state;
        u = Point::concat(&[&s.x, s.y.as_ref().expect("dual")]);
        if let Some(p) = nd.as_ref().and_then(|nd| polish(nd, &u)) {
            if residual(&p) <= residual(&u) {
                u = p;
            }
        }
        let r = residual(&u);
        if r <= POLISH_TOL || spent >= budget {
            if r > REFERENCE_TOL {
                return Err(Error::Reference { residual: r, iterations: spent });
            }
            let (x, y) = split(&u);
            let value = prob.primal_value(&x).map_or(f64::INFINITY, |v| v.to_scalar());
            return Ok(ReferenceSolution { x, y: Some(y), value, residual: r });
        }
    }
}

fn grad_or_zero(prob: &CompositeProblem<f64>, x: &Point64) -> Point64 {
    if prob.e.is_some() {
        prob.grad_e(x)
    } else {
        Point::zeros(x.dim())
    }
}

fn gaussian_matrix(rng: &mut crate::core::Rng64, rows: usize, cols: usize, scale: f64) -> Matrix64 {
    let v: Point64 = normal_point(rng, rows * cols);
    Matrix::from_fn(rows, cols, |i, j| scale * v[i * cols + j])
}

fn lasso_problem(a: Matrix64, b: Point64, alpha: f64) -> Result<CompositeProblem<f64>> {
    let n = a.cols();
    CompositeProblem::new(n, Arc::new(L1::new(alpha)?), Outer::Primal(Arc::new(ZeroFn)))?
        .with_smooth(Arc::new(LeastSquares::new(a, b)?))
}

/// min ½‖Ax − b‖² + α‖x‖₁ with given data.
pub fn make_lasso_from(a: Matrix64, b: Point64, alpha: f64) -> Result<ProblemInstance> {
    if !(alpha > 0.0) {
        return Err(invalid("alpha", "must be positive"));
    }
    let n = a.cols();
    let prob = lasso_problem(a, b, alpha)?;
    let l = prob.smooth_lipschitz();
    let inst = ProblemInstance {
        composite: Composite::Convex(prob.clone()),
        reference_x: None,
        reference_y: None,
        reference_value: None,
        metadata: Metadata { name: "lasso".into(), n, seed: None, lipschitz: l, strong_convexity: 0.0, op_norm: None },
        face: None,
    };
    Ok(inst.with_reference(reference_solve(&prob, DEFAULT_BUDGET)?))
}

/// The seeded (A, b) behind `make_lasso`.
pub fn lasso_data(n: usize, m: usize, seed: u64) -> (Matrix64, Point64) {
    let mut rng = seeded_rng(seed);
    let a = gaussian_matrix(&mut rng, m, n, 1.0 / (m as f64).sqrt());
    let s = (n / 5).max(1);
    let vals: Point64 = normal_point(&mut rng, s);
    let mut x = Point::zeros(n);
    for (j, i) in sample(&mut rng, n, s).into_iter().enumerate() {
        x.as_mut_slice()[i] = vals[j];
    }
    let b0 = a.matvec(&x);
    let noise: Point64 = normal_point(&mut rng, m);
    let b = b0.axpy(0.01 * b0.norm_inf(), &noise);
    (a, b)
}

/// Gaussian A (m×n, entries N(0, 1/m)), planted x* with n/5 nonzeros, b = Ax* plus 1% noise.
pub fn make_lasso(n: usize, m: usize, alpha: f64, seed: u64) -> Result<ProblemInstance> {
    if n == 0 || m == 0 {
        return Err(Error::EmptyPoint);
    }
    let (a, b) = lasso_data(n, m, seed);
    let mut inst = make_lasso_from(a, b, alpha)?;
    inst.metadata.seed = Some(seed);
    Ok(inst)
}

/// LASSO with A = [B B] for a full-column-rank B (m×p), so the solution set is a face rather than
/// a point; `face` describes it.
pub fn make_lasso_duplicated(p: usize, m: usize, alpha: f64, seed: u64) -> Result<ProblemInstance> {
    if p == 0 || m < p {
        return Err(invalid("m", "need m ≥ p ≥ 1 for a full-column-rank block"));
    }
    let (bmat, b) = lasso_data(p, m, seed);
    let reduced = make_lasso_from(bmat.clone(), b.clone(), alpha)?;
    let w = reduced.reference_x.clone().expect("reference");
    let a = Matrix::from_fn(m, 2 * p, |i, j| bmat.get(i, j % p));
    let prob = lasso_problem(a, b, alpha)?;
    let half = w.scale(0.5);
    let x = Point::concat(&[&half, &half]);
    let value = prob.primal_value(&x).map_or(f64::INFINITY, |v| v.to_scalar());
    Ok(ProblemInstance {
        metadata: Metadata {
            name: "lasso_duplicated".into(),
            n: 2 * p,
            seed: Some(seed),
            lipschitz: prob.smooth_lipschitz(),
            strong_convexity: 0.0,
            op_norm: None,
        },
        composite: Composite::Convex(prob),
        reference_x: Some(x),
        reference_y: None,
        reference_value: Some(value),
        face: Some(LassoFace { w }),
    })
}

/// Piecewise-constant test signal with levels 0, 1, −0.5, 0.3.
pub fn default_tv_signal(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            if t < 0.2 {
                0.0
            } else if t < 0.45 {
                1.0
            } else if t < 0.7 {
                -0.5
            } else {
                0.3
            }
        })
        .collect()
}

fn noisy(signal: &[f64], noise_seed: Option<u64>) -> Point64 {
    let z = Point::from_f64s(signal);
    match noise_seed {
        Some(seed) => {
            let mut rng = seeded_rng(seed);
            let noise: Point64 = normal_point(&mut rng, signal.len());
            z.axpy(0.01 * z.norm_inf(), &noise)
        }
        None => z,
    }
}

fn tv_instance(name: &str, n: usize, z: Point64, g: Outer<f64>, seed: Option<u64>) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(invalid("n", "need at least two samples"));
    }
    let prob = CompositeProblem::new(n, Arc::new(SquaredNorm::new(1.0, Some(z))?), g)?
        .with_operator(Arc::new(ForwardDiff { n }))?;
    let op_norm = crate::core::estimate_op_norm(&ForwardDiff { n }, 1e-10, 200_000).ok();
    let inst = ProblemInstance {
        metadata: Metadata { name: name.into(), n, seed, lipschitz: None, strong_convexity: 1.0, op_norm },
        composite: Composite::Convex(prob.clone()),
        reference_x: None,
        reference_y: None,
        reference_value: None,
        face: None,
    };
    Ok(inst.with_reference(reference_solve(&prob, DEFAULT_BUDGET)?))
}

/// min ½‖x − z‖² + α‖Kx‖₁ with K the forward difference and z a (noisy) signal.
pub fn make_tv1d(n: usize, alpha: f64, signal: Option<&[f64]>, noise_seed: Option<u64>) -> Result<ProblemInstance> {
    let sig = match signal {
        Some(s) if s.len() != n => return Err(Error::DimensionMismatch { expected: n, got: s.len() }),
        Some(s) => s.to_vec(),
        None => default_tv_signal(n),
    };
    tv_instance("tv1d", n, noisy(&sig, noise_seed), Outer::Primal(Arc::new(L1::new(alpha)?)), noise_seed)
}

/// The same model with the Huber-smoothed total variation, so that G* is ε-strongly convex.
pub fn make_tv1d_huber(n: usize, alpha: f64, eps: f64, noise_seed: Option<u64>) -> Result<ProblemInstance> {
    let z = noisy(&default_tv_signal(n), noise_seed);
    tv_instance("tv1d_huber", n, z, Outer::Conjugate(Arc::new(HuberDual::new(alpha, eps)?)), noise_seed)
}

/// min ½⟨Qx, x⟩ − ⟨b, x⟩ over [−1, 1]ⁿ with Q SPD and λ_min(Q) ≥ γ.
pub fn make_boxqp_from(q: Matrix64, b: Point64, gamma: f64) -> Result<ProblemInstance> {
    let n = b.dim();
    let quad = Quadratic::new(q, b, gamma)?;
    let l = quad.lipschitz();
    let prob = CompositeProblem::new(n, Arc::new(BoxIndicator::uniform(-1.0, 1.0)?), Outer::Primal(Arc::new(ZeroFn)))?
        .with_smooth(Arc::new(quad))?;
    let inst = ProblemInstance {
        metadata: Metadata { name: "boxqp".into(), n, seed: None, lipschitz: l, strong_convexity: gamma, op_norm: None },
        composite: Composite::Convex(prob.clone()),
        reference_x: None,
        reference_y: None,
        reference_value: None,
        face: None,
    };
    Ok(inst.with_reference(reference_solve(&prob, DEFAULT_BUDGET)?))
}

/// Q = MᵀM + Id with Gaussian M (entries N(0, 1/n)), b with N(0, 4) entries.
pub fn make_boxqp(n: usize, seed: u64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(Error::EmptyPoint);
    }
    let mut rng = seeded_rng(seed);
    let m = gaussian_matrix(&mut rng, n, n, 1.0 / (n as f64).sqrt());
    let q = m.gram().add_scaled_identity(1.0)?;
    let b = normal_point::<f64>(&mut rng, n).scale(2.0);
    let mut inst = make_boxqp_from(q, b, 1.0)?;
    inst.metadata.seed = Some(seed);
    Ok(inst)
}

pub const SPLIT_ALPHA: f64 = 0.5;
pub const SPLIT_WEIGHT: f64 = 2.0;

/// The seeded center z behind `make_split`.
pub fn split_center(n: usize, seed: u64) -> Point64 {
    normal_point(&mut seeded_rng(seed), n)
}

/// min α‖x‖₁ + (w/2)‖x − z‖², both parts prox-simple; x̂ = soft-threshold of z at α/w.
pub fn make_split(n: usize, seed: u64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(Error::EmptyPoint);
    }
    let (alpha, w) = (SPLIT_ALPHA, SPLIT_WEIGHT);
    let z = split_center(n, seed);
    let g: SharedProx<f64> = Arc::new(SquaredNorm::new(w, Some(z.clone()))?);
    let prob = CompositeProblem::new(n, Arc::new(L1::new(alpha)?), Outer::Primal(g))?;
    let x = z.map(|t| crate::prox::prox_abs(t, alpha / w));
    let value = prob.primal_value(&x).map_or(f64::INFINITY, |v| v.to_scalar());
    Ok(ProblemInstance {
        metadata: Metadata { name: "split".into(), n, seed: Some(seed), lipschitz: None, strong_convexity: w, op_norm: None },
        composite: Composite::Convex(prob),
        reference_x: Some(x),
        reference_y: None,
        reference_value: Some(value),
        face: None,
    })
}

/// Center of F₀ and of G in the nonlinear instance.
const NL_A: [f64; 2] = [1.0, 0.5];
const NL_C: [f64; 2] = [0.25, 0.0];
/// ‖∇K‖ ≤ R_K on the box |x₁| ≤ NL_BOX.
pub const NL_BOX: f64 = 1.5;

/// min ½‖x − a‖² + ½‖K(x) − c‖² with K(x) = (x₁², x₂). The three-point constants at the
/// critical point are γ_K = 0, θ = ŷ₁, λ = 2ŷ₁ (valid on all of ℝ² since ŷ₁ > 0).
pub fn make_nl_instance() -> Result<ProblemInstance> {
    let a = Point::from_f64s(&NL_A);
    let c = Point::from_f64s(&NL_C);
    let f0: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(a.clone()))?);
    let g: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(c.clone()))?);
    let k = CoordinateSquare { squared: vec![true, false] };

    // Newton on x − a + ∇K(x)*y = 0, K(x) − c − y = 0.
    let mut u = Point::from_f64s(&[NL_A[0], NL_A[1], 0.0, 0.0]);
    for _ in 0..50 {
        let (x1, x2, y1, y2) = (u[0], u[1], u[2], u[3]);
        let r = Point::from_f64s(&[
            x1 - a[0] + 2.0 * x1 * y1,
            x2 - a[1] + y2,
            x1 * x1 - c[0] - y1,
            x2 - c[1] - y2,
        ]);
        if r.norm() <= 1e-15 {
            break;
        }
        let j = Matrix::from_rows(&[
            &[1.0 + 2.0 * y1, 0.0, 2.0 * x1, 0.0],
            &[0.0, 1.0, 0.0, 1.0],
            &[2.0 * x1, 0.0, -1.0, 0.0],
            &[0.0, 1.0, 0.0, -1.0],
        ])?;
        u = &u + &Lu::factor(&j)?.solve(&r.scale(-1.0))?;
    }
    let (xh, yh) = (Point::from_f64s(&[u[0], u[1]]), Point::from_f64s(&[u[2], u[3]]));
    let y1 = yh[0];
    if !(y1 > 0.0) {
        return Err(Error::Consistency("the nonlinear instance needs ŷ₁ > 0".into()));
    }
    let prob = NonlinearSaddleProblem::new(f0, Outer::Primal(g), Arc::new(k))?.with_three_point(0.0, y1, 2.0 * y1)?;
    let res = prob.critical_residual(&xh, &yh);
    if res > 1e-12 {
        return Err(Error::Reference { residual: res, iterations: 50 });
    }
    let value = prob.primal_value(&xh).map_or(f64::INFINITY, |v| v.to_scalar());
    Ok(ProblemInstance {
        metadata: Metadata {
            name: "nl".into(),
            n: 2,
            seed: None,
            lipschitz: Some(2.0),
            strong_convexity: 1.0,
            op_norm: Some(2.0 * NL_BOX),
        },
        composite: Composite::Nonlinear(prob),
        reference_x: Some(xh),
        reference_y: Some(yh),
        reference_value: Some(value),
        face: None,
    })
}

/// Steps for the nonlinear instance: σ = τ (γ̃_F = γ̃_{G*} = 1), ρ_y = 0.1, κ = 0.5.
pub fn nl_params() -> NLStepParams<f64> {
    NLStepParams { tau: 0.1, sigma: 0.1, rho_y: 0.1, kappa: 0.5 }
}

/// Largest s (by bisection on [0, s_max]) such that NL-PDPS from û + s·d contracts the error by
/// 10⁻⁶ within `iters` steps while keeping ‖yᵏ − ŷ‖ ≤ ρ_y; returns the start at s/2 and s.
pub fn nl_safe_start(
    inst: &ProblemInstance,
    params: &NLStepParams<f64>,
    direction: &Point64,
    s_max: f64,
    iters: usize,
) -> Result<(Point64, Point64, f64)> {
    let prob = inst.nonlinear()?;
    let (xh, yh) = (
        inst.reference_x.as_ref().ok_or_else(|| invalid("inst", "no reference"))?,
        inst.reference_y.as_ref().ok_or_else(|| invalid("inst", "no reference dual"))?,
    );
    let n = xh.dim();
    let d = direction.scale(1.0 / direction.norm());
    let start = |s: f64| {
        let u = d.scale(s);
        (xh + &Point::from_fn(n, |i| u[i]), yh + &Point::from_fn(yh.dim(), |i| u[n + i]))
    };
    let ok = |s: f64| -> bool {
        let (x0, y0) = start(s);
        if y0.dist(yh) > params.rho_y {
            return false;
        }
        match nlpdps_run(prob, params, x0, y0, iters, 0.0, Some((xh, yh)), false) {
            Ok(r) => {
                let last = r.trace.records.last().and_then(|rec| rec.dist_to_ref).unwrap_or(f64::INFINITY);
                r.excursions.is_empty() && last <= 1e-6 * s
            }
            Err(_) => false,
        }
    };
    let (mut lo, mut hi) = (0.0, s_max);
    if ok(hi) {
        lo = hi;
    } else {
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let (x0, y0) = start(0.5 * lo);
    Ok((x0, y0, lo))
}

/// ∇K(x) for the nonlinear instance has norm max(2|x₁|, 1).
pub fn nl_grad_bound() -> f64 {
    (2.0 * NL_BOX).max(1.0)
}

/// Every smooth part in the convex zoo at small sizes, for gradient checks.
pub fn zoo(seed: u64) -> Result<Vec<ProblemInstance>> {
    Ok(vec![
        make_lasso(20, 12, 0.05, seed)?,
        make_lasso_duplicated(6, 12, 0.05, seed)?,
        make_tv1d(30, 0.5, None, Some(seed))?,
        make_tv1d_huber(30, 0.5, 0.1, Some(seed))?,
        make_boxqp(15, seed)?,
        make_split(10, seed)?,
    ])
}

/// Evaluates the nonlinear instance's K for sampling checks.
pub fn nl_operator(inst: &ProblemInstance) -> Result<Arc<dyn NonlinearOp<f64>>> {
    Ok(inst.nonlinear()?.k.clone())
}

#[cfg(test)]
mod tests;
