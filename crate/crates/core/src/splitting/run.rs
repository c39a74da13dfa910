use crate::core::{LinOp, Point, SmoothFn, ZeroSmooth};
use crate::diagnostics::lagrangian_gap;
use crate::error::{invalid, Error, Result};
use crate::prox::{Extended, ProxFn};
use crate::scalar::Scalar;
use crate::splitting::config::{Accel, Algo, SolverConfig};
use crate::splitting::problem::{AdmmProblem, CompositeProblem};
use crate::splitting::state::{GapKind, SolverState, Trace, TraceRecord};
use crate::splitting::steps::{
    admm_step, drs_step, fb_linesearch_step, fb_step, pdes_step, pdps_step, pp_step, precond_admm_step,
};
use crate::splitting::wrappers::{
    inertia_wrap, overrelax_bound_fb, overrelax_bound_pdps, overrelax_bound_pp, overrelax_wrap, StepFn,
};

/// Known solution used for distances and gaps.
#[derive(Clone, Debug)]
pub struct Reference<T> {
    pub x: Point<T>,
    pub y: Option<Point<T>>,
    pub value: Option<T>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions<T> {
    pub x0: Option<Point<T>>,
    /// Dual start (PDPS, PDES) or multiplier start (ADMM).
    pub y0: Option<Point<T>>,
    /// Shadow start (DRS, ADMM).
    pub z0: Option<Point<T>>,
    pub reference: Option<Reference<T>>,
    pub record_iterates: bool,
}

/// Step parameters after defaults are filled in and admissibility is checked.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolved<T> {
    pub tau: T,
    pub sigma: T,
    pub theta: T,
    /// Lower bound on over-relaxation parameters.
    pub lambda_lower: T,
    /// Whether J(xᵏ) − J* is a meaningful diagnostic (τL ≤ 1 for FB).
    pub value_gap: bool,
}

const BUDGET: f64 = 0.99;

fn positive<T: Scalar>(v: Option<T>, name: &'static str) -> Result<Option<T>> {
    match v {
        Some(t) if !(t > T::zero()) || !t.is_finite() => Err(invalid(name, format!("must be positive, got {t}"))),
        other => Ok(other),
    }
}

fn prox_target<T: Scalar>(prob: &CompositeProblem<T>) -> Result<bool> {
    if prob.k.is_some() {
        return Err(Error::Shape("this method needs K absent".into()));
    }
    if prob.f0.is_zero() {
        Ok(true)
    } else if prob.g.is_zero() {
        Ok(false)
    } else {
        Err(Error::Shape("this method takes a single prox-simple term; F₀ and G are both nonzero".into()))
    }
}

fn check_wrappers<T: Scalar>(algo: Algo, cfg: &SolverConfig<T>) -> Result<()> {
    if cfg.inertia && cfg.overrelax.is_some() {
        return Err(Error::Config("wrappers: inertia and overrelax are mutually exclusive".into()));
    }
    if cfg.overrelax.is_some() && !matches!(algo, Algo::Pp | Algo::Fb | Algo::Pdps) {
        return Err(Error::Config(format!("wrappers.overrelax: not available for {algo}")));
    }
    if cfg.overrelax.is_some() && !cfg.accel.is_none() {
        return Err(Error::Config("wrappers.overrelax: cannot be combined with acceleration".into()));
    }
    if cfg.inertia && !matches!(algo, Algo::Pp | Algo::Fb) {
        return Err(Error::Config(format!("wrappers.inertia: not available for {algo}")));
    }
    if cfg.linesearch.is_some() && algo != Algo::Fb {
        return Err(Error::Config(format!("wrappers.linesearch: only available for fb, not {algo}")));
    }
    if cfg.linesearch.is_some() && cfg.overrelax.is_some() {
        return Err(Error::Config("wrappers.linesearch: cannot be combined with overrelax".into()));
    }
    if !cfg.accel.is_none() && algo != Algo::Pdps {
        return Err(Error::Config(format!("solver.accel: only available for pdps, not {algo}")));
    }
    Ok(())
}

/// Fills in default steps and verifies every admissibility condition for the method.
pub fn resolve_steps<T: Scalar>(prob: &CompositeProblem<T>, algo: Algo, cfg: &SolverConfig<T>) -> Result<Resolved<T>> {
    check_wrappers(algo, cfg)?;
    let tau0 = positive(cfg.tau0, "tau0")?;
    let sigma0 = positive(cfg.sigma0, "sigma0")?;
    let theta0 = positive(cfg.theta0, "theta0")?;
    if !(cfg.tol >= T::zero()) {
        return Err(invalid("tol", "must be nonnegative"));
    }
    let one = T::one();
    let mut r = Resolved { tau: one, sigma: one, theta: one, lambda_lower: one, value_gap: true };
    match algo {
        Algo::Pp => {
            if prob.e.is_some() {
                return Err(Error::Shape("pp needs E absent".into()));
            }
            prox_target(prob)?;
            r.tau = tau0.unwrap_or(one);
            r.lambda_lower = overrelax_bound_pp();
        }
        Algo::Fb => {
            prox_target(prob)?;
            if let Some(ls) = cfg.linesearch {
                if !(ls.theta > T::zero() && ls.theta < one) {
                    return Err(invalid("linesearch.theta", "must lie in (0, 1)"));
                }
                if !(ls.tau_init > T::zero()) {
                    return Err(invalid("linesearch.tau_init", "must be positive"));
                }
                r.tau = ls.tau_init;
            } else {
                let l = prob.smooth_lipschitz().ok_or_else(|| {
                    Error::Inadmissible("the Lipschitz factor of ∇E is unknown; enable the line search".into())
                })?;
                r.tau = match tau0 {
                    Some(t) => t,
                    None if l > T::zero() => one / l,
                    None => one,
                };
                let tl = r.tau * l;
                if tl >= T::lit(2.0) {
                    return Err(Error::Inadmissible(format!("forward-backward needs τL < 2, got τL = {tl}")));
                }
                r.value_gap = tl <= one + T::lit(1e-12);
                r.lambda_lower = overrelax_bound_fb(l, r.tau);
            }
        }
        Algo::Drs => {
            if prob.e.is_some() || prob.k.is_some() {
                return Err(Error::Shape("drs needs E and K absent".into()));
            }
            r.tau = tau0.unwrap_or(one);
        }
        Algo::Pdps => {
            let kn = prob.k_norm();
            let l = prob.smooth_lipschitz().ok_or_else(|| {
                Error::Inadmissible("the Lipschitz factor of ∇E is unknown; PDPS needs it".into())
            })?;
            let lc = if cfg.gap_mode { l } else { l / T::lit(2.0) };
            let k2 = kn * kn;
            let budget = T::lit(BUDGET);
            let (tau, sigma) = match (tau0, sigma0) {
                (Some(t), Some(s)) => (t, s),
                (Some(t), None) => (t, if k2 > T::zero() { (budget - lc * t).max(T::zero()) / (t * k2) } else { one }),
                (None, Some(s)) => {
                    let t = budget / (lc + s * k2).max(T::epsilon());
                    (t, s)
                }
                (None, None) => {
                    // Equal steps with lc·τ + τ²‖K‖² = budget.
                    let t = if k2 > T::zero() {
                        (-lc + (lc * lc + T::lit(4.0) * k2 * budget).sqrt()) / (T::lit(2.0) * k2)
                    } else if lc > T::zero() {
                        budget / lc
                    } else {
                        one
                    };
                    (t, t)
                }
            };
            if !(sigma > T::zero()) {
                return Err(Error::Inadmissible(format!("no positive σ fits the budget with τ = {tau}")));
            }
            let used = lc * tau + tau * sigma * k2;
            if !(used < one) {
                let rule = match (l > T::zero(), cfg.gap_mode) {
                    (false, _) => "τσ‖K‖² < 1",
                    (true, false) => "Lτ/2 + τσ‖K‖² < 1",
                    (true, true) => "Lτ + τσ‖K‖² < 1",
                };
                return Err(Error::Inadmissible(format!(
                    "PDPS needs {rule}; got {used} with τ = {tau}, σ = {sigma}, ‖K‖ ≤ {kn}"
                )));
            }
            if let Accel::StrongPrimal { gamma } | Accel::StrongBoth { gamma, .. } = cfg.accel {
                if !(gamma > T::zero()) {
                    return Err(invalid("accel.gamma", "must be positive"));
                }
                if gamma > prob.f0.strong_convexity() + T::lit(1e-12) {
                    return Err(Error::Inadmissible(format!(
                        "acceleration factor γ = {gamma} exceeds the strong convexity {} of F₀",
                        prob.f0.strong_convexity()
                    )));
                }
            }
            if let Accel::StrongBoth { rho, .. } = cfg.accel {
                if !(rho > T::zero()) {
                    return Err(invalid("accel.rho", "must be positive"));
                }
                if rho > prob.g.dual_strong_convexity() + T::lit(1e-12) {
                    return Err(Error::Inadmissible(format!(
                        "acceleration factor ρ = {rho} exceeds the strong convexity {} of G*",
                        prob.g.dual_strong_convexity()
                    )));
                }
            }
            r.tau = tau;
            r.sigma = sigma;
            r.lambda_lower = overrelax_bound_pdps(l, tau, sigma, kn);
        }
        Algo::Pdes => {
            if !prob.f0.is_zero() {
                return Err(Error::Shape("pdes needs F₀ = 0".into()));
            }
            let kn = prob.k_norm();
            let l = prob.smooth_lipschitz().ok_or_else(|| Error::Inadmissible("PDES needs the Lipschitz factor of ∇E".into()))?;
            if kn > one + T::lit(1e-12) {
                return Err(Error::Inadmissible(format!("PDES needs ‖K‖ ≤ 1, got {kn}")));
            }
            if !(l < T::lit(2.0)) {
                return Err(Error::Inadmissible(format!("PDES needs L < 2, got {l}")));
            }
        }
        Algo::Admm => {
            let ap = prob.to_admm()?;
            if ap.a.as_scaled_identity().is_none() || ap.b.as_scaled_identity().is_none() {
                return Err(Error::Shape("admm needs A and B to be multiples of the identity; use padmm".into()));
            }
            r.tau = tau0.unwrap_or(one);
        }
        Algo::Padmm => {
            let ap = prob.to_admm()?;
            let (na, nb) = (crate::core::op_norm_upper_bound(&*ap.a), crate::core::op_norm_upper_bound(&*ap.b));
            r.tau = tau0.unwrap_or(one);
            r.sigma = sigma0.unwrap_or(T::lit(BUDGET) / (r.tau * na * na).max(T::epsilon()));
            r.theta = theta0.unwrap_or(one / (r.tau * nb * nb).max(T::epsilon()));
            padmm_admissible(r.sigma, r.theta, r.tau, na, nb)?;
        }
        Algo::Nlpdps => {
            return Err(Error::Shape("nlpdps runs on nonlinear saddle problems; see the nlpdps module".into()));
        }
    }
    if let Some(schedule) = &cfg.overrelax {
        schedule.validate(r.lambda_lower)?;
    }
    Ok(r)
}

/// στ‖A‖² < 1 and θτ‖B‖² ≤ 1, which make the preconditioners σ⁻¹ − τA*A and θ⁻¹ − τB*B
/// positive definite and semidefinite.
pub fn padmm_admissible<T: Scalar>(sigma: T, theta: T, tau: T, a_norm: T, b_norm: T) -> Result<()> {
    let qa = sigma * tau * a_norm * a_norm;
    let qb = theta * tau * b_norm * b_norm;
    if !(qa < T::one()) {
        return Err(Error::Inadmissible(format!("preconditioned ADMM needs στ‖A‖² < 1, got {qa}")));
    }
    if !(qb <= T::one() + T::lit(1e-12)) {
        return Err(Error::Inadmissible(format!("preconditioned ADMM needs θτ‖B‖² ≤ 1, got {qb}")));
    }
    Ok(())
}

pub fn run<T: Scalar>(prob: &CompositeProblem<T>, algo: Algo, cfg: &SolverConfig<T>) -> Result<Trace<T>> {
    run_with(prob, algo, cfg, &RunOptions::default())
}

struct Ergodic<T: Scalar> {
    sx: Point<T>,
    sy: Point<T>,
    weight: T,
    phi: T,
}

pub fn run_with<T: Scalar>(
    prob: &CompositeProblem<T>,
    algo: Algo,
    cfg: &SolverConfig<T>,
    opts: &RunOptions<T>,
) -> Result<Trace<T>> {
    let res = resolve_steps(prob, algo, cfg)?;
    let admm: Option<AdmmProblem<T>> = match algo {
        Algo::Admm | Algo::Padmm => Some(prob.to_admm()?),
        _ => None,
    };
    let zero_smooth = ZeroSmooth { n: prob.primal_dim() };
    let smooth: &dyn SmoothFn<T> = prob.e.as_deref().unwrap_or(&zero_smooth);
    let on_g = matches!(algo, Algo::Pp | Algo::Fb) && prox_target(prob)?;

    let prox_one = |tau: T, x: &Point<T>| if on_g { prob.prox_outer(tau, x) } else { prob.f0.prox(tau, x) };
    struct OneProx<'a, T: Scalar, P: Fn(T, &Point<T>) -> Point<T> + Sync + Send>(&'a P, std::marker::PhantomData<T>);
    impl<T: Scalar, P: Fn(T, &Point<T>) -> Point<T> + Sync + Send> ProxFn<T> for OneProx<'_, T, P> {
        fn value(&self, _x: &Point<T>) -> Extended<T> {
            Extended::Finite(T::zero())
        }
        fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
            (self.0)(gamma, x)
        }
        fn name(&self) -> String {
            "target".into()
        }
    }
    let target = OneProx(&prox_one, std::marker::PhantomData);
    let outer_as_g = OneProx(&|tau: T, v: &Point<T>| prob.prox_outer(tau, v), std::marker::PhantomData);

    let base: Box<dyn StepFn<T> + '_> = match algo {
        Algo::Pp => Box::new(|s: &SolverState<T>| Ok(pp_step(s, &target, res.tau))),
        Algo::Fb => match cfg.linesearch {
            Some(ls) => Box::new(move |s: &SolverState<T>| fb_linesearch_step(s, &target, smooth, ls)),
            None => Box::new(|s: &SolverState<T>| Ok(fb_step(s, &target, smooth, res.tau))),
        },
        Algo::Drs => Box::new(|s: &SolverState<T>| Ok(drs_step(s, &*prob.f0, &outer_as_g, res.tau))),
        Algo::Pdps => Box::new(|s: &SolverState<T>| pdps_step(s, prob, cfg)),
        Algo::Pdes => Box::new(|s: &SolverState<T>| pdes_step(s, prob)),
        Algo::Admm => {
            let ap = admm.as_ref().expect("admm problem");
            Box::new(move |s: &SolverState<T>| admm_step(s, ap, res.tau))
        }
        Algo::Padmm => {
            let ap = admm.as_ref().expect("admm problem");
            Box::new(move |s: &SolverState<T>| precond_admm_step(s, ap, res.sigma, res.theta, res.tau))
        }
        Algo::Nlpdps => unreachable!("rejected by resolve_steps"),
    };
    let stepper: Box<dyn StepFn<T> + '_> = if let Some(schedule) = &cfg.overrelax {
        Box::new(overrelax_wrap(base, schedule.clone(), res.lambda_lower))
    } else if cfg.inertia {
        Box::new(inertia_wrap(base))
    } else {
        base
    };

    let mut state = initial_state(prob, algo, &res, admm.as_ref(), opts)?;
    let reference = opts.reference.as_ref();
    let gap_kind = match (algo, reference) {
        (Algo::Pdps, Some(Reference { y: Some(_), .. })) if cfg.accel.is_none() => GapKind::ErgodicUniform,
        (Algo::Pdps, Some(Reference { y: Some(_), .. })) => GapKind::ErgodicAccelerated,
        (Algo::Pdps, _) => GapKind::None,
        (_, Some(Reference { value: Some(_), .. })) if res.value_gap => GapKind::Value,
        _ => GapKind::None,
    };
    let mut ergodic = state.y.as_ref().map(|y| Ergodic {
        sx: Point::zeros(state.x.dim()),
        sy: Point::zeros(y.dim()),
        weight: T::zero(),
        phi: T::one(),
    });

    let mut records = Vec::new();
    let mut iterates = Vec::new();
    if opts.record_iterates {
        iterates.push((state.x.clone(), state.y.clone()));
    }
    let mut converged = false;
    let mut infinite_gaps = 0;
    for _ in 0..cfg.max_iter {
        let next = stepper.step(&state)?;
        if !next.is_finite() || !next.residual.is_finite() {
            return Err(Error::Diverged(next.k));
        }
        let primal_value = prob.primal_value(&next.x).map(Extended::to_scalar);
        let dual_value = match (algo.is_primal_dual(), &next.y) {
            (true, Some(y)) => prob.dual_value(y).map(Extended::to_scalar),
            _ => None,
        };
        let dist_to_ref = reference.map(|r| next.x.dist(&r.x));
        let mut gap = None;
        match gap_kind {
            GapKind::Value => {
                let jstar = reference.and_then(|r| r.value).expect("value gap needs a reference value");
                gap = primal_value.map(|j| j - jstar);
            }
            GapKind::ErgodicUniform | GapKind::ErgodicAccelerated => {
                let erg = ergodic.as_mut().expect("dual state");
                let r = reference.expect("reference");
                let y_new = next.y.as_ref().expect("dual iterate");
                if gap_kind == GapKind::ErgodicUniform {
                    let w = next.lambda_k;
                    erg.sx = erg.sx.axpy(w, &next.x);
                    erg.sy = erg.sy.axpy(w, y_new);
                    erg.weight = erg.weight + w;
                } else {
                    let w = state.tau_k * erg.phi;
                    erg.sx = erg.sx.axpy(w, &next.x);
                    erg.sy = erg.sy.axpy(w, state.y.as_ref().expect("dual iterate"));
                    erg.weight = erg.weight + w;
                    erg.phi = erg.phi / (next.omega_k * next.omega_k);
                }
                let inv = T::one() / erg.weight;
                let (xt, yt) = (erg.sx.scale(inv), erg.sy.scale(inv));
                match lagrangian_gap(prob, (&xt, &yt), (&r.x, r.y.as_ref().expect("reference dual")))? {
                    Extended::Finite(v) => gap = Some(v),
                    Extended::PosInf => infinite_gaps += 1,
                }
            }
            GapKind::None => {}
        }
        let pd = algo == Algo::Pdps;
        records.push(TraceRecord {
            k: next.k,
            residual: next.residual,
            primal_value,
            dual_value,
            gap,
            dist_to_ref,
            tau: if pd { state.tau_k } else { next.tau_k },
            sigma: matches!(algo, Algo::Pdps | Algo::Padmm | Algo::Pdes).then_some(next.sigma_k),
            omega: pd.then_some(next.omega_k),
            lambda: (cfg.overrelax.is_some() || cfg.inertia).then_some(next.lambda_k),
        });
        if opts.record_iterates {
            iterates.push((next.x.clone(), next.y.clone()));
        }
        state = next;
        if state.residual <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(Trace { algo, records, iterates, gap_kind, converged, final_state: state, infinite_gaps })
}

fn initial_state<T: Scalar>(
    prob: &CompositeProblem<T>,
    algo: Algo,
    res: &Resolved<T>,
    admm: Option<&AdmmProblem<T>>,
    opts: &RunOptions<T>,
) -> Result<SolverState<T>> {
    let n = admm.map_or(prob.primal_dim(), AdmmProblem::x_dim);
    let x0 = opts.x0.clone().unwrap_or_else(|| Point::zeros(n));
    x0.check_dim(n)?;
    let mut s = SolverState::new(x0.clone(), res.tau);
    match algo {
        Algo::Pdps | Algo::Pdes => {
            let y0 = opts.y0.clone().unwrap_or_else(|| Point::zeros(prob.dual_dim()));
            y0.check_dim(prob.dual_dim())?;
            s = s.with_dual(y0, res.sigma);
        }
        Algo::Drs => {
            let z0 = opts.z0.clone().unwrap_or(x0);
            z0.check_dim(n)?;
            s = s.with_shadow(z0);
        }
        Algo::Admm | Algo::Padmm => {
            let ap = admm.expect("admm problem");
            let z0 = opts.z0.clone().unwrap_or_else(|| Point::zeros(ap.z_dim()));
            z0.check_dim(ap.z_dim())?;
            let l0 = opts.y0.clone().unwrap_or_else(|| Point::zeros(ap.c.dim()));
            l0.check_dim(ap.c.dim())?;
            s = s.with_shadow(z0).with_dual(l0, res.sigma);
        }
        _ => {}
    }
    Ok(s)
}
