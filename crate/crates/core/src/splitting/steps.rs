//! Single steps of the basic splitting methods. Each step reads its base point from the incoming
//! state and records the fixed-point residual relative to that base.

use crate::core::{LinOp, Point, SmoothFn};
use crate::error::{invalid, Error, Result};
use crate::prox::ProxFn;
use crate::scalar::Scalar;
use crate::splitting::config::{Accel, LineSearch, SolverConfig, LINESEARCH_MAX_HALVINGS};
use crate::splitting::problem::{AdmmProblem, CompositeProblem};
use crate::splitting::state::SolverState;

fn advanced<T: Scalar>(s: &SolverState<T>, x: Point<T>, residual: T) -> SolverState<T> {
    let mut out = s.clone();
    out.x = x;
    out.residual = residual;
    out.k = s.k + 1;
    out
}

/// x⁺ = prox_{τG}(x).
pub fn pp_step<T: Scalar, G: ProxFn<T> + ?Sized>(s: &SolverState<T>, g: &G, tau: T) -> SolverState<T> {
    let x = g.prox(tau, &s.x);
    let r = x.dist(&s.x) / tau;
    let mut out = advanced(s, x, r);
    out.tau_k = tau;
    out
}

/// x⁺ = prox_{τG}(x − τ∇F(x)).
pub fn fb_step<T: Scalar, G: ProxFn<T> + ?Sized, F: SmoothFn<T> + ?Sized>(
    s: &SolverState<T>,
    g: &G,
    f: &F,
    tau: T,
) -> SolverState<T> {
    let x = g.prox(tau, &s.x.axpy(-tau, &f.grad(&s.x)));
    let r = x.dist(&s.x) / tau;
    let mut out = advanced(s, x, r);
    out.tau_k = tau;
    out
}

/// Backtracking from `tau_init` by factors θ until
/// F(x⁺) ≤ F(b) + ⟨∇F(b), x⁺ − b⟩ + ‖x⁺ − b‖²/(2τ) holds at the base point b.
pub fn backtrack_linesearch<T: Scalar, G: ProxFn<T> + ?Sized, F: SmoothFn<T> + ?Sized>(
    f: &F,
    g: &G,
    base: &Point<T>,
    ls: LineSearch<T>,
) -> Result<(Point<T>, T)> {
    if !(ls.theta > T::zero() && ls.theta < T::one()) {
        return Err(invalid("linesearch.theta", format!("must lie in (0, 1), got {}", ls.theta)));
    }
    if !(ls.tau_init > T::zero()) || !ls.tau_init.is_finite() {
        return Err(invalid("linesearch.tau_init", format!("must be positive, got {}", ls.tau_init)));
    }
    let fb = f.value(base);
    let grad = f.grad(base);
    let slack = T::lit(1e-12) * (T::one() + fb.abs());
    let mut tau = ls.tau_init;
    for _ in 0..=LINESEARCH_MAX_HALVINGS {
        let x = g.prox(tau, &base.axpy(-tau, &grad));
        let d = &x - base;
        let model = fb + grad.dot(&d) + d.norm_sq() / (T::lit(2.0) * tau);
        if f.value(&x) <= model + slack {
            return Ok((x, tau));
        }
        tau = tau * ls.theta;
    }
    Err(Error::LineSearch { halvings: LINESEARCH_MAX_HALVINGS })
}

/// Forward-backward step with the step length found by backtracking.
pub fn fb_linesearch_step<T: Scalar, G: ProxFn<T> + ?Sized, F: SmoothFn<T> + ?Sized>(
    s: &SolverState<T>,
    g: &G,
    f: &F,
    ls: LineSearch<T>,
) -> Result<SolverState<T>> {
    let (x, tau) = backtrack_linesearch(f, g, &s.x, ls)?;
    let r = x.dist(&s.x) / tau;
    let mut out = advanced(s, x, r);
    out.tau_k = tau;
    Ok(out)
}

/// x⁺ = prox_{τF}(z), y⁺ = prox_{τG}(2x⁺ − z), z⁺ = z + y⁺ − x⁺.
pub fn drs_step<T: Scalar, F: ProxFn<T> + ?Sized, G: ProxFn<T> + ?Sized>(
    s: &SolverState<T>,
    f: &F,
    g: &G,
    tau: T,
) -> SolverState<T> {
    let z = s.z.clone().unwrap_or_else(|| s.x.clone());
    let x = f.prox(tau, &z);
    let y = g.prox(tau, &x.lincomb(T::lit(2.0), -T::one(), &z));
    let z_next = &(&z + &y) - &x;
    let r = z_next.dist(&z) / tau;
    let mut out = advanced(s, x, r);
    out.y = Some(y);
    out.z = Some(z_next);
    out.tau_k = tau;
    out
}

fn check_factors<T: Scalar>(gamma: T, rho: T) -> Result<()> {
    if !(gamma >= T::zero()) || !(rho >= T::zero()) {
        return Err(invalid("accel", format!("factors must be nonnegative, got γ = {gamma}, ρ = {rho}")));
    }
    Ok(())
}

/// Acceleration rule: (ω, τ⁺, σ⁺).
///
/// γ > 0, ρ = 0: ω = 1/√(1 + 2γτ), τ⁺ = τω, σ⁺ = σ/ω.
/// γ, ρ > 0: ω = 1/√(1 + 2θ) with θ = min{ρσ, γτ}, steps unchanged.
/// γ = 0: ω = 1, steps unchanged.
pub fn accel_update<T: Scalar>(tau: T, sigma: T, gamma: T, rho: T) -> Result<(T, T, T)> {
    accel_rule(tau, sigma, gamma, rho, T::lit(2.0))
}

/// The gap-mode variant with 1 + γτ and 1 + θ under the radical.
pub fn accel_update_gap<T: Scalar>(tau: T, sigma: T, gamma: T, rho: T) -> Result<(T, T, T)> {
    accel_rule(tau, sigma, gamma, rho, T::one())
}

fn accel_rule<T: Scalar>(tau: T, sigma: T, gamma: T, rho: T, c: T) -> Result<(T, T, T)> {
    check_factors(gamma, rho)?;
    if gamma == T::zero() {
        return Ok((T::one(), tau, sigma));
    }
    if rho == T::zero() {
        let omega = T::one() / (T::one() + c * gamma * tau).sqrt();
        return Ok((omega, tau * omega, sigma / omega));
    }
    let theta = (rho * sigma).min(gamma * tau);
    Ok((T::one() / (T::one() + c * theta).sqrt(), tau, sigma))
}

/// One PDPS step from (x, y) with steps (τ_k, σ_k):
/// x⁺ = prox_{τF₀}(x − τK*y − τ∇E(x)), x̄ = x⁺ + ω(x⁺ − x), y⁺ = prox_{σ⁺G*}(y + σ⁺Kx̄).
pub fn pdps_step<T: Scalar>(
    s: &SolverState<T>,
    prob: &CompositeProblem<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolverState<T>> {
    let y = s.y.as_ref().ok_or_else(|| Error::Shape("PDPS state has no dual variable".into()))?;
    let (tau, sigma) = (s.tau_k, s.sigma_k);
    let (gamma, rho) = cfg.accel.factors();
    let (omega, tau_next, sigma_next) = match cfg.accel {
        Accel::None => (T::one(), tau, sigma),
        _ if cfg.gap_mode => accel_update_gap(tau, sigma, gamma, rho)?,
        _ => accel_update(tau, sigma, gamma, rho)?,
    };
    let (x, x_bar) = pdps_primal(prob, &s.x, y, tau, omega);
    let y_next = prob.prox_outer_conjugate(sigma_next, &y.axpy(sigma_next, &prob.apply_k(&x_bar)));
    let r = (x.dist(&s.x) / tau).max(y_next.dist(y) / sigma_next);
    let mut out = advanced(s, x, r);
    out.y = Some(y_next);
    out.tau_k = tau_next;
    out.sigma_k = sigma_next;
    out.omega_k = omega;
    Ok(out)
}

pub(crate) fn pdps_primal<T: Scalar>(
    prob: &CompositeProblem<T>,
    x: &Point<T>,
    y: &Point<T>,
    tau: T,
    omega: T,
) -> (Point<T>, Point<T>) {
    let mut w = x.axpy(-tau, &prob.apply_k_adjoint(y));
    if prob.e.is_some() {
        w = w.axpy(-tau, &prob.grad_e(x));
    }
    let x_next = prob.f0.prox(tau, &w);
    let x_bar = x_next.axpy(omega, &(&x_next - x));
    (x_next, x_bar)
}

/// Explicit primal-dual step with unit steps:
/// y⁺ = prox_{G*}((Id − KK*)y + K(x − ∇F(x))), x⁺ = x − ∇F(x) − K*y⁺.
pub fn pdes_step<T: Scalar>(s: &SolverState<T>, prob: &CompositeProblem<T>) -> Result<SolverState<T>> {
    if !prob.f0.is_zero() {
        return Err(Error::Shape("PDES needs F₀ = 0; the primal part must be smooth".into()));
    }
    let y = s.y.as_ref().ok_or_else(|| Error::Shape("PDES state has no dual variable".into()))?;
    let grad = prob.grad_e(&s.x);
    let w = &s.x - &grad;
    let arg = &(y - &prob.apply_k(&prob.apply_k_adjoint(y))) + &prob.apply_k(&w);
    let y_next = prob.prox_outer_conjugate(T::one(), &arg);
    let x = &w - &prob.apply_k_adjoint(&y_next);
    let r = x.dist(&s.x).max(y_next.dist(y));
    let mut out = advanced(s, x, r);
    out.y = Some(y_next);
    out.tau_k = T::one();
    out.sigma_k = T::one();
    Ok(out)
}

fn admm_parts<'a, T: Scalar>(s: &'a SolverState<T>, prob: &AdmmProblem<T>) -> Result<(Point<T>, &'a Point<T>)> {
    let z = s.z.clone().unwrap_or_else(|| Point::zeros(prob.z_dim()));
    let lam = s.y.as_ref().ok_or_else(|| Error::Shape("ADMM state has no multiplier".into()))?;
    Ok((z, lam))
}

fn admm_finish<T: Scalar>(
    s: &SolverState<T>,
    prob: &AdmmProblem<T>,
    x: Point<T>,
    z_old: &Point<T>,
    z: Point<T>,
    lam: &Point<T>,
    tau: T,
) -> SolverState<T> {
    let lam_next = lam.axpy(tau, &prob.constraint_residual(&x, &z));
    let r = (lam_next.dist(lam) / tau).max(tau * prob.b.apply(&(&z - z_old)).norm());
    let mut out = advanced(s, x, r);
    out.y = Some(lam_next);
    out.z = Some(z);
    out.tau_k = tau;
    out
}

/// ADMM with exact subproblems, supported when A = a·Id and B = b·Id:
/// x⁺ = prox_{F/(τa²)}((c − bz − λ/τ)/a), z⁺ = prox_{G/(τb²)}((c − ax⁺ − λ/τ)/b),
/// λ⁺ = λ + τ(ax⁺ + bz⁺ − c).
pub fn admm_step<T: Scalar>(s: &SolverState<T>, prob: &AdmmProblem<T>, tau: T) -> Result<SolverState<T>> {
    let (Some(a), Some(b)) = (prob.a.as_scaled_identity(), prob.b.as_scaled_identity()) else {
        return Err(Error::Shape(
            "ADMM subproblems reduce to prox maps only when A and B are multiples of the identity; use padmm".into(),
        ));
    };
    if a == T::zero() || b == T::zero() {
        return Err(Error::Shape("ADMM needs nonzero multiples of the identity".into()));
    }
    let (z_old, lam) = admm_parts(s, prob)?;
    let it = T::one() / tau;
    let vx = (&prob.c - &z_old.scale(b)).axpy(-it, lam).scale(T::one() / a);
    let x = prob.f.prox(it / (a * a), &vx);
    let vz = (&prob.c - &x.scale(a)).axpy(-it, lam).scale(T::one() / b);
    let z = prob.g.prox(it / (b * b), &vz);
    Ok(admm_finish(s, prob, x, &z_old, z, lam, tau))
}

/// Preconditioned ADMM:
/// x⁺ = prox_{σF}(x − στA*Ax + σA*(τ(c − Bz) − λ)),
/// z⁺ = prox_{θG}(z − θτB*Bz + θB*(τ(c − Ax⁺) − λ)),
/// λ⁺ = λ + τ(Ax⁺ + Bz⁺ − c).
pub fn precond_admm_step<T: Scalar>(
    s: &SolverState<T>,
    prob: &AdmmProblem<T>,
    sigma: T,
    theta: T,
    tau: T,
) -> Result<SolverState<T>> {
    let (z_old, lam) = admm_parts(s, prob)?;
    let (a, b) = (&prob.a, &prob.b);
    let ax = a.apply(&s.x);
    let wx = (&prob.c - &b.apply(&z_old)).scale(tau);
    let vx = s.x.axpy(-sigma * tau, &a.adjoint(&ax)).axpy(sigma, &a.adjoint(&(&wx - lam)));
    let x = prob.f.prox(sigma, &vx);
    let bz = b.apply(&z_old);
    let wz = (&prob.c - &a.apply(&x)).scale(tau);
    let vz = z_old.axpy(-theta * tau, &b.adjoint(&bz)).axpy(theta, &b.adjoint(&(&wz - lam)));
    let z = prob.g.prox(theta, &vz);
    let mut out = admm_finish(s, prob, x, &z_old, z, lam, tau);
    out.sigma_k = sigma;
    Ok(out)
}
