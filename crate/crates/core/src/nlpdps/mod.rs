//! Primal-dual proximal splitting for min F₀(x) + G(K(x)) with K nonlinear.

use crate::core::{NonlinearOp, Point, SharedNonlinear};
use crate::error::{invalid, Error, Result};
use crate::prox::{Extended, Outer, ProxFn, SharedProx};
use crate::scalar::Scalar;
use crate::splitting::{Algo, GapKind, SolverState, Trace, TraceRecord};

/// Problem data plus the three-point constants (γ_K, θ, λ) of K at the critical point.
#[derive(Clone)]
pub struct NonlinearSaddleProblem<T: Scalar> {
    pub f0: SharedProx<T>,
    pub g: Outer<T>,
    pub k: SharedNonlinear<T>,
    pub gamma_k: T,
    pub theta_bound: T,
    pub lambda: T,
}

impl<T: Scalar> NonlinearSaddleProblem<T> {
    pub fn new(f0: SharedProx<T>, g: Outer<T>, k: SharedNonlinear<T>) -> Result<Self> {
        if let Some(n) = f0.dim() {
            if n != k.in_dim() {
                return Err(Error::DimensionMismatch { expected: k.in_dim(), got: n });
            }
        }
        if let Some(m) = g.dim() {
            if m != k.out_dim() {
                return Err(Error::DimensionMismatch { expected: k.out_dim(), got: m });
            }
        }
        Ok(Self { f0, g, k, gamma_k: T::zero(), theta_bound: T::zero(), lambda: T::zero() })
    }

    pub fn with_three_point(mut self, gamma_k: T, theta: T, lambda: T) -> Result<Self> {
        if !(theta >= T::zero()) || !(lambda >= T::zero()) || !gamma_k.is_finite() {
            return Err(invalid("three_point", "need θ ≥ 0, λ ≥ 0 and finite γ_K"));
        }
        self.gamma_k = gamma_k;
        self.theta_bound = theta;
        self.lambda = lambda;
        Ok(self)
    }

    pub fn primal_dim(&self) -> usize {
        self.k.in_dim()
    }

    pub fn dual_dim(&self) -> usize {
        self.k.out_dim()
    }

    /// Lipschitz factor L of ∇K.
    pub fn jacobian_lipschitz(&self) -> Result<T> {
        self.k.lipschitz_jacobian().ok_or_else(|| Error::Shape("K has no known Jacobian Lipschitz factor".into()))
    }

    /// γ_F + γ_K and γ_{G*}; both must be positive for the linear rate.
    pub fn convexity(&self) -> (T, T) {
        (self.f0.strong_convexity() + self.gamma_k, self.g.dual_strong_convexity())
    }

    pub fn primal_value(&self, x: &Point<T>) -> Option<Extended<T>> {
        Some(self.f0.value(x) + self.g.primal_value(&self.k.apply(x))?)
    }

    /// Distance of (x, y) from satisfying −∇K(x)*y ∈ ∂F₀(x), K(x) ∈ ∂G*(y), measured through the
    /// unit-step proximal fixed-point maps.
    pub fn critical_residual(&self, x: &Point<T>, y: &Point<T>) -> T {
        let xp = self.f0.prox(T::one(), &(x - &self.k.jacobian_adjoint_apply(x, y)));
        let yp = self.g.prox_dual(T::one(), &(y + &self.k.apply(x)));
        xp.dist(x).max(yp.dist(y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NLStepParams<T> {
    pub tau: T,
    pub sigma: T,
    pub rho_y: T,
    pub kappa: T,
}

impl<T: Scalar> NLStepParams<T> {
    /// σ = τγ̃_F/γ̃_{G*}.
    pub fn coupled(tau: T, gamma_f: T, gamma_gs: T, rho_y: T, kappa: T) -> Result<Self> {
        if !(gamma_f > T::zero()) || !(gamma_gs > T::zero()) {
            return Err(invalid("gamma", "acceleration factors must be positive"));
        }
        Ok(Self { tau, sigma: tau * gamma_f / gamma_gs, rho_y, kappa })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NlAdmissibility<T> {
    pub admissible: bool,
    /// κ/(λ + 3Lρ_y) − τ.
    pub tau_slack: T,
    /// 1/(λ + 3Lρ_y) − τ.
    pub tau_slack_unit: T,
    /// (1 − κ) − τσR_K².
    pub product_slack: T,
    /// τσR_K² − (1 − κ), the reversed inequality.
    pub product_slack_reversed: T,
}

/// Checks τ < κ/(λ + 3Lρ_y) and τσR_K² ≤ 1 − κ, reporting every slack.
pub fn nl_step_admissibility<T: Scalar>(
    prob: &NonlinearSaddleProblem<T>,
    params: &NLStepParams<T>,
    grad_bound: T,
) -> Result<NlAdmissibility<T>> {
    let NLStepParams { tau, sigma, rho_y, kappa } = *params;
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(invalid("tau", "must be positive and finite"));
    }
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(invalid("sigma", "must be positive and finite"));
    }
    if !(rho_y >= T::zero()) {
        return Err(invalid("rho_y", "must be nonnegative"));
    }
    if !(kappa >= T::zero() && kappa < T::one()) {
        return Err(invalid("kappa", "must lie in [0, 1)"));
    }
    if !(grad_bound >= T::zero()) {
        return Err(invalid("grad_bound", "must be nonnegative"));
    }
    let denom = prob.lambda + T::lit(3.0) * prob.jacobian_lipschitz()? * rho_y;
    let (tau_slack, tau_slack_unit) = if denom > T::zero() {
        (kappa / denom - tau, T::one() / denom - tau)
    } else {
        (T::infinity(), T::infinity())
    };
    let prod = tau * sigma * grad_bound * grad_bound;
    let product_slack = T::one() - kappa - prod;
    Ok(NlAdmissibility {
        admissible: tau_slack > T::zero() && product_slack >= T::zero(),
        tau_slack,
        tau_slack_unit,
        product_slack,
        product_slack_reversed: -product_slack,
    })
}

/// x⁺ = prox_{τF₀}(x − τ∇K(x)*y), x̄ = x⁺ + (x⁺ − x), y⁺ = prox_{σG*}(y + σK(x̄)).
pub fn nlpdps_step<T: Scalar>(
    s: &SolverState<T>,
    prob: &NonlinearSaddleProblem<T>,
    params: &NLStepParams<T>,
) -> Result<SolverState<T>> {
    let y = s.y.as_ref().ok_or_else(|| Error::Shape("NL-PDPS state has no dual variable".into()))?;
    let (tau, sigma) = (params.tau, params.sigma);
    let w = s.x.axpy(-tau, &prob.k.jacobian_adjoint_apply(&s.x, y));
    let x = prob.f0.prox(tau, &w);
    let x_bar = x.axpy(T::one(), &(&x - &s.x));
    let y_next = prob.g.prox_dual(sigma, &y.axpy(sigma, &prob.k.apply(&x_bar)));
    let residual = (x.dist(&s.x) / tau).max(y_next.dist(y) / sigma);
    let mut out = s.clone();
    out.x = x;
    out.y = Some(y_next);
    out.x_bar = Some(x_bar);
    out.tau_k = tau;
    out.sigma_k = sigma;
    out.omega_k = T::one();
    out.residual = residual;
    out.k = s.k + 1;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NlRun<T> {
    pub trace: Trace<T>,
    /// Iterations k with ‖yᵏ − ŷ‖ > ρ_y.
    pub excursions: Vec<usize>,
}

/// Runs NL-PDPS from (x⁰, y⁰); with a reference (x̂, ŷ) the distance column holds ‖uᵏ − û‖.
#[allow(clippy::too_many_arguments)]
pub fn nlpdps_run<T: Scalar>(
    prob: &NonlinearSaddleProblem<T>,
    params: &NLStepParams<T>,
    x0: Point<T>,
    y0: Point<T>,
    max_iter: usize,
    tol: T,
    reference: Option<(&Point<T>, &Point<T>)>,
    record_iterates: bool,
) -> Result<NlRun<T>> {
    x0.check_dim(prob.primal_dim())?;
    y0.check_dim(prob.dual_dim())?;
    let mut state = SolverState::new(x0, params.tau).with_dual(y0, params.sigma);
    let dist = |s: &SolverState<T>| {
        reference.map(|(xh, yh)| {
            let dy = s.y.as_ref().expect("dual").dist(yh);
            (s.x.dist(xh).powi(2) + dy * dy).sqrt()
        })
    };
    let mut records = Vec::new();
    let mut iterates = Vec::new();
    if record_iterates {
        iterates.push((state.x.clone(), state.y.clone()));
    }
    let mut excursions = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let next = nlpdps_step(&state, prob, params)?;
        if !next.is_finite() || !next.residual.is_finite() {
            return Err(Error::Diverged(next.k));
        }
        if let Some((_, yh)) = reference {
            if next.y.as_ref().expect("dual").dist(yh) > params.rho_y {
                excursions.push(next.k);
            }
        }
        records.push(TraceRecord {
            k: next.k,
            residual: next.residual,
            primal_value: prob.primal_value(&next.x).map(Extended::to_scalar),
            dual_value: None,
            gap: None,
            dist_to_ref: dist(&next),
            tau: next.tau_k,
            sigma: Some(next.sigma_k),
            omega: Some(next.omega_k),
            lambda: None,
        });
        if record_iterates {
            iterates.push((next.x.clone(), next.y.clone()));
        }
        state = next;
        if state.residual <= tol {
            converged = true;
            break;
        }
    }
    let trace = Trace {
        algo: Algo::Nlpdps,
        records,
        iterates,
        gap_kind: GapKind::None,
        converged,
        final_state: state,
        infinite_gaps: 0,
    };
    Ok(NlRun { trace, excursions })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::core::{normal_point, seeded_rng, CoordinateSquare, LinOp, LinearMap, Matrix};
    use crate::prox::{BoxIndicator, HuberDual, SquaredNorm, L1};
    use crate::splitting::{pdps_step, CompositeProblem, SolverConfig};

    fn p(v: &[f64]) -> Point<f64> {
        Point::from_f64s(v)
    }

    #[test]
    fn linear_k_matches_pdps() {
        let mut rng = seeded_rng(21);
        let k = Matrix::from_fn(4, 3, |_, _| normal_point::<f64>(&mut rng, 1)[0]);
        let f0: SharedProx<f64> = Arc::new(L1::new(0.3).unwrap());
        let g: SharedProx<f64> = Arc::new(HuberDual::new(1.0, 0.2).unwrap());
        let kk: Arc<dyn LinOp<f64>> = Arc::new(k);
        let nl = NonlinearSaddleProblem::new(f0.clone(), Outer::Conjugate(g.clone()), Arc::new(LinearMap { op: kk.clone() })).unwrap();
        let lin = CompositeProblem::new(3, f0, Outer::Conjugate(g)).unwrap().with_operator(kk).unwrap();
        let params = NLStepParams { tau: 0.2, sigma: 0.3, rho_y: 1.0, kappa: 0.5 };
        let cfg = SolverConfig::default();
        let x0 = normal_point::<f64>(&mut rng, 3);
        let y0 = normal_point::<f64>(&mut rng, 4);
        let mut a = SolverState::new(x0.clone(), 0.2).with_dual(y0.clone(), 0.3);
        let mut b = a.clone();
        for _ in 0..50 {
            a = nlpdps_step(&a, &nl, &params).unwrap();
            b = pdps_step(&b, &lin, &cfg).unwrap();
            assert!(a.x.dist(&b.x) <= 1e-14 && a.y.as_ref().unwrap().dist(b.y.as_ref().unwrap()) <= 1e-14);
        }
    }

    fn scalar_square(g_star: SharedProx<f64>) -> NonlinearSaddleProblem<f64> {
        let f0: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(p(&[1.0]))).unwrap());
        NonlinearSaddleProblem::new(f0, Outer::Conjugate(g_star), Arc::new(CoordinateSquare { squared: vec![true] })).unwrap()
    }

    #[test]
    fn hand_step_with_fixed_dual() {
        // G* = ι_{1}: the dual stays at 1 and the primal step is forward-backward on x² + ½(x − 1)².
        let prob = scalar_square(Arc::new(BoxIndicator::uniform(1.0, 1.0).unwrap()));
        let params = NLStepParams { tau: 0.1, sigma: 0.5, rho_y: 0.0, kappa: 0.5 };
        let s = SolverState::new(p(&[2.0]), 0.1).with_dual(p(&[1.0]), 0.5);
        let out = nlpdps_step(&s, &prob, &params).unwrap();
        // prox_{τF₀}(2 − 0.1·4) = (1.6 + 0.1)/1.1.
        assert!((out.x[0] - 1.7 / 1.1).abs() < 1e-15);
        assert_eq!(out.y.unwrap()[0], 1.0);
    }

    #[test]
    fn critical_point_is_fixed() {
        // With G* = ι_{1}: x̂ minimizes x² + ½(x − 1)², so x̂ = 1/3, ŷ = 1.
        let prob = scalar_square(Arc::new(BoxIndicator::uniform(1.0, 1.0).unwrap()));
        let (xh, yh) = (p(&[1.0 / 3.0]), p(&[1.0]));
        assert!(prob.critical_residual(&xh, &yh) < 1e-15);
        let params = NLStepParams { tau: 0.3, sigma: 0.3, rho_y: 0.0, kappa: 0.5 };
        let out = nlpdps_step(&SolverState::new(xh.clone(), 0.3).with_dual(yh.clone(), 0.3), &prob, &params).unwrap();
        assert!(out.x.dist(&xh) < 1e-15 && out.y.unwrap().dist(&yh) == 0.0);
        assert!(out.residual < 1e-12);
    }

    #[test]
    fn admissibility() {
        let lin: NonlinearSaddleProblem<f64> = NonlinearSaddleProblem::new(
            Arc::new(SquaredNorm::unit()),
            Outer::Conjugate(Arc::new(SquaredNorm::unit())),
            Arc::new(LinearMap { op: Arc::new(crate::core::ScaledIdentity::identity(1)) }),
        )
        .unwrap();
        let r = nl_step_admissibility(&lin, &NLStepParams { tau: 0.7, sigma: 0.7, rho_y: 0.0, kappa: 0.5 }, 1.0).unwrap();
        assert!((r.product_slack - 0.01).abs() < 1e-12 && (r.product_slack_reversed + 0.01).abs() < 1e-12);
        assert!(r.admissible);

        let tau: f64 = 0.99f64.sqrt();
        let r = nl_step_admissibility(&lin, &NLStepParams { tau, sigma: tau, rho_y: 0.0, kappa: 0.01 }, 1.0).unwrap();
        assert!(r.admissible && r.tau_slack == f64::INFINITY);

        let r = nl_step_admissibility(&lin, &NLStepParams { tau: 0.0, sigma: 1.0, rho_y: 0.0, kappa: 0.5 }, 1.0);
        assert!(r.is_err());

        // λ = 0.5, L = 2, ρ_y = 0.1: κ/(λ + 3Lρ_y) = 0.5/1.1.
        let nl = scalar_square(Arc::new(SquaredNorm::unit())).with_three_point(0.0, 0.0, 0.5).unwrap();
        let r = nl_step_admissibility(&nl, &NLStepParams { tau: 0.5, sigma: 0.1, rho_y: 0.1, kappa: 0.5 }, 1.0).unwrap();
        assert!(!r.admissible && (r.tau_slack - (0.5 / 1.1 - 0.5)).abs() < 1e-15);
        assert!((r.tau_slack_unit - (1.0 / 1.1 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn coupled_sigma() {
        let p = NLStepParams::coupled(0.2, 1.0, 0.5, 0.1, 0.5).unwrap();
        assert_eq!(p.sigma, 0.4);
        assert!(NLStepParams::coupled(0.2, 0.0, 0.5, 0.1, 0.5).is_err());
    }
}
