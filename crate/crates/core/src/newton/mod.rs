//! Semismooth Newton on nonsmooth root problems.

use crate::core::{Lu, Matrix, Point, SharedSmooth, SmoothFn, ZeroSmooth};
use crate::error::{invalid, Error, Result};
use crate::prox::{AffinePrecomposed, Conjugate, Outer, ProxFn, SharedProx};
use crate::scalar::Scalar;
use crate::splitting::{fb_step, CompositeProblem, SolverState};

pub const DEFAULT_WARM_START: usize = 20;

/// Weights 𝟙{|xᵢ| ≥ γ} of the soft-shrinkage derivative.
pub fn dn_softshrink<T: Scalar>(x: &Point<T>, gamma: T) -> Result<Point<T>> {
    if !(gamma > T::zero()) {
        return Err(invalid("gamma", "must be positive"));
    }
    Ok(x.map(|t| if t.abs() >= gamma { T::one() } else { T::zero() }))
}

/// Weights 𝟙{xᵢ ∈ [a, b]} of the box-projection derivative.
pub fn dn_proj_box<T: Scalar>(x: &Point<T>, a: T, b: T) -> Result<Point<T>> {
    if !(a <= b) {
        return Err(invalid("bounds", format!("need a ≤ b, got [{a}, {b}]")));
    }
    Ok(x.map(|t| if a <= t && t <= b { T::one() } else { T::zero() }))
}

/// A root problem R(x) = 0 with a Newton derivative.
pub trait NewtonDifferentiable<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;
    fn residual(&self, x: &Point<T>) -> Point<T>;
    /// D_N R(x)h.
    fn deriv_apply(&self, x: &Point<T>, h: &Point<T>) -> Point<T>;

    fn deriv_matrix(&self, x: &Point<T>) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_columns(n, n, |j| self.deriv_apply(x, &Point::basis(n, j)))
    }

    /// Solves D_N R(x)s = −r.
    fn newton_system_solve(&self, x: &Point<T>, r: &Point<T>) -> Result<Point<T>> {
        Lu::factor(&self.deriv_matrix(x))?.solve(&r.scale(-T::one()))
    }
}

/// R(x) = Qx − b.
pub struct AffineResidual<T> {
    pub q: Matrix<T>,
    pub b: Point<T>,
}

impl<T: Scalar> NewtonDifferentiable<T> for AffineResidual<T> {
    fn dim(&self) -> usize {
        self.b.dim()
    }
    fn residual(&self, x: &Point<T>) -> Point<T> {
        &self.q.matvec(x) - &self.b
    }
    fn deriv_apply(&self, _x: &Point<T>, h: &Point<T>) -> Point<T> {
        self.q.matvec(h)
    }
    fn deriv_matrix(&self, _x: &Point<T>) -> Matrix<T> {
        self.q.clone()
    }
}

/// R(x) = x − prox_{τG}(x − τ∇F(x)), with D_N R(x) = Id − D(Id − τ∇²F(x)) and D the diagonal
/// Newton derivative of the prox.
pub struct FbResidual<T: Scalar> {
    g: SharedProx<T>,
    f: SharedSmooth<T>,
    tau: T,
    n: usize,
}

impl<T: Scalar> FbResidual<T> {
    pub fn new(g: SharedProx<T>, f: SharedSmooth<T>, tau: T) -> Result<Self> {
        if !(tau > T::zero()) || !tau.is_finite() {
            return Err(invalid("tau", "must be positive and finite"));
        }
        let n = f.dim();
        if let Some(d) = g.dim() {
            if d != n {
                return Err(Error::DimensionMismatch { expected: n, got: d });
            }
        }
        let probe = Point::zeros(n);
        if g.prox_derivative(tau, &probe).is_none() {
            return Err(Error::Unregistered(g.name()));
        }
        if f.hessian_apply(&probe, &probe).is_none() {
            return Err(Error::Unregistered("Hessian-vector product of the smooth part".into()));
        }
        Ok(Self { g, f, tau, n })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn forward(&self, x: &Point<T>) -> Point<T> {
        x.axpy(-self.tau, &self.f.grad(x))
    }

    fn weights(&self, x: &Point<T>) -> Point<T> {
        self.g.prox_derivative(self.tau, &self.forward(x)).expect("checked at construction")
    }

    fn hessian(&self, x: &Point<T>, h: &Point<T>) -> Point<T> {
        self.f.hessian_apply(x, h).expect("checked at construction")
    }
}

impl<T: Scalar> NewtonDifferentiable<T> for FbResidual<T> {
    fn dim(&self) -> usize {
        self.n
    }
    fn residual(&self, x: &Point<T>) -> Point<T> {
        x - &self.g.prox(self.tau, &self.forward(x))
    }
    fn deriv_apply(&self, x: &Point<T>, h: &Point<T>) -> Point<T> {
        let w = self.weights(x);
        let inner = h.axpy(-self.tau, &self.hessian(x, h));
        h - &w.zip_map(&inner, |a, b| a * b)
    }
    fn deriv_matrix(&self, x: &Point<T>) -> Matrix<T> {
        let w = self.weights(x);
        let n = self.n;
        let mut m = Matrix::from_columns(n, n, |j| self.hessian(x, &Point::basis(n, j)));
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { T::one() } else { T::zero() };
                m.set(i, j, id - w[i] * (id - self.tau * m.get(i, j)));
            }
        }
        m
    }
}

/// The FB residual of a problem whose nonsmooth part is a single prox-simple term (F₀, or G with
/// K absent).
pub fn build_fb_residual<T: Scalar>(prob: &CompositeProblem<T>, tau: T) -> Result<FbResidual<T>> {
    if prob.k.is_some() {
        return Err(Error::Shape("the forward-backward residual needs K absent".into()));
    }
    let n = prob.primal_dim();
    let g: SharedProx<T> = if prob.g.is_zero() {
        prob.f0.clone()
    } else if prob.f0.is_zero() {
        let base: SharedProx<T> = match &prob.g {
            Outer::Primal(g) => g.clone(),
            Outer::Conjugate(gs) => std::sync::Arc::new(Conjugate::new(gs.clone())?),
        };
        match &prob.b_shift {
            Some(c) => std::sync::Arc::new(AffinePrecomposed::new(base, T::one(), c.scale(-T::one()))?),
            None => base,
        }
    } else {
        return Err(Error::Shape("F₀ and G are both nonzero".into()));
    };
    let f: SharedSmooth<T> = prob.e.clone().unwrap_or_else(|| std::sync::Arc::new(ZeroSmooth { n }));
    FbResidual::new(g, f, tau)
}

/// R(x, y) = (x − prox_{F₀}(x − ∇E(x) − K*y), y − prox_{G̃*}(y + Kx)), the unit-step
/// saddle-point residual of min F₀ + E + G(K· − c).
pub struct SaddleResidual<T: Scalar> {
    prob: CompositeProblem<T>,
    n: usize,
    m: usize,
}

impl<T: Scalar> SaddleResidual<T> {
    pub fn split(&self, u: &Point<T>) -> (Point<T>, Point<T>) {
        let x = Point::from_fn(self.n, |i| u[i]);
        let y = Point::from_fn(self.m, |i| u[self.n + i]);
        (x, y)
    }

    pub fn join(&self, x: &Point<T>, y: &Point<T>) -> Point<T> {
        Point::concat(&[x, y])
    }

    fn primal_arg(&self, x: &Point<T>, y: &Point<T>) -> Point<T> {
        let mut w = x - &self.prob.apply_k_adjoint(y);
        if self.prob.e.is_some() {
            w = &w - &self.prob.grad_e(x);
        }
        w
    }

    fn dual_arg(&self, x: &Point<T>, y: &Point<T>) -> Point<T> {
        y + &self.prob.apply_k(x)
    }

    /// Derivative weights of v ↦ prox_{G̃*}(v).
    fn dual_weights(&self, v: &Point<T>) -> Option<Point<T>> {
        let v = match &self.prob.b_shift {
            Some(c) => v - c,
            None => v.clone(),
        };
        match &self.prob.g {
            Outer::Primal(g) => g.prox_derivative(T::one(), &v).map(|w| w.map(|t| T::one() - t)),
            Outer::Conjugate(gs) => gs.prox_derivative(T::one(), &v),
        }
    }
}

pub fn build_saddle_residual<T: Scalar>(prob: &CompositeProblem<T>) -> Result<SaddleResidual<T>> {
    let (n, m) = (prob.primal_dim(), prob.dual_dim());
    let out = SaddleResidual { prob: prob.clone(), n, m };
    let (x, y) = (Point::zeros(n), Point::zeros(m));
    if prob.f0.prox_derivative(T::one(), &x).is_none() {
        return Err(Error::Unregistered(prob.f0.name()));
    }
    if out.dual_weights(&y).is_none() {
        return Err(Error::Unregistered("prox of the outer conjugate".into()));
    }
    if let Some(e) = &prob.e {
        if e.hessian_apply(&x, &x).is_none() {
            return Err(Error::Unregistered("Hessian-vector product of the smooth part".into()));
        }
    }
    Ok(out)
}

impl<T: Scalar> NewtonDifferentiable<T> for SaddleResidual<T> {
    fn dim(&self) -> usize {
        self.n + self.m
    }
    fn residual(&self, u: &Point<T>) -> Point<T> {
        let (x, y) = self.split(u);
        let rx = &x - &self.prob.f0.prox(T::one(), &self.primal_arg(&x, &y));
        let ry = &y - &self.prob.prox_outer_conjugate(T::one(), &self.dual_arg(&x, &y));
        self.join(&rx, &ry)
    }
    fn deriv_apply(&self, u: &Point<T>, h: &Point<T>) -> Point<T> {
        let (x, y) = self.split(u);
        let (hx, hy) = self.split(h);
        let df = self.prob.f0.prox_derivative(T::one(), &self.primal_arg(&x, &y)).expect("checked at construction");
        let dg = self.dual_weights(&self.dual_arg(&x, &y)).expect("checked at construction");
        let mut inner = &hx - &self.prob.apply_k_adjoint(&hy);
        if let Some(e) = &self.prob.e {
            inner = &inner - &e.hessian_apply(&x, &hx).expect("checked at construction");
        }
        let rx = &hx - &df.zip_map(&inner, |a, b| a * b);
        let ry = &hy - &dg.zip_map(&(&hy + &self.prob.apply_k(&hx)), |a, b| a * b);
        self.join(&rx, &ry)
    }
}

#[derive(Clone, Debug)]
pub struct SsnReport<T> {
    pub iterates: Vec<Point<T>>,
    pub residual_norms: Vec<T>,
    /// ‖e^{k+1}‖/‖eᵏ‖ against the reference, while ‖eᵏ‖ > 0.
    pub ratios: Vec<T>,
    pub converged: bool,
}

impl<T: Scalar> SsnReport<T> {
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn solution(&self) -> &Point<T> {
        self.iterates.last().expect("at least the start point")
    }
}

/// x^{k+1} = xᵏ − D_N R(xᵏ)⁻¹R(xᵏ) until ‖R(xᵏ)‖ ≤ tol.
pub fn ssn_solve<T: Scalar, N: NewtonDifferentiable<T> + ?Sized>(
    nd: &N,
    x0: &Point<T>,
    tol: T,
    max_iter: usize,
    reference: Option<&Point<T>>,
) -> Result<SsnReport<T>> {
    x0.check_dim(nd.dim())?;
    if let Some(i) = x0.iter().position(|t| !t.is_finite()) {
        return Err(Error::NonFinite { index: i });
    }
    let mut x = x0.clone();
    let mut iterates = vec![x.clone()];
    let mut residual_norms = Vec::new();
    let mut converged = false;
    for k in 0..=max_iter {
        let r = nd.residual(&x);
        let rn = r.norm();
        residual_norms.push(rn);
        if rn <= tol {
            converged = true;
            break;
        }
        if k == max_iter {
            break;
        }
        let s = match nd.newton_system_solve(&x, &r) {
            Err(Error::Singular { condition, .. }) => return Err(Error::Singular { iteration: k, condition }),
            other => other?,
        };
        x = &x + &s;
        if !x.is_finite() {
            return Err(Error::Diverged(k + 1));
        }
        iterates.push(x.clone());
    }
    let ratios = match reference {
        Some(xh) => iterates
            .windows(2)
            .filter_map(|w| {
                let e0 = w[0].dist(xh);
                (e0 > T::zero()).then(|| w[1].dist(xh) / e0)
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(SsnReport { iterates, residual_norms, ratios, converged })
}

/// ‖R(x+h) − R(x) − D_N R(x+h)h‖/‖h‖ for h = t·d, d = direction/‖direction‖, one entry per t.
pub fn approximation_ratios<T: Scalar, N: NewtonDifferentiable<T> + ?Sized>(
    nd: &N,
    x: &Point<T>,
    direction: &Point<T>,
    steps: &[T],
) -> Vec<T> {
    let d = direction.scale(T::one() / direction.norm());
    let rx = nd.residual(x);
    steps
        .iter()
        .map(|&t| {
            let h = d.scale(t);
            let xh = x + &h;
            let err = &(&nd.residual(&xh) - &rx) - &nd.deriv_apply(&xh, &h);
            err.norm() / h.norm()
        })
        .collect()
}

/// `iters` plain forward-backward steps with step τ.
pub fn fb_warm_start<T: Scalar>(
    g: &dyn ProxFn<T>,
    f: &dyn SmoothFn<T>,
    tau: T,
    x0: &Point<T>,
    iters: usize,
) -> Point<T> {
    let mut s = SolverState::new(x0.clone(), tau);
    for _ in 0..iters {
        s = fb_step(&s, g, f, tau);
    }
    s.x
}

/// Warm start followed by semismooth Newton on the FB residual.
pub fn ssn_with_warm_start<T: Scalar>(
    nd: &FbResidual<T>,
    x0: &Point<T>,
    warm: usize,
    tol: T,
    max_iter: usize,
    reference: Option<&Point<T>>,
) -> Result<SsnReport<T>> {
    let start = fb_warm_start(&*nd.g, &*nd.f, nd.tau, x0, warm);
    ssn_solve(nd, &start, tol, max_iter, reference)
}
