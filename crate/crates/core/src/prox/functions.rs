//! Shipped prox-simple functions and the combinators that keep a closed-form prox.

use std::sync::Arc;

use crate::core::Point;
use crate::error::{invalid, Error, Result};
use crate::prox::calculus::prox_conjugate;
use crate::prox::closed_form::{clamp, prox_abs, prox_l2norm};
use crate::prox::extended::Extended;
use crate::scalar::Scalar;

/// Convex function with a closed-form proximal map.
pub trait ProxFn<T: Scalar>: Send + Sync {
    /// Fixed dimension, or `None` for functions defined on every ℝⁿ.
    fn dim(&self) -> Option<usize> {
        None
    }

    fn value(&self, x: &Point<T>) -> Extended<T>;

    /// prox_{γF}(x).
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T>;

    fn strong_convexity(&self) -> T {
        T::zero()
    }

    fn domain_check(&self, x: &Point<T>) -> bool {
        self.value(x).is_finite()
    }

    /// F*(y) in closed form, when known.
    fn conjugate_value(&self, _y: &Point<T>) -> Option<Extended<T>> {
        None
    }

    fn conjugate_strong_convexity(&self) -> T {
        T::zero()
    }

    /// Diagonal Newton derivative of x ↦ prox_{γF}(x), when the prox is componentwise PC¹.
    fn prox_derivative(&self, _gamma: T, _x: &Point<T>) -> Option<Point<T>> {
        None
    }

    /// Per-component element of ∂F(v) where it is unique; `None` entries mark components at a
    /// kink, where the subdifferential is a nontrivial interval.
    fn subgradient_selection(&self, _v: &Point<T>, _tol: T) -> Option<Vec<Option<T>>> {
        None
    }

    fn is_zero(&self) -> bool {
        false
    }

    fn name(&self) -> String;
}

pub type SharedProx<T> = Arc<dyn ProxFn<T>>;

impl<T: Scalar, F: ProxFn<T> + ?Sized> ProxFn<T> for Arc<F> {
    fn dim(&self) -> Option<usize> {
        (**self).dim()
    }
    fn value(&self, x: &Point<T>) -> Extended<T> {
        (**self).value(x)
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        (**self).prox(gamma, x)
    }
    fn strong_convexity(&self) -> T {
        (**self).strong_convexity()
    }
    fn domain_check(&self, x: &Point<T>) -> bool {
        (**self).domain_check(x)
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        (**self).conjugate_value(y)
    }
    fn conjugate_strong_convexity(&self) -> T {
        (**self).conjugate_strong_convexity()
    }
    fn prox_derivative(&self, gamma: T, x: &Point<T>) -> Option<Point<T>> {
        (**self).prox_derivative(gamma, x)
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        (**self).subgradient_selection(v, tol)
    }
    fn is_zero(&self) -> bool {
        (**self).is_zero()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// Relative slack for set-membership tests of conjugate indicators, whose arguments come out of
/// Moreau's identity and can overshoot the boundary by a rounding error.
pub(crate) fn membership_tol<T: Scalar>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

fn le_tol<T: Scalar>(t: T, bound: T) -> bool {
    t <= bound + membership_tol::<T>() * T::one().max(bound.abs())
}

/// F ≡ 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroFn;

impl<T: Scalar> ProxFn<T> for ZeroFn {
    fn value(&self, _x: &Point<T>) -> Extended<T> {
        Extended::Finite(T::zero())
    }
    fn prox(&self, _gamma: T, x: &Point<T>) -> Point<T> {
        x.clone()
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        Some(Extended::indicator(le_tol(y.norm_inf(), T::zero())))
    }
    fn prox_derivative(&self, _gamma: T, x: &Point<T>) -> Option<Point<T>> {
        Some(Point::filled(x.dim(), T::one()))
    }
    fn subgradient_selection(&self, v: &Point<T>, _tol: T) -> Option<Vec<Option<T>>> {
        Some(vec![Some(T::zero()); v.dim()])
    }
    fn is_zero(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        "zero".into()
    }
}

/// (w/2)‖x − c‖², with c = 0 when no center is given.
#[derive(Clone, Debug)]
pub struct SquaredNorm<T> {
    weight: T,
    center: Option<Point<T>>,
}

impl<T: Scalar> SquaredNorm<T> {
    /// ½‖x‖².
    pub fn unit() -> Self {
        Self { weight: T::one(), center: None }
    }

    pub fn new(weight: T, center: Option<Point<T>>) -> Result<Self> {
        if !(weight > T::zero()) || !weight.is_finite() {
            return Err(invalid("weight", format!("must be positive and finite, got {weight}")));
        }
        Ok(Self { weight, center })
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn center(&self) -> Option<&Point<T>> {
        self.center.as_ref()
    }

    fn shifted(&self, x: &Point<T>) -> Point<T> {
        match &self.center {
            Some(c) => x - c,
            None => x.clone(),
        }
    }
}

impl<T: Scalar> ProxFn<T> for SquaredNorm<T> {
    fn dim(&self) -> Option<usize> {
        self.center.as_ref().map(Point::dim)
    }
    fn value(&self, x: &Point<T>) -> Extended<T> {
        Extended::Finite(self.weight * self.shifted(x).norm_sq() / T::lit(2.0))
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        let d = T::one() + gamma * self.weight;
        match &self.center {
            Some(c) => x.zip_map(c, |t, ci| (t + gamma * self.weight * ci) / d),
            None => x.map(|t| t / d),
        }
    }
    fn strong_convexity(&self) -> T {
        self.weight
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        let lin = self.center.as_ref().map_or(T::zero(), |c| c.dot(y));
        Some(Extended::Finite(lin + y.norm_sq() / (T::lit(2.0) * self.weight)))
    }
    fn conjugate_strong_convexity(&self) -> T {
        T::one() / self.weight
    }
    fn prox_derivative(&self, gamma: T, x: &Point<T>) -> Option<Point<T>> {
        Some(Point::filled(x.dim(), T::one() / (T::one() + gamma * self.weight)))
    }
    fn subgradient_selection(&self, v: &Point<T>, _tol: T) -> Option<Vec<Option<T>>> {
        Some(self.shifted(v).iter().map(|&t| Some(self.weight * t)).collect())
    }
    fn name(&self) -> String {
        format!("squared_norm(w={})", self.weight)
    }
}

/// α‖x‖₁.
#[derive(Clone, Copy, Debug)]
pub struct L1<T> {
    alpha: T,
}

impl<T: Scalar> L1<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(invalid("alpha", format!("must be positive and finite, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
}

impl<T: Scalar> ProxFn<T> for L1<T> {
    fn value(&self, x: &Point<T>) -> Extended<T> {
        Extended::Finite(self.alpha * x.norm_l1())
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        let g = gamma * self.alpha;
        x.map(|t| prox_abs(t, g))
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        Some(Extended::indicator(le_tol(y.norm_inf(), self.alpha)))
    }
    fn prox_derivative(&self, gamma: T, x: &Point<T>) -> Option<Point<T>> {
        let g = gamma * self.alpha;
        Some(x.map(|t| if t.abs() >= g { T::one() } else { T::zero() }))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        Some(
            v.iter()
                .map(|&t| {
                    if t > tol {
                        Some(self.alpha)
                    } else if t < -tol {
                        Some(-self.alpha)
                    } else {
                        None
                    }
                })
                .collect(),
        )
    }
    fn name(&self) -> String {
        format!("l1(alpha={})", self.alpha)
    }
}

/// Per-component or uniform interval bounds; infinite bounds allowed.
#[derive(Clone, Debug)]
pub enum Bounds<T> {
    Uniform(T),
    PerComponent(Vec<T>),
}

impl<T: Scalar> Bounds<T> {
    fn at(&self, i: usize) -> T {
        match self {
            Bounds::Uniform(v) => *v,
            Bounds::PerComponent(v) => v[i],
        }
    }

    fn len(&self) -> Option<usize> {
        match self {
            Bounds::Uniform(_) => None,
            Bounds::PerComponent(v) => Some(v.len()),
        }
    }
}

/// Indicator of the box {x : lo ≤ x ≤ hi}.
#[derive(Clone, Debug)]
pub struct BoxIndicator<T> {
    lo: Bounds<T>,
    hi: Bounds<T>,
}

impl<T: Scalar> BoxIndicator<T> {
    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        Self::new(Bounds::Uniform(lo), Bounds::Uniform(hi))
    }

    /// The unit ∞-norm ball [−1, 1]ⁿ.
    pub fn linf_ball() -> Self {
        Self { lo: Bounds::Uniform(-T::one()), hi: Bounds::Uniform(T::one()) }
    }

    pub fn new(lo: Bounds<T>, hi: Bounds<T>) -> Result<Self> {
        let n = match (lo.len(), hi.len()) {
            (Some(a), Some(b)) if a != b => return Err(Error::DimensionMismatch { expected: a, got: b }),
            (a, b) => a.or(b),
        };
        for i in 0..n.unwrap_or(1) {
            let (a, b) = (lo.at(i), hi.at(i));
            if a.is_nan() || b.is_nan() || a > b || a == T::infinity() || b == T::neg_infinity() {
                return Err(invalid("bounds", format!("empty or invalid interval [{a}, {b}] at {i}")));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn lower(&self, i: usize) -> T {
        self.lo.at(i)
    }

    pub fn upper(&self, i: usize) -> T {
        self.hi.at(i)
    }
}

impl<T: Scalar> ProxFn<T> for BoxIndicator<T> {
    fn dim(&self) -> Option<usize> {
        self.lo.len().or(self.hi.len())
    }
    fn value(&self, x: &Point<T>) -> Extended<T> {
        let inside = x.iter().enumerate().all(|(i, &t)| {
            let (a, b) = (self.lo.at(i), self.hi.at(i));
            le_tol(a, t) && le_tol(t, b)
        });
        Extended::indicator(inside)
    }
    fn prox(&self, _gamma: T, x: &Point<T>) -> Point<T> {
        Point::from_fn(x.dim(), |i| clamp(x[i], self.lo.at(i), self.hi.at(i)))
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        let mut acc = Extended::Finite(T::zero());
        for (i, &t) in y.iter().enumerate() {
            let b = if t > T::zero() { self.hi.at(i) } else { self.lo.at(i) };
            let term = if b.is_infinite() && t.abs() <= membership_tol::<T>() { T::zero() } else { t * b };
            acc = acc + Extended::from_scalar(term).unwrap_or(Extended::PosInf);
        }
        Some(acc)
    }
    fn prox_derivative(&self, _gamma: T, x: &Point<T>) -> Option<Point<T>> {
        Some(Point::from_fn(x.dim(), |i| {
            let t = x[i];
            if self.lo.at(i) <= t && t <= self.hi.at(i) {
                T::one()
            } else {
                T::zero()
            }
        }))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        Some(
            v.iter()
                .enumerate()
                .map(|(i, &t)| {
                    if t > self.lo.at(i) + tol && t < self.hi.at(i) - tol {
                        Some(T::zero())
                    } else {
                        None
                    }
                })
                .collect(),
        )
    }
    fn name(&self) -> String {
        "box".into()
    }
}

/// α‖x‖₂.
#[derive(Clone, Copy, Debug)]
pub struct L2Norm<T> {
    alpha: T,
}

impl<T: Scalar> L2Norm<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(invalid("alpha", format!("must be positive and finite, got {alpha}")));
        }
        Ok(Self { alpha })
    }
}

impl<T: Scalar> ProxFn<T> for L2Norm<T> {
    fn value(&self, x: &Point<T>) -> Extended<T> {
        Extended::Finite(self.alpha * x.norm())
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        prox_l2norm(x, gamma * self.alpha)
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        Some(Extended::indicator(le_tol(y.norm(), self.alpha)))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        let n = v.norm();
        if n > tol {
            Some(v.iter().map(|&t| Some(self.alpha * t / n)).collect())
        } else {
            Some(vec![None; v.dim()])
        }
    }
    fn name(&self) -> String {
        format!("l2norm(alpha={})", self.alpha)
    }
}

/// δ_{‖y‖∞ ≤ α} + (ε/2)‖y‖², the conjugate of the componentwise Huber function.
#[derive(Clone, Copy, Debug)]
pub struct HuberDual<T> {
    alpha: T,
    eps: T,
}

impl<T: Scalar> HuberDual<T> {
    pub fn new(alpha: T, eps: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(invalid("alpha", format!("must be positive and finite, got {alpha}")));
        }
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(invalid("eps", format!("must be positive and finite, got {eps}")));
        }
        Ok(Self { alpha, eps })
    }

    pub fn eps(&self) -> T {
        self.eps
    }
}

impl<T: Scalar> ProxFn<T> for HuberDual<T> {
    fn value(&self, y: &Point<T>) -> Extended<T> {
        if le_tol(y.norm_inf(), self.alpha) {
            Extended::Finite(self.eps * y.norm_sq() / T::lit(2.0))
        } else {
            Extended::PosInf
        }
    }
    fn prox(&self, gamma: T, y: &Point<T>) -> Point<T> {
        let d = T::one() + gamma * self.eps;
        y.map(|t| clamp(t / d, -self.alpha, self.alpha))
    }
    fn strong_convexity(&self) -> T {
        self.eps
    }
    fn conjugate_value(&self, x: &Point<T>) -> Option<Extended<T>> {
        let (a, e) = (self.alpha, self.eps);
        let two = T::lit(2.0);
        let v = x
            .iter()
            .map(|&t| {
                if t.abs() <= a * e {
                    t * t / (two * e)
                } else {
                    a * t.abs() - a * a * e / two
                }
            })
            .sum();
        Some(Extended::Finite(v))
    }
    fn prox_derivative(&self, gamma: T, y: &Point<T>) -> Option<Point<T>> {
        let d = T::one() + gamma * self.eps;
        Some(y.map(|t| if (t / d).abs() <= self.alpha { T::one() / d } else { T::zero() }))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        Some(v.iter().map(|&t| if t.abs() < self.alpha - tol { Some(self.eps * t) } else { None }).collect())
    }
    fn name(&self) -> String {
        format!("huber_dual(alpha={}, eps={})", self.alpha, self.eps)
    }
}

/// F* for a function F whose conjugate value is known in closed form.
#[derive(Clone)]
pub struct Conjugate<T: Scalar> {
    inner: SharedProx<T>,
}

impl<T: Scalar> Conjugate<T> {
    pub fn new(inner: SharedProx<T>) -> Result<Self> {
        let probe = Point::zeros(inner.dim().unwrap_or(1));
        if inner.conjugate_value(&probe).is_none() {
            return Err(Error::MissingConjugate(inner.name()));
        }
        Ok(Self { inner })
    }

    pub fn inner(&self) -> &SharedProx<T> {
        &self.inner
    }
}

impl<T: Scalar> ProxFn<T> for Conjugate<T> {
    fn dim(&self) -> Option<usize> {
        self.inner.dim()
    }
    fn value(&self, y: &Point<T>) -> Extended<T> {
        self.inner.conjugate_value(y).unwrap_or(Extended::PosInf)
    }
    fn prox(&self, gamma: T, y: &Point<T>) -> Point<T> {
        prox_conjugate(&*self.inner, gamma, y)
    }
    fn strong_convexity(&self) -> T {
        self.inner.conjugate_strong_convexity()
    }
    fn conjugate_value(&self, x: &Point<T>) -> Option<Extended<T>> {
        Some(self.inner.value(x))
    }
    fn conjugate_strong_convexity(&self) -> T {
        self.inner.strong_convexity()
    }
    fn prox_derivative(&self, gamma: T, y: &Point<T>) -> Option<Point<T>> {
        let w = self.inner.prox_derivative(T::one() / gamma, &y.scale(T::one() / gamma))?;
        Some(w.map(|d| T::one() - d))
    }
    fn is_zero(&self) -> bool {
        false
    }
    fn name(&self) -> String {
        format!("conjugate({})", self.inner.name())
    }
}

/// H(x₁, …, x_m) = Σ Fᵢ(xᵢ) over consecutive blocks.
#[derive(Clone)]
pub struct SeparableSum<T: Scalar> {
    blocks: Vec<(SharedProx<T>, usize)>,
}

impl<T: Scalar> SeparableSum<T> {
    pub fn new(blocks: Vec<(SharedProx<T>, usize)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(invalid("blocks", "at least one block is required"));
        }
        for (f, n) in &blocks {
            if *n == 0 {
                return Err(invalid("blocks", "block dimensions must be positive"));
            }
            if let Some(d) = f.dim() {
                if d != *n {
                    return Err(Error::DimensionMismatch { expected: *n, got: d });
                }
            }
        }
        Ok(Self { blocks })
    }

    fn total(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    fn parts(&self, x: &Point<T>) -> Vec<Point<T>> {
        let dims: Vec<usize> = self.blocks.iter().map(|b| b.1).collect();
        x.split(&dims).expect("separable sum called with a point of the wrong dimension")
    }

    fn join(parts: Vec<Point<T>>) -> Point<T> {
        let refs: Vec<&Point<T>> = parts.iter().collect();
        Point::concat(&refs)
    }
}

impl<T: Scalar> ProxFn<T> for SeparableSum<T> {
    fn dim(&self) -> Option<usize> {
        Some(self.total())
    }
    fn value(&self, x: &Point<T>) -> Extended<T> {
        self.parts(x)
            .iter()
            .zip(&self.blocks)
            .fold(Extended::Finite(T::zero()), |acc, (p, (f, _))| acc + f.value(p))
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        Self::join(self.parts(x).iter().zip(&self.blocks).map(|(p, (f, _))| f.prox(gamma, p)).collect())
    }
    fn strong_convexity(&self) -> T {
        self.blocks.iter().map(|(f, _)| f.strong_convexity()).fold(T::infinity(), T::min)
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        let mut acc = Extended::Finite(T::zero());
        for (p, (f, _)) in self.parts(y).iter().zip(&self.blocks) {
            acc = acc + f.conjugate_value(p)?;
        }
        Some(acc)
    }
    fn conjugate_strong_convexity(&self) -> T {
        self.blocks.iter().map(|(f, _)| f.conjugate_strong_convexity()).fold(T::infinity(), T::min)
    }
    fn prox_derivative(&self, gamma: T, x: &Point<T>) -> Option<Point<T>> {
        let parts = self.parts(x);
        let mut out = Vec::with_capacity(parts.len());
        for (p, (f, _)) in parts.iter().zip(&self.blocks) {
            out.push(f.prox_derivative(gamma, p)?);
        }
        Some(Self::join(out))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        let mut out = Vec::with_capacity(v.dim());
        for (p, (f, _)) in self.parts(v).iter().zip(&self.blocks) {
            out.extend(f.subgradient_selection(p, tol)?);
        }
        Some(out)
    }
    fn is_zero(&self) -> bool {
        self.blocks.iter().all(|(f, _)| f.is_zero())
    }
    fn name(&self) -> String {
        let names: Vec<String> = self.blocks.iter().map(|(f, n)| format!("{}[{n}]", f.name())).collect();
        format!("sum({})", names.join(", "))
    }
}

/// H(x) = F(λx + z).
#[derive(Clone)]
pub struct AffinePrecomposed<T: Scalar> {
    inner: SharedProx<T>,
    lambda: T,
    shift: Point<T>,
}

impl<T: Scalar> AffinePrecomposed<T> {
    pub fn new(inner: SharedProx<T>, lambda: T, shift: Point<T>) -> Result<Self> {
        if lambda == T::zero() || !lambda.is_finite() {
            return Err(invalid("lambda", "must be nonzero and finite"));
        }
        if let Some(d) = inner.dim() {
            shift.check_dim(d)?;
        }
        Ok(Self { inner, lambda, shift })
    }

    fn inner_arg(&self, x: &Point<T>) -> Point<T> {
        x.lincomb(self.lambda, T::one(), &self.shift)
    }
}

impl<T: Scalar> ProxFn<T> for AffinePrecomposed<T> {
    fn dim(&self) -> Option<usize> {
        Some(self.shift.dim())
    }
    fn value(&self, x: &Point<T>) -> Extended<T> {
        self.inner.value(&self.inner_arg(x))
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        let p = self.inner.prox(gamma * self.lambda * self.lambda, &self.inner_arg(x));
        (&p - &self.shift).scale(T::one() / self.lambda)
    }
    fn strong_convexity(&self) -> T {
        self.lambda * self.lambda * self.inner.strong_convexity()
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        let v = self.inner.conjugate_value(&y.scale(T::one() / self.lambda))?;
        Some(v + (-self.shift.dot(y) / self.lambda))
    }
    fn conjugate_strong_convexity(&self) -> T {
        self.inner.conjugate_strong_convexity() / (self.lambda * self.lambda)
    }
    fn prox_derivative(&self, gamma: T, x: &Point<T>) -> Option<Point<T>> {
        self.inner.prox_derivative(gamma * self.lambda * self.lambda, &self.inner_arg(x))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        let g = self.inner.subgradient_selection(&self.inner_arg(v), tol)?;
        Some(g.into_iter().map(|s| s.map(|t| self.lambda * t)).collect())
    }
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
    fn name(&self) -> String {
        format!("{}(λ={}·x + z)", self.inner.name(), self.lambda)
    }
}

/// F(x) + ⟨c, x⟩.
#[derive(Clone)]
pub struct AddLinear<T: Scalar> {
    inner: SharedProx<T>,
    c: Point<T>,
}

impl<T: Scalar> AddLinear<T> {
    pub fn new(inner: SharedProx<T>, c: Point<T>) -> Result<Self> {
        if let Some(d) = inner.dim() {
            c.check_dim(d)?;
        }
        Ok(Self { inner, c })
    }
}

impl<T: Scalar> ProxFn<T> for AddLinear<T> {
    fn dim(&self) -> Option<usize> {
        Some(self.c.dim())
    }
    fn value(&self, x: &Point<T>) -> Extended<T> {
        self.inner.value(x) + self.c.dot(x)
    }
    fn prox(&self, gamma: T, x: &Point<T>) -> Point<T> {
        self.inner.prox(gamma, &x.axpy(-gamma, &self.c))
    }
    fn strong_convexity(&self) -> T {
        self.inner.strong_convexity()
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        self.inner.conjugate_value(&(y - &self.c))
    }
    fn conjugate_strong_convexity(&self) -> T {
        self.inner.conjugate_strong_convexity()
    }
    fn prox_derivative(&self, gamma: T, x: &Point<T>) -> Option<Point<T>> {
        self.inner.prox_derivative(gamma, &x.axpy(-gamma, &self.c))
    }
    fn subgradient_selection(&self, v: &Point<T>, tol: T) -> Option<Vec<Option<T>>> {
        let g = self.inner.subgradient_selection(v, tol)?;
        Some(g.into_iter().zip(self.c.iter()).map(|(s, &ci)| s.map(|t| t + ci)).collect())
    }
    fn name(&self) -> String {
        format!("{} + <c,x>", self.inner.name())
    }
}
