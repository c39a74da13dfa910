use std::sync::Arc;

use crate::core::dense::Matrix;
use crate::core::point::Point;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Differentiable function with (optionally known) Lipschitz gradient.
pub trait SmoothFn<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &Point<T>) -> T;
    fn grad(&self, x: &Point<T>) -> Point<T>;

    /// Lipschitz factor L of ∇F; `None` when unknown.
    fn lipschitz(&self) -> Option<T>;

    /// Strong convexity factor γ (0 when merely convex).
    fn strong_convexity(&self) -> T {
        T::zero()
    }

    /// ∇²F(x)h, when second derivatives are available.
    fn hessian_apply(&self, _x: &Point<T>, _h: &Point<T>) -> Option<Point<T>> {
        None
    }

    /// Fenchel conjugate F*(y) in closed form, when available.
    fn conjugate_value(&self, _y: &Point<T>) -> Option<T> {
        None
    }
}

impl<T: Scalar, F: SmoothFn<T> + ?Sized> SmoothFn<T> for Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &Point<T>) -> T {
        (**self).value(x)
    }
    fn grad(&self, x: &Point<T>) -> Point<T> {
        (**self).grad(x)
    }
    fn lipschitz(&self) -> Option<T> {
        (**self).lipschitz()
    }
    fn strong_convexity(&self) -> T {
        (**self).strong_convexity()
    }
    fn hessian_apply(&self, x: &Point<T>, h: &Point<T>) -> Option<Point<T>> {
        (**self).hessian_apply(x, h)
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<T> {
        (**self).conjugate_value(y)
    }
}

/// ½‖Ax − b‖².
#[derive(Clone, Debug)]
pub struct LeastSquares<T> {
    a: Matrix<T>,
    b: Point<T>,
    lipschitz: Option<T>,
}

impl<T: Scalar> LeastSquares<T> {
    /// L is set to a safe upper estimate of ‖A‖².
    pub fn new(a: Matrix<T>, b: Point<T>) -> Result<Self> {
        b.check_dim(a.rows())?;
        let norm = crate::core::numerics::op_norm_upper_bound(&a);
        Ok(Self { a, b, lipschitz: Some(norm * norm) })
    }

    pub fn with_lipschitz(mut self, lipschitz: Option<T>) -> Self {
        self.lipschitz = lipschitz;
        self
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn rhs(&self) -> &Point<T> {
        &self.b
    }
}

impl<T: Scalar> SmoothFn<T> for LeastSquares<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }
    fn value(&self, x: &Point<T>) -> T {
        let r = &self.a.matvec(x) - &self.b;
        T::lit(0.5) * r.norm_sq()
    }
    fn grad(&self, x: &Point<T>) -> Point<T> {
        self.a.matvec_t(&(&self.a.matvec(x) - &self.b))
    }
    fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }
    fn hessian_apply(&self, _x: &Point<T>, h: &Point<T>) -> Option<Point<T>> {
        Some(self.a.matvec_t(&self.a.matvec(h)))
    }
}

/// ½⟨Qx, x⟩ − ⟨b, x⟩ with Q symmetric positive semidefinite.
#[derive(Clone, Debug)]
pub struct Quadratic<T> {
    q: Matrix<T>,
    b: Point<T>,
    lipschitz: Option<T>,
    strong_convexity: T,
}

impl<T: Scalar> Quadratic<T> {
    /// L is set to a safe upper estimate of λ_max(Q); γ must be supplied by the caller.
    pub fn new(q: Matrix<T>, b: Point<T>, strong_convexity: T) -> Result<Self> {
        if q.rows() != q.cols() {
            return Err(Error::DimensionMismatch { expected: q.rows(), got: q.cols() });
        }
        b.check_dim(q.rows())?;
        let l = crate::core::numerics::op_norm_upper_bound(&q);
        Ok(Self { q, b, lipschitz: Some(l), strong_convexity })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn rhs(&self) -> &Point<T> {
        &self.b
    }
}

impl<T: Scalar> SmoothFn<T> for Quadratic<T> {
    fn dim(&self) -> usize {
        self.q.rows()
    }
    fn value(&self, x: &Point<T>) -> T {
        T::lit(0.5) * self.q.matvec(x).dot(x) - self.b.dot(x)
    }
    fn grad(&self, x: &Point<T>) -> Point<T> {
        &self.q.matvec(x) - &self.b
    }
    fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }
    fn strong_convexity(&self) -> T {
        self.strong_convexity
    }
    fn hessian_apply(&self, _x: &Point<T>, h: &Point<T>) -> Option<Point<T>> {
        Some(self.q.matvec(h))
    }
}

/// (w/2)‖x − c‖².
#[derive(Clone, Debug)]
pub struct SquaredDistance<T> {
    pub center: Point<T>,
    pub weight: T,
}

impl<T: Scalar> SmoothFn<T> for SquaredDistance<T> {
    fn dim(&self) -> usize {
        self.center.dim()
    }
    fn value(&self, x: &Point<T>) -> T {
        T::lit(0.5) * self.weight * x.dist(&self.center).powi(2)
    }
    fn grad(&self, x: &Point<T>) -> Point<T> {
        (x - &self.center).scale(self.weight)
    }
    fn lipschitz(&self) -> Option<T> {
        Some(self.weight)
    }
    fn strong_convexity(&self) -> T {
        self.weight
    }
    fn hessian_apply(&self, _x: &Point<T>, h: &Point<T>) -> Option<Point<T>> {
        Some(h.scale(self.weight))
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<T> {
        Some(self.center.dot(y) + y.norm_sq() / (T::lit(2.0) * self.weight))
    }
}

#[derive(Clone, Debug)]
pub struct ZeroSmooth {
    pub n: usize,
}

impl<T: Scalar> SmoothFn<T> for ZeroSmooth {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, _x: &Point<T>) -> T {
        T::zero()
    }
    fn grad(&self, _x: &Point<T>) -> Point<T> {
        Point::zeros(self.n)
    }
    fn lipschitz(&self) -> Option<T> {
        Some(T::zero())
    }
    fn hessian_apply(&self, _x: &Point<T>, _h: &Point<T>) -> Option<Point<T>> {
        Some(Point::zeros(self.n))
    }
}

/// Hides the Lipschitz factor of the wrapped function, e.g. to force a line search.
#[derive(Clone)]
pub struct UnknownLipschitz<T: Scalar> {
    pub inner: Arc<dyn SmoothFn<T>>,
}

impl<T: Scalar> SmoothFn<T> for UnknownLipschitz<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &Point<T>) -> T {
        self.inner.value(x)
    }
    fn grad(&self, x: &Point<T>) -> Point<T> {
        self.inner.grad(x)
    }
    fn lipschitz(&self) -> Option<T> {
        None
    }
    fn strong_convexity(&self) -> T {
        self.inner.strong_convexity()
    }
    fn hessian_apply(&self, x: &Point<T>, h: &Point<T>) -> Option<Point<T>> {
        self.inner.hessian_apply(x, h)
    }
    fn conjugate_value(&self, y: &Point<T>) -> Option<T> {
        self.inner.conjugate_value(y)
    }
}

type ValueFn<T> = Box<dyn Fn(&Point<T>) -> T + Send + Sync>;
type GradFn<T> = Box<dyn Fn(&Point<T>) -> Point<T> + Send + Sync>;

/// Smooth function from closures.
pub struct FnSmooth<T> {
    dim: usize,
    value: ValueFn<T>,
    grad: GradFn<T>,
    lipschitz: Option<T>,
}

impl<T: Scalar> FnSmooth<T> {
    pub fn new(
        dim: usize,
        value: impl Fn(&Point<T>) -> T + Send + Sync + 'static,
        grad: impl Fn(&Point<T>) -> Point<T> + Send + Sync + 'static,
        lipschitz: Option<T>,
    ) -> Self {
        Self { dim, value: Box::new(value), grad: Box::new(grad), lipschitz }
    }
}

impl<T: Scalar> SmoothFn<T> for FnSmooth<T> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &Point<T>) -> T {
        (self.value)(x)
    }
    fn grad(&self, x: &Point<T>) -> Point<T> {
        (self.grad)(x)
    }
    fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_value_and_gradient() {
        let a = Matrix::<f64>::from_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        let f = LeastSquares::new(a, Point::from_f64s(&[1.0, 1.0])).unwrap();
        let x = Point::from_f64s(&[2.0, 1.0]);
        assert_eq!(f.value(&x), 1.0);
        assert_eq!(f.grad(&x).as_slice(), &[1.0, 2.0]);
        let l = f.lipschitz().unwrap();
        assert!((4.0..4.0 * (1.0 + 1e-5)).contains(&l));
    }

    #[test]
    fn squared_distance_conjugate_is_fenchel_young_tight() {
        let f = SquaredDistance { center: Point::<f64>::from_f64s(&[1.0, -1.0]), weight: 2.0 };
        let x = Point::from_f64s(&[0.5, 0.25]);
        let g = f.grad(&x);
        let fy = f.value(&x) + f.conjugate_value(&g).unwrap();
        assert!((fy - x.dot(&g)).abs() < 1e-14);
    }
}
