use std::sync::Arc;

use crate::core::linop::LinOp;
use crate::core::point::Point;
use crate::scalar::Scalar;

/// Continuously differentiable map K: ℝⁿ → ℝᵐ with directional Jacobian products.
pub trait NonlinearOp<T: Scalar>: Send + Sync {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply(&self, x: &Point<T>) -> Point<T>;
    /// ∇K(x)h
    fn jacobian_apply(&self, x: &Point<T>, h: &Point<T>) -> Point<T>;
    /// ∇K(x)*y
    fn jacobian_adjoint_apply(&self, x: &Point<T>, y: &Point<T>) -> Point<T>;
    /// Lipschitz factor of x ↦ ∇K(x), when known.
    fn lipschitz_jacobian(&self) -> Option<T>;
}

impl<T: Scalar, K: NonlinearOp<T> + ?Sized> NonlinearOp<T> for Arc<K> {
    fn in_dim(&self) -> usize {
        (**self).in_dim()
    }
    fn out_dim(&self) -> usize {
        (**self).out_dim()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        (**self).apply(x)
    }
    fn jacobian_apply(&self, x: &Point<T>, h: &Point<T>) -> Point<T> {
        (**self).jacobian_apply(x, h)
    }
    fn jacobian_adjoint_apply(&self, x: &Point<T>, y: &Point<T>) -> Point<T> {
        (**self).jacobian_adjoint_apply(x, y)
    }
    fn lipschitz_jacobian(&self) -> Option<T> {
        (**self).lipschitz_jacobian()
    }
}

/// A linear operator seen as a nonlinear one (constant Jacobian, L = 0).
#[derive(Clone)]
pub struct LinearMap<T: Scalar> {
    pub op: Arc<dyn LinOp<T>>,
}

impl<T: Scalar> NonlinearOp<T> for LinearMap<T> {
    fn in_dim(&self) -> usize {
        self.op.in_dim()
    }
    fn out_dim(&self) -> usize {
        self.op.out_dim()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        self.op.apply(x)
    }
    fn jacobian_apply(&self, _x: &Point<T>, h: &Point<T>) -> Point<T> {
        self.op.apply(h)
    }
    fn jacobian_adjoint_apply(&self, _x: &Point<T>, y: &Point<T>) -> Point<T> {
        self.op.adjoint(y)
    }
    fn lipschitz_jacobian(&self) -> Option<T> {
        Some(T::zero())
    }
}

/// K(x)ᵢ = xᵢ² where `squared[i]`, else xᵢ. ∇K is 2-Lipschitz (0 if nothing is squared).
#[derive(Clone, Debug)]
pub struct CoordinateSquare {
    pub squared: Vec<bool>,
}

impl<T: Scalar> NonlinearOp<T> for CoordinateSquare {
    fn in_dim(&self) -> usize {
        self.squared.len()
    }
    fn out_dim(&self) -> usize {
        self.squared.len()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        Point::from_fn(x.dim(), |i| if self.squared[i] { x[i] * x[i] } else { x[i] })
    }
    fn jacobian_apply(&self, x: &Point<T>, h: &Point<T>) -> Point<T> {
        Point::from_fn(x.dim(), |i| if self.squared[i] { T::lit(2.0) * x[i] * h[i] } else { h[i] })
    }
    fn jacobian_adjoint_apply(&self, x: &Point<T>, y: &Point<T>) -> Point<T> {
        self.jacobian_apply(x, y)
    }
    fn lipschitz_jacobian(&self) -> Option<T> {
        Some(if self.squared.iter().any(|&s| s) { T::lit(2.0) } else { T::zero() })
    }
}

/// The Jacobian ∇K(x) at a fixed base point as a linear operator.
pub struct JacobianAt<'a, T: Scalar> {
    pub k: &'a dyn NonlinearOp<T>,
    pub x: Point<T>,
}

impl<T: Scalar> LinOp<T> for JacobianAt<'_, T> {
    fn in_dim(&self) -> usize {
        self.k.in_dim()
    }
    fn out_dim(&self) -> usize {
        self.k.out_dim()
    }
    fn apply(&self, h: &Point<T>) -> Point<T> {
        self.k.jacobian_apply(&self.x, h)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        self.k.jacobian_adjoint_apply(&self.x, y)
    }
}
