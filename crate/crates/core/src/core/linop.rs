use std::sync::Arc;

use crate::core::dense::Matrix;
use crate::core::point::Point;
use crate::scalar::Scalar;

/// Linear operator K: ℝⁿ → ℝᵐ with its adjoint.
pub trait LinOp<T: Scalar>: Send + Sync {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply(&self, x: &Point<T>) -> Point<T>;
    fn adjoint(&self, y: &Point<T>) -> Point<T>;

    /// Known upper bound on ‖K‖, if any.
    fn norm_bound(&self) -> Option<T> {
        None
    }

    /// `Some(s)` when the operator is s·Id.
    fn as_scaled_identity(&self) -> Option<T> {
        None
    }

    /// Dense matrix of the operator, assembled column by column.
    fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.out_dim(), self.in_dim(), |j| self.apply(&Point::basis(self.in_dim(), j)))
    }
}

impl<T: Scalar> LinOp<T> for Matrix<T> {
    fn in_dim(&self) -> usize {
        self.cols()
    }
    fn out_dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        self.matvec(x)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        self.matvec_t(y)
    }
    fn to_matrix(&self) -> Matrix<T> {
        self.clone()
    }
}

impl<T: Scalar, L: LinOp<T> + ?Sized> LinOp<T> for Arc<L> {
    fn in_dim(&self) -> usize {
        (**self).in_dim()
    }
    fn out_dim(&self) -> usize {
        (**self).out_dim()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        (**self).apply(x)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        (**self).adjoint(y)
    }
    fn norm_bound(&self) -> Option<T> {
        (**self).norm_bound()
    }
    fn as_scaled_identity(&self) -> Option<T> {
        (**self).as_scaled_identity()
    }
}

/// s·Id on ℝⁿ.
#[derive(Clone, Debug)]
pub struct ScaledIdentity<T> {
    pub n: usize,
    pub s: T,
}

impl<T: Scalar> ScaledIdentity<T> {
    pub fn identity(n: usize) -> Self {
        Self { n, s: T::one() }
    }
}

impl<T: Scalar> LinOp<T> for ScaledIdentity<T> {
    fn in_dim(&self) -> usize {
        self.n
    }
    fn out_dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        x.scale(self.s)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        y.scale(self.s)
    }
    fn norm_bound(&self) -> Option<T> {
        Some(self.s.abs())
    }
    fn as_scaled_identity(&self) -> Option<T> {
        Some(self.s)
    }
}

#[derive(Clone, Debug)]
pub struct ZeroOp {
    pub in_dim: usize,
    pub out_dim: usize,
}

impl<T: Scalar> LinOp<T> for ZeroOp {
    fn in_dim(&self) -> usize {
        self.in_dim
    }
    fn out_dim(&self) -> usize {
        self.out_dim
    }
    fn apply(&self, _x: &Point<T>) -> Point<T> {
        Point::zeros(self.out_dim)
    }
    fn adjoint(&self, _y: &Point<T>) -> Point<T> {
        Point::zeros(self.in_dim)
    }
    fn norm_bound(&self) -> Option<T> {
        Some(T::zero())
    }
}

#[derive(Clone, Debug)]
pub struct Diagonal<T> {
    pub d: Point<T>,
}

impl<T: Scalar> LinOp<T> for Diagonal<T> {
    fn in_dim(&self) -> usize {
        self.d.dim()
    }
    fn out_dim(&self) -> usize {
        self.d.dim()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        self.d.zip_map(x, |a, b| a * b)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        self.apply(y)
    }
    fn norm_bound(&self) -> Option<T> {
        Some(self.d.norm_inf())
    }
}

/// Forward difference (Kx)ᵢ = xᵢ₊₁ − xᵢ, ℝⁿ → ℝⁿ⁻¹. ‖K‖ < 2.
#[derive(Clone, Debug)]
pub struct ForwardDiff {
    pub n: usize,
}

impl<T: Scalar> LinOp<T> for ForwardDiff {
    fn in_dim(&self) -> usize {
        self.n
    }
    fn out_dim(&self) -> usize {
        self.n - 1
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        let s = x.as_slice();
        Point::from_vec(s.windows(2).map(|w| w[1] - w[0]).collect())
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        let y = y.as_slice();
        let n = self.n;
        Point::from_vec(
            (0..n)
                .map(|i| {
                    let up = if i >= 1 { y[i - 1] } else { T::zero() };
                    let down = if i < n - 1 { y[i] } else { T::zero() };
                    up - down
                })
                .collect(),
        )
    }
    fn norm_bound(&self) -> Option<T> {
        Some(T::lit(2.0))
    }
}

/// The adjoint K* of a wrapped operator.
#[derive(Clone)]
pub struct Adjoint<T: Scalar> {
    pub inner: Arc<dyn LinOp<T>>,
}

impl<T: Scalar> LinOp<T> for Adjoint<T> {
    fn in_dim(&self) -> usize {
        self.inner.out_dim()
    }
    fn out_dim(&self) -> usize {
        self.inner.in_dim()
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        self.inner.adjoint(x)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        self.inner.apply(y)
    }
    fn norm_bound(&self) -> Option<T> {
        self.inner.norm_bound()
    }
    fn as_scaled_identity(&self) -> Option<T> {
        self.inner.as_scaled_identity()
    }
}

type MapFn<T> = Box<dyn Fn(&Point<T>) -> Point<T> + Send + Sync>;

/// Operator given by a pair of closures, for structured operators that should not be stored densely.
pub struct FnLinOp<T> {
    in_dim: usize,
    out_dim: usize,
    apply: MapFn<T>,
    adjoint: MapFn<T>,
    norm_bound: Option<T>,
}

impl<T: Scalar> FnLinOp<T> {
    pub fn new(
        in_dim: usize,
        out_dim: usize,
        apply: impl Fn(&Point<T>) -> Point<T> + Send + Sync + 'static,
        adjoint: impl Fn(&Point<T>) -> Point<T> + Send + Sync + 'static,
    ) -> Self {
        Self { in_dim, out_dim, apply: Box::new(apply), adjoint: Box::new(adjoint), norm_bound: None }
    }

    pub fn with_norm_bound(mut self, bound: T) -> Self {
        self.norm_bound = Some(bound);
        self
    }
}

impl<T: Scalar> LinOp<T> for FnLinOp<T> {
    fn in_dim(&self) -> usize {
        self.in_dim
    }
    fn out_dim(&self) -> usize {
        self.out_dim
    }
    fn apply(&self, x: &Point<T>) -> Point<T> {
        (self.apply)(x)
    }
    fn adjoint(&self, y: &Point<T>) -> Point<T> {
        (self.adjoint)(y)
    }
    fn norm_bound(&self) -> Option<T> {
        self.norm_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_diff_values() {
        let k = ForwardDiff { n: 4 };
        let x = Point::<f64>::from_f64s(&[1.0, 3.0, 2.0, 2.0]);
        assert_eq!(LinOp::<f64>::apply(&k, &x).as_slice(), &[2.0, -1.0, 0.0]);
        let y = Point::from_f64s(&[1.0, 2.0, 3.0]);
        assert_eq!(LinOp::<f64>::adjoint(&k, &y).as_slice(), &[-1.0, -1.0, -1.0, 3.0]);
    }

    #[test]
    fn to_matrix_matches_apply() {
        let k = ForwardDiff { n: 3 };
        let m: Matrix<f64> = k.to_matrix();
        assert_eq!(m, Matrix::from_rows(&[&[-1.0, 1.0, 0.0], &[0.0, -1.0, 1.0]]).unwrap());
    }
}
