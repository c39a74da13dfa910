//! Vectors, linear and nonlinear operators, smooth functions and the numerical utilities the
//! solvers share.

pub mod dense;
pub mod linop;
pub mod nonlinear;
pub mod numerics;
pub mod point;
pub mod smooth;

pub use dense::{Lu, Matrix};
pub use linop::{Adjoint, Diagonal, FnLinOp, ForwardDiff, LinOp, ScaledIdentity, ZeroOp};
pub use nonlinear::{CoordinateSquare, JacobianAt, LinearMap, NonlinearOp};
pub use numerics::{
    adjoint_mismatch, estimate_op_norm, frobenius_bound, grad_check, jacobian_check, normal_point, op_norm_upper_bound,
    sampled_gain, sampled_grad_lipschitz, sampled_strong_monotonicity, seeded_rng, uniform_point, Rng64,
};
pub use point::{inner, Point};
pub use smooth::{FnSmooth, LeastSquares, Quadratic, SmoothFn, SquaredDistance, UnknownLipschitz, ZeroSmooth};

pub type SharedLinOp<T> = std::sync::Arc<dyn LinOp<T>>;
pub type SharedSmooth<T> = std::sync::Arc<dyn SmoothFn<T>>;
pub type SharedNonlinear<T> = std::sync::Arc<dyn NonlinearOp<T>>;
