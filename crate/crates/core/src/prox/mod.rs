//! Closed-form proximal maps, prox calculus and Moreau–Yosida regularization.

pub mod calculus;
pub mod closed_form;
pub mod extended;
pub mod functions;

pub use calculus::{
    moreau_decompose, moreau_envelope, prox_affine_precompose, prox_conjugate, prox_of_smooth, prox_separable_sum,
    EnvelopeEval,
};
pub use closed_form::{proj_interval, proj_linf_ball, prox_abs, prox_l1, prox_l2norm, prox_quadratic};
pub use extended::Extended;
pub use functions::{
    AddLinear, AffinePrecomposed, Bounds, BoxIndicator, Conjugate, HuberDual, L1, L2Norm, ProxFn, SeparableSum,
    SharedProx, SquaredNorm, ZeroFn,
};

/// Which of G or G* a primal-dual problem carries.
#[derive(Clone)]
pub enum Outer<T: crate::scalar::Scalar> {
    Primal(SharedProx<T>),
    Conjugate(SharedProx<T>),
}

impl<T: crate::scalar::Scalar> Outer<T> {
    /// prox_{σG*}(y).
    pub fn prox_dual(&self, sigma: T, y: &crate::core::Point<T>) -> crate::core::Point<T> {
        match self {
            Outer::Primal(g) => prox_conjugate(&**g, sigma, y),
            Outer::Conjugate(gs) => gs.prox(sigma, y),
        }
    }

    /// prox_{τG}(v).
    pub fn prox_primal(&self, tau: T, v: &crate::core::Point<T>) -> crate::core::Point<T> {
        match self {
            Outer::Primal(g) => g.prox(tau, v),
            Outer::Conjugate(gs) => prox_conjugate(&**gs, tau, v),
        }
    }

    /// G(v).
    pub fn primal_value(&self, v: &crate::core::Point<T>) -> Option<Extended<T>> {
        match self {
            Outer::Primal(g) => Some(g.value(v)),
            Outer::Conjugate(gs) => gs.conjugate_value(v),
        }
    }

    /// G*(y).
    pub fn dual_value(&self, y: &crate::core::Point<T>) -> Option<Extended<T>> {
        match self {
            Outer::Primal(g) => g.conjugate_value(y),
            Outer::Conjugate(gs) => Some(gs.value(y)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Outer::Primal(g) | Outer::Conjugate(g) => g.is_zero(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Outer::Primal(g) | Outer::Conjugate(g) => g.dim(),
        }
    }

    /// Strong convexity of G*.
    pub fn dual_strong_convexity(&self) -> T {
        match self {
            Outer::Primal(g) => g.conjugate_strong_convexity(),
            Outer::Conjugate(gs) => gs.strong_convexity(),
        }
    }
}
