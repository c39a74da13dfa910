use crate::core::Point;
use crate::scalar::Scalar;
use crate::splitting::config::Algo;

/// Iterate and step parameters carried between steps.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState<T> {
    pub x: Point<T>,
    /// Dual variable; for DRS the second prox point, for ADMM the multiplier.
    pub y: Option<Point<T>>,
    /// DRS or ADMM shadow variable, or the over-relaxed primal point.
    pub z: Option<Point<T>>,
    /// Over-relaxed dual point.
    pub v: Option<Point<T>>,
    pub x_prev: Option<Point<T>>,
    /// Inertial base point.
    pub x_bar: Option<Point<T>>,
    pub lambda_k: T,
    pub tau_k: T,
    pub sigma_k: T,
    pub omega_k: T,
    pub k: usize,
    /// Fixed-point residual of the most recent step.
    pub residual: T,
}

impl<T: Scalar> SolverState<T> {
    pub fn new(x: Point<T>, tau: T) -> Self {
        Self {
            x,
            y: None,
            z: None,
            v: None,
            x_prev: None,
            x_bar: None,
            lambda_k: T::one(),
            tau_k: tau,
            sigma_k: T::zero(),
            omega_k: T::one(),
            k: 0,
            residual: T::infinity(),
        }
    }

    pub fn with_dual(mut self, y: Point<T>, sigma: T) -> Self {
        self.y = Some(y);
        self.sigma_k = sigma;
        self
    }

    pub fn with_shadow(mut self, z: Point<T>) -> Self {
        self.z = Some(z);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && [&self.y, &self.z, &self.v, &self.x_bar].iter().all(|p| p.as_ref().is_none_or(Point::is_finite))
    }
}

/// One row of the iteration log; k counts completed steps.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord<T> {
    pub k: usize,
    pub residual: T,
    pub primal_value: Option<T>,
    pub dual_value: Option<T>,
    pub gap: Option<T>,
    pub dist_to_ref: Option<T>,
    pub tau: T,
    pub sigma: Option<T>,
    pub omega: Option<T>,
    pub lambda: Option<T>,
}

/// How the gap column was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapKind {
    /// J(xᵏ) − J* against the reference value.
    Value,
    /// Lagrangian gap at the ergodic pair: uniform or λ-weighted averages of (x^{k+1}, y^{k+1}).
    ErgodicUniform,
    /// Lagrangian gap at the τφ-weighted averages of x^{k+1} and of the unshifted duals y^k.
    ErgodicAccelerated,
    None,
}

#[derive(Clone, Debug)]
pub struct Trace<T> {
    pub algo: Algo,
    pub records: Vec<TraceRecord<T>>,
    /// (xᵏ, yᵏ) for k = 0..=N when iterate recording is on.
    pub iterates: Vec<(Point<T>, Option<Point<T>>)>,
    pub gap_kind: GapKind,
    pub converged: bool,
    pub final_state: SolverState<T>,
    /// Number of +∞ gap values that were left out of the gap column.
    pub infinite_gaps: usize,
}

impl<T: Scalar> Trace<T> {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_residual(&self) -> T {
        self.records.last().map_or(T::infinity(), |r| r.residual)
    }

    /// The column as (k, value) pairs, skipping absent entries.
    pub fn column(&self, f: impl Fn(&TraceRecord<T>) -> Option<T>) -> Vec<(usize, T)> {
        self.records.iter().filter_map(|r| f(r).map(|v| (r.k, v))).collect()
    }
}
