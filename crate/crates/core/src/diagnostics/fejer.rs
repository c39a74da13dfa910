use std::sync::Arc;

use crate::core::{FnLinOp, LinOp, Point, SharedLinOp};
use crate::error::Result;
use crate::scalar::Scalar;

pub const FEJER_SLACK: f64 = 1e-10;

pub enum FejerNorm<'a, T> {
    Euclidean,
    /// ‖u‖²_M = ⟨Mu, u⟩ for a self-adjoint positive semidefinite M.
    Weighted(&'a dyn LinOp<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FejerReport<T> {
    pub holds: bool,
    /// Index k of the first iterate with ‖uᵏ − û‖ > ‖u^{k−1} − û‖ + slack.
    pub first_violation: Option<usize>,
    /// Squared distances to the reference.
    pub distances: Vec<T>,
}

pub fn fejer_check<T: Scalar>(iterates: &[Point<T>], reference: &Point<T>, norm: FejerNorm<'_, T>) -> Result<FejerReport<T>> {
    let mut distances = Vec::with_capacity(iterates.len());
    for u in iterates {
        u.check_dim(reference.dim())?;
        let d = u - reference;
        distances.push(match &norm {
            FejerNorm::Euclidean => d.norm_sq(),
            FejerNorm::Weighted(m) => m.apply(&d).dot(&d),
        });
    }
    let slack = T::lit(FEJER_SLACK);
    let first_violation = (1..distances.len()).find(|&k| distances[k] > distances[k - 1] + slack * (T::one() + distances[k - 1]));
    Ok(FejerReport { holds: first_violation.is_none(), first_violation, distances })
}

/// M = [[τ⁻¹Id, −K*], [−K, σ⁻¹Id]] acting on stacked (x, y).
pub fn pdps_metric<T: Scalar>(k: SharedLinOp<T>, tau: T, sigma: T) -> FnLinOp<T> {
    let (n, m) = (k.in_dim(), k.out_dim());
    let apply = move |u: &Point<T>| {
        let x = Point::from_fn(n, |i| u[i]);
        let y = Point::from_fn(m, |i| u[n + i]);
        let top = x.scale(T::one() / tau).axpy(-T::one(), &k.adjoint(&y));
        let bottom = y.scale(T::one() / sigma).axpy(-T::one(), &k.apply(&x));
        Point::concat(&[&top, &bottom])
    };
    let apply = Arc::new(apply);
    let adj = apply.clone();
    FnLinOp::new(n + m, n + m, move |u| apply(u), move |u| adj(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Matrix;

    fn p(v: &[f64]) -> Point<f64> {
        Point::from_f64s(v)
    }

    #[test]
    fn constant_trace_passes() {
        let xh = p(&[1.0, 2.0]);
        let r = fejer_check(&vec![xh.clone(); 5], &xh, FejerNorm::Euclidean).unwrap();
        assert!(r.holds && r.first_violation.is_none());
    }

    #[test]
    fn geometric_trace() {
        let trace: Vec<_> = (0..60).map(|k| p(&[0.5f64.powi(k)])).collect();
        let r = fejer_check(&trace, &p(&[0.0]), FejerNorm::Euclidean).unwrap();
        assert!(r.holds);
        // The stronger form with the step term also holds: ¼ⁿ⁺¹ + ¼ⁿ⁺¹ ≤ ¼ⁿ.
        for k in 0..59 {
            let step = (trace[k + 1][0] - trace[k][0]).powi(2);
            assert!(r.distances[k + 1] + step <= r.distances[k] + 1e-15);
        }
    }

    #[test]
    fn planted_violation() {
        let mut trace: Vec<_> = (0..30).map(|k| p(&[0.5f64.powi(k)])).collect();
        trace[17] = p(&[0.5f64.powi(15)]);
        let r = fejer_check(&trace, &p(&[0.0]), FejerNorm::Euclidean).unwrap();
        assert_eq!(r.first_violation, Some(17));
    }

    #[test]
    fn metric_matches_dense_block() {
        let k = Matrix::from_rows(&[&[1.0, 2.0], &[0.0, -1.0], &[3.0, 0.5]]).unwrap();
        let (tau, sigma) = (0.3, 0.2);
        let m = pdps_metric(Arc::new(k.clone()), tau, sigma);
        let u = p(&[1.0, -1.0, 0.5, 2.0, -3.0]);
        let x = p(&[1.0, -1.0]);
        let y = p(&[0.5, 2.0, -3.0]);
        let direct = x.norm_sq() / tau + y.norm_sq() / sigma - 2.0 * y.dot(&k.matvec(&x));
        assert!((m.apply(&u).dot(&u) - direct).abs() < 1e-12);
        let r = fejer_check(&[u.clone(), u.clone()], &Point::zeros(5), FejerNorm::Weighted(&m)).unwrap();
        assert!((r.distances[0] - direct).abs() < 1e-12);
    }
}
