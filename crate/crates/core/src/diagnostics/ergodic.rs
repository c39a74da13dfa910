use crate::core::Point;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum ErgodicWeights<T> {
    Uniform,
    /// One weight per point, or one fewer to drop the first point (shifted sequences).
    Explicit(Vec<T>),
}

/// Normalized weighted average of the points.
pub fn ergodic_average<T: Scalar>(points: &[Point<T>], weights: &ErgodicWeights<T>) -> Result<Point<T>> {
    let first = points.first().ok_or_else(|| invalid("points", "empty list"))?;
    let n = first.dim();
    for p in points {
        p.check_dim(n)?;
    }
    match weights {
        ErgodicWeights::Uniform => {
            let sum = points.iter().skip(1).fold(first.clone(), |acc, p| &acc + p);
            Ok(sum.scale(T::one() / T::from_usize_lossy(points.len())))
        }
        ErgodicWeights::Explicit(w) => {
            let used = match points.len().checked_sub(w.len()) {
                Some(0) => points,
                Some(1) => &points[1..],
                _ => return Err(invalid("weights", format!("{} weights for {} points", w.len(), points.len()))),
            };
            if used.is_empty() {
                return Err(invalid("points", "empty list"));
            }
            if w.iter().any(|&wi| !(wi > T::zero()) || !wi.is_finite()) {
                return Err(invalid("weights", "must be positive and finite"));
            }
            let total: T = w.iter().copied().sum();
            let sum = used.iter().zip(w).fold(Point::zeros(n), |acc, (p, &wi)| acc.axpy(wi, p));
            Ok(sum.scale(T::one() / total))
        }
    }
}

/// τ_kφ_k with φ₀ = 1 and φ_{k+1} = φ_k/ω_k², from per-iteration τ_k and ω_k.
pub fn testing_weights<T: Scalar>(taus: &[T], omegas: &[T]) -> Result<Vec<T>> {
    if taus.len() != omegas.len() {
        return Err(invalid("omegas", format!("length {} differs from taus {}", omegas.len(), taus.len())));
    }
    let mut phi = T::one();
    Ok(taus
        .iter()
        .zip(omegas)
        .map(|(&t, &w)| {
            let out = t * phi;
            phi = phi / (w * w);
            out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn p(v: &[f64]) -> Point<f64> {
        Point::from_f64s(v)
    }

    #[test]
    fn uniform_is_the_mean() {
        let pts = [p(&[1.0, 0.0]), p(&[2.0, 4.0]), p(&[6.0, -1.0])];
        assert_eq!(ergodic_average(&pts, &ErgodicWeights::Uniform).unwrap(), p(&[3.0, 1.0]));
    }

    #[test]
    fn constant_points_are_fixed() {
        let c = p(&[0.3, -7.0, 2.5]);
        let pts = vec![c.clone(); 4];
        let avg = ergodic_average(&pts, &ErgodicWeights::Explicit(vec![0.1, 5.0, 2.0, 1e-3])).unwrap();
        assert!(avg.dist(&c) < 1e-15);
    }

    #[test]
    fn geometric_testing_weights() {
        // φ_k = (1 + γτ)ᵏ, i.e. ω = 1/√(1+γτ) with constant τ.
        let (gamma, tau) = (0.5, 0.4);
        let q: f64 = 1.0 + gamma * tau;
        let w = testing_weights(&[tau; 3], &[1.0 / q.sqrt(); 3]).unwrap();
        for (k, wk) in w.iter().enumerate() {
            assert!((wk - tau * q.powi(k as i32)).abs() < 1e-15);
        }
        let pts = [p(&[1.0]), p(&[2.0]), p(&[4.0])];
        let direct = (tau * 1.0 + tau * q * 2.0 + tau * q * q * 4.0) / (tau * (1.0 + q + q * q));
        let avg = ergodic_average(&pts, &ErgodicWeights::Explicit(w)).unwrap();
        assert!((avg[0] - direct).abs() < 1e-15);
    }

    #[test]
    fn shifted_drops_first() {
        let pts = [p(&[100.0]), p(&[1.0]), p(&[3.0])];
        assert_eq!(ergodic_average(&pts, &ErgodicWeights::Explicit(vec![1.0, 1.0])).unwrap(), p(&[2.0]));
    }

    #[test]
    fn errors() {
        assert!(ergodic_average::<f64>(&[], &ErgodicWeights::Uniform).is_err());
        assert!(ergodic_average(&[p(&[1.0])], &ErgodicWeights::Explicit(vec![-1.0])).is_err());
        assert!(ergodic_average(&[p(&[1.0])], &ErgodicWeights::Explicit(vec![1.0, 1.0])).is_err());
    }

    proptest! {
        #[test]
        fn inside_the_hull(
            pts in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 3), 1..12),
            seed in prop::collection::vec(1e-3f64..10.0, 12),
        ) {
            let pts: Vec<_> = pts.iter().map(|v| p(v)).collect();
            let w = seed[..pts.len()].to_vec();
            let avg = ergodic_average(&pts, &ErgodicWeights::Explicit(w)).unwrap();
            for i in 0..3 {
                let lo = pts.iter().map(|q| q[i]).fold(f64::INFINITY, f64::min);
                let hi = pts.iter().map(|q| q[i]).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(avg[i] >= lo - 1e-12 * (1.0 + lo.abs()) && avg[i] <= hi + 1e-12 * (1.0 + hi.abs()));
            }
        }
    }
}
