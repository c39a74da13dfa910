//! Scalar and componentwise proximal maps with closed forms.

use crate::core::Point;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// prox of γ·½t²: t/(1+γ).
pub fn prox_quadratic<T: Scalar>(t: T, gamma: T) -> T {
    debug_assert!(gamma > T::zero());
    t / (T::one() + gamma)
}

/// Soft-shrinkage, the prox of γ|·|. |t| ≤ γ maps to 0.
pub fn prox_abs<T: Scalar>(t: T, gamma: T) -> T {
    debug_assert!(gamma > T::zero());
    if t > gamma {
        t - gamma
    } else if t < -gamma {
        t + gamma
    } else {
        T::zero()
    }
}

/// Projection of t onto [a, b].
pub fn proj_interval<T: Scalar>(t: T, a: T, b: T) -> Result<T> {
    if !(a <= b) {
        return Err(invalid("interval", format!("lower bound {a} exceeds upper bound {b}")));
    }
    Ok(clamp(t, a, b))
}

pub(crate) fn clamp<T: Scalar>(t: T, a: T, b: T) -> T {
    if t < a {
        a
    } else if t > b {
        b
    } else {
        t
    }
}

/// Componentwise soft-shrinkage, the prox of γ‖·‖₁.
pub fn prox_l1<T: Scalar>(x: &Point<T>, gamma: T) -> Point<T> {
    x.map(|t| prox_abs(t, gamma))
}

/// Projection onto the unit ∞-norm ball.
pub fn proj_linf_ball<T: Scalar>(x: &Point<T>) -> Point<T> {
    x.map(|t| clamp(t, -T::one(), T::one()))
}

/// Block soft-shrinkage (1 − γ/‖x‖)⁺x, the prox of γ‖·‖₂.
pub fn prox_l2norm<T: Scalar>(x: &Point<T>, gamma: T) -> Point<T> {
    debug_assert!(gamma > T::zero());
    let n = x.norm();
    if n <= gamma {
        Point::zeros(x.dim())
    } else {
        x.scale(T::one() - gamma / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_examples() {
        assert_eq!(prox_quadratic(3.0, 2.0), 1.0);
        assert_eq!(prox_quadratic(0.0, 1.0), 0.0);
        assert_eq!(prox_quadratic(-4.0, 1.0), -2.0);

        assert_eq!(prox_abs(2.0, 0.5), 1.5);
        assert_eq!(prox_abs(0.3, 0.5), 0.0);
        assert_eq!(prox_abs(0.0, 7.0), 0.0);
        assert_eq!(prox_abs(0.5, 0.5), 0.0);

        assert_eq!(proj_interval(2.0, -1.0, 1.0).unwrap(), 1.0);
        assert_eq!(proj_interval(0.5, -1.0, 1.0).unwrap(), 0.5);
        assert_eq!(proj_interval(-3.0, -1.0, 1.0).unwrap(), -1.0);
        assert!(proj_interval(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn vector_examples() {
        let x = Point::<f64>::from_f64s(&[2.0, -0.3, -1.5]);
        assert_eq!(prox_l1(&x, 0.5).as_slice(), &[1.5, 0.0, -1.0]);
        assert_eq!(prox_l1(&Point::<f64>::zeros(3), 1.0), Point::zeros(3));

        assert_eq!(proj_linf_ball(&Point::<f64>::from_f64s(&[3.0, -0.5])).as_slice(), &[1.0, -0.5]);
        assert_eq!(proj_linf_ball(&Point::<f64>::from_f64s(&[-10.0, 10.0])).as_slice(), &[-1.0, 1.0]);
        let inside = Point::<f64>::from_f64s(&[0.2, -1.0, 1.0]);
        assert_eq!(proj_linf_ball(&inside), inside);

        // ‖(3,4)‖ = 5 so the shrink factor is 1 − 1/5 = 0.8.
        let p = prox_l2norm(&Point::<f64>::from_f64s(&[3.0, 4.0]), 1.0);
        assert!((p[0] - 2.4).abs() < 1e-15 && (p[1] - 3.2).abs() < 1e-15);
        assert_eq!(prox_l2norm(&Point::<f64>::from_f64s(&[0.3, 0.4]), 1.0), Point::zeros(2));
        assert_eq!(prox_l2norm(&Point::<f64>::zeros(2), 0.7), Point::zeros(2));
    }

    #[test]
    fn l1_prox_moves_at_most_gamma() {
        let x = Point::<f64>::from_f64s(&[0.7, -2.0, 1e-3, 0.0]);
        for gamma in [1e-1, 1e-4, 1e-9] {
            let p = prox_l1(&x, gamma);
            assert!((&p - &x).norm_inf() <= gamma + f64::EPSILON * x.norm_inf());
        }
    }
}
