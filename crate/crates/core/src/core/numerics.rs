use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::core::linop::LinOp;
use crate::core::nonlinear::NonlinearOp;
use crate::core::point::Point;
use crate::core::smooth::SmoothFn;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_NORM_TOL: f64 = 1e-6;
pub const DEFAULT_NORM_MAX_ITER: usize = 5000;
pub const DEFAULT_FD_STEP: f64 = 1e-6;
const POWER_SEED: u64 = 0x5eed_0f_90e7;

pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_point<T: Scalar>(rng: &mut Rng64, n: usize) -> Point<T> {
    Point::from_fn(n, |_| T::lit(rng.sample::<f64, _>(StandardNormal)))
}

pub fn uniform_point<T: Scalar>(rng: &mut Rng64, n: usize, lo: f64, hi: f64) -> Point<T> {
    Point::from_fn(n, |_| T::lit(rng.random_range(lo..hi)))
}

/// Power iteration on K*K from a random unit vector.
///
/// Stops when successive Rayleigh quotients rₖ ≈ ‖K‖² satisfy |rₖ₊₁ − rₖ| ≤ tol·rₖ₊₁ and
/// returns √r·(1 + tol), so the result errs on the safe side.
pub fn estimate_op_norm<T: Scalar, K: LinOp<T> + ?Sized>(k: &K, tol: T, max_iter: usize) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(invalid("tol", "must be positive"));
    }
    let mut rng = seeded_rng(POWER_SEED);
    let mut v: Point<T> = normal_point(&mut rng, k.in_dim());
    v = v.scale(T::one() / v.norm());
    let mut last = T::zero();
    for it in 0..max_iter {
        let kv = k.apply(&v);
        let r = kv.norm_sq();
        if r == T::zero() {
            return Ok(T::zero());
        }
        if !r.is_finite() {
            return Err(Error::NoConvergence { iterations: it, last: r.as_f64() });
        }
        if it > 0 && (r - last).abs() <= tol * r {
            return Ok(r.sqrt() * (T::one() + tol));
        }
        last = r;
        let w = k.adjoint(&kv);
        v = w.scale(T::one() / w.norm());
    }
    Err(Error::NoConvergence { iterations: max_iter, last: last.as_f64() })
}

/// ‖K‖_F computed from the images of all coordinate directions; always ≥ ‖K‖.
pub fn frobenius_bound<T: Scalar, K: LinOp<T> + ?Sized>(k: &K) -> T {
    (0..k.in_dim())
        .map(|j| k.apply(&Point::basis(k.in_dim(), j)).norm_sq())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// Upper bound on ‖K‖ for step-size rules: a declared bound, else power iteration with the default
/// settings, else the Frobenius bound.
pub fn op_norm_upper_bound<T: Scalar, K: LinOp<T> + ?Sized>(k: &K) -> T {
    if let Some(b) = k.norm_bound() {
        return b;
    }
    estimate_op_norm(k, T::lit(DEFAULT_NORM_TOL), DEFAULT_NORM_MAX_ITER).unwrap_or_else(|_| frobenius_bound(k))
}

/// Largest relative deviation between ∇f(x) and central differences,
/// maxᵢ |gᵢ − dᵢ| / max(1, |dᵢ|) with dᵢ = (f(x+h·eᵢ) − f(x−h·eᵢ))/(2h).
pub fn grad_check<T: Scalar, F: SmoothFn<T> + ?Sized>(f: &F, x: &Point<T>, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(invalid("h", "must be positive"));
    }
    x.check_dim(f.dim())?;
    let g = f.grad(x);
    let mut worst = T::zero();
    for i in 0..x.dim() {
        let e = Point::basis(x.dim(), i);
        let fp = f.value(&x.axpy(h, &e));
        let fm = f.value(&x.axpy(-h, &e));
        let d = (fp - fm) / (h + h);
        if d.is_nan() || g[i].is_nan() {
            return Err(Error::NanValue);
        }
        worst = worst.max((g[i] - d).abs() / d.abs().max(T::one()));
    }
    Ok(worst)
}

/// Largest relative deviation between the Jacobian of `k` at `x` and central differences,
/// taken over coordinate directions and output entries.
pub fn jacobian_check<T: Scalar, K: NonlinearOp<T> + ?Sized>(k: &K, x: &Point<T>, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(invalid("h", "must be positive"));
    }
    x.check_dim(k.in_dim())?;
    let mut worst = T::zero();
    for j in 0..x.dim() {
        let e = Point::basis(x.dim(), j);
        let d = (&k.apply(&x.axpy(h, &e)) - &k.apply(&x.axpy(-h, &e))).scale(T::one() / (h + h));
        let jv = k.jacobian_apply(x, &e);
        for i in 0..d.dim() {
            if d[i].is_nan() {
                return Err(Error::NanValue);
            }
            worst = worst.max((jv[i] - d[i]).abs() / d[i].abs().max(T::one()));
        }
    }
    Ok(worst)
}

/// max |⟨Kx, y⟩ − ⟨x, K*y⟩| / (1 + ‖x‖‖y‖) over random Gaussian pairs.
pub fn adjoint_mismatch<T: Scalar, K: LinOp<T> + ?Sized>(k: &K, trials: usize, seed: u64) -> T {
    let mut rng = seeded_rng(seed);
    (0..trials)
        .map(|_| {
            let x: Point<T> = normal_point(&mut rng, k.in_dim());
            let y: Point<T> = normal_point(&mut rng, k.out_dim());
            (k.apply(&x).dot(&y) - x.dot(&k.adjoint(&y))).abs() / (T::one() + x.norm() * y.norm())
        })
        .fold(T::zero(), T::max)
}

/// max ‖Kx‖/‖x‖ over random Gaussian vectors; a lower bound on ‖K‖.
pub fn sampled_gain<T: Scalar, K: LinOp<T> + ?Sized>(k: &K, trials: usize, seed: u64) -> T {
    let mut rng = seeded_rng(seed);
    (0..trials)
        .map(|_| {
            let x: Point<T> = normal_point(&mut rng, k.in_dim());
            k.apply(&x).norm() / x.norm()
        })
        .fold(T::zero(), T::max)
}

/// max ‖∇f(x) − ∇f(y)‖/‖x − y‖ over random pairs around `center` with the given spread.
pub fn sampled_grad_lipschitz<T: Scalar, F: SmoothFn<T> + ?Sized>(
    f: &F,
    center: &Point<T>,
    spread: T,
    trials: usize,
    seed: u64,
) -> T {
    let mut rng = seeded_rng(seed);
    (0..trials)
        .map(|_| {
            let x = center.axpy(spread, &normal_point(&mut rng, f.dim()));
            let y = center.axpy(spread, &normal_point(&mut rng, f.dim()));
            f.grad(&x).dist(&f.grad(&y)) / x.dist(&y)
        })
        .fold(T::zero(), T::max)
}

/// min ⟨∇f(x) − ∇f(y), x − y⟩/‖x − y‖² over random pairs: a sampled strong-monotonicity factor.
pub fn sampled_strong_monotonicity<T: Scalar, F: SmoothFn<T> + ?Sized>(
    f: &F,
    center: &Point<T>,
    spread: T,
    trials: usize,
    seed: u64,
) -> T {
    let mut rng = seeded_rng(seed);
    (0..trials)
        .map(|_| {
            let x = center.axpy(spread, &normal_point(&mut rng, f.dim()));
            let y = center.axpy(spread, &normal_point(&mut rng, f.dim()));
            let d = &x - &y;
            (&f.grad(&x) - &f.grad(&y)).dot(&d) / d.norm_sq()
        })
        .fold(T::infinity(), T::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::dense::Matrix;
    use crate::core::linop::{Diagonal, ScaledIdentity, ZeroOp};
    use crate::core::smooth::{FnSmooth, LeastSquares};

    #[test]
    fn op_norm_identity_diagonal_zero() {
        let tol = 1e-6;
        let id = ScaledIdentity::<f64>::identity(3);
        let r = estimate_op_norm(&id, tol, 5000).unwrap();
        assert!((r - 1.0).abs() <= 2.0 * tol);

        // Oracle: the largest ‖Ke_i‖/‖e_i‖ over coordinate vectors of a diagonal operator.
        let d = Diagonal { d: Point::<f64>::from_f64s(&[1.0, 2.0, 3.0]) };
        let oracle = (0..3).map(|i| d.apply(&Point::basis(3, i)).norm()).fold(0.0, f64::max);
        assert_eq!(oracle, 3.0);
        let r = estimate_op_norm(&d, tol, 5000).unwrap();
        assert!(r >= oracle && (r - oracle).abs() <= 2.0 * tol * oracle, "{r}");

        let z = ZeroOp { in_dim: 3, out_dim: 2 };
        assert_eq!(estimate_op_norm::<f64, _>(&z, tol, 5000).unwrap(), 0.0);
    }

    #[test]
    fn op_norm_reports_non_convergence() {
        let d = Diagonal { d: Point::<f64>::from_f64s(&[1.0, 0.999_999, 0.5]) };
        match estimate_op_norm(&d, 1e-15, 3) {
            Err(Error::NoConvergence { iterations: 3, last }) => assert!(last > 0.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(estimate_op_norm(&d, 0.0, 3).is_err());
    }

    #[test]
    fn op_norm_upper_bound_is_safe() {
        let mut rng = seeded_rng(3);
        let a = Matrix::<f64>::from_fn(7, 5, |_, _| rng.sample(StandardNormal));
        let bound = op_norm_upper_bound(&a);
        assert!(bound >= sampled_gain(&a, 2000, 4));
        assert!(frobenius_bound(&a) >= bound / (1.0 + 1e-6));
    }

    #[test]
    fn grad_check_quadratic_and_least_squares() {
        let f = FnSmooth::new(3, |x: &Point<f64>| 0.5 * x.norm_sq(), |x| x.clone(), Some(1.0));
        let x = Point::from_f64s(&[0.3, -1.2, 2.0]);
        assert!(grad_check(&f, &x, 1e-6).unwrap() < 1e-8);

        let mut rng = seeded_rng(11);
        let a = Matrix::<f64>::from_fn(5, 5, |_, _| rng.sample(StandardNormal));
        let b: Point<f64> = normal_point(&mut rng, 5);
        let ls = LeastSquares::new(a.clone(), b.clone()).unwrap();
        let x: Point<f64> = normal_point(&mut rng, 5);
        // Oracle: closed-form gradient Aᵀ(Ax − b).
        let oracle = a.transpose().matvec(&(&a.matvec(&x) - &b));
        assert!(ls.grad(&x).dist(&oracle) < 1e-12);
        assert!(grad_check(&ls, &x, 1e-6).unwrap() < 1e-6);
    }

    #[test]
    fn grad_check_catches_wrong_gradient() {
        let f = FnSmooth::new(2, |x: &Point<f64>| 0.5 * x.norm_sq(), |x| x.scale(1.1), None);
        let x = Point::from_f64s(&[2.0, -3.0]);
        assert!(grad_check(&f, &x, 1e-6).unwrap() > 0.05);
    }

    #[test]
    fn grad_check_rejects_nan_and_bad_step() {
        let f = FnSmooth::new(1, |_: &Point<f64>| f64::NAN, |x| x.clone(), None);
        let x = Point::from_f64s(&[1.0]);
        assert_eq!(grad_check(&f, &x, 1e-6), Err(Error::NanValue));
        assert!(grad_check(&f, &x, 0.0).is_err());
    }
}
