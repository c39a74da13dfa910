//! Prox calculus: conjugation, separable sums, affine precomposition, Moreau–Yosida.

use crate::core::{Point, SmoothFn};
use crate::error::{invalid, Error, Result};
use crate::prox::extended::Extended;
use crate::prox::functions::ProxFn;
use crate::scalar::Scalar;

/// prox_{γF*}(x) = x − γ prox_{F/γ}(x/γ).
pub fn prox_conjugate<T: Scalar, F: ProxFn<T> + ?Sized>(f: &F, gamma: T, x: &Point<T>) -> Point<T> {
    debug_assert!(gamma > T::zero());
    let inv = T::one() / gamma;
    let p = f.prox(inv, &x.scale(inv));
    x.axpy(-gamma, &p)
}

/// (prox_F(x), prox_{F*}(x)), checking that the two parts add up to x.
pub fn moreau_decompose<T: Scalar, F: ProxFn<T> + ?Sized>(f: &F, x: &Point<T>) -> Result<(Point<T>, Point<T>)> {
    let p = f.prox(T::one(), x);
    let q = prox_conjugate(f, T::one(), x);
    let miss = (&(&p + &q) - x).norm();
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(64.0)) * (T::one() + x.norm());
    if !(miss <= tol) {
        return Err(Error::Consistency(format!("Moreau identity off by {miss} for {}", f.name())));
    }
    Ok((p, q))
}

/// Blockwise prox of Σ Fᵢ(xᵢ).
pub fn prox_separable_sum<T: Scalar>(fs: &[(&dyn ProxFn<T>, usize)], gamma: T, x: &Point<T>) -> Result<Point<T>> {
    let dims: Vec<usize> = fs.iter().map(|b| b.1).collect();
    let parts = x.split(&dims)?;
    let mut out = Vec::with_capacity(parts.len());
    for (p, (f, n)) in parts.iter().zip(fs) {
        if let Some(d) = f.dim() {
            if d != *n {
                return Err(Error::DimensionMismatch { expected: *n, got: d });
            }
        }
        out.push(f.prox(gamma, p));
    }
    let refs: Vec<&Point<T>> = out.iter().collect();
    Ok(Point::concat(&refs))
}

/// prox_{γH}(x) for H(x) = F(λx + z): λ⁻¹(prox_{γλ²F}(λx + z) − z).
pub fn prox_affine_precompose<T: Scalar, F: ProxFn<T> + ?Sized>(
    f: &F,
    lambda: T,
    z: &Point<T>,
    gamma: T,
    x: &Point<T>,
) -> Result<Point<T>> {
    if lambda == T::zero() {
        return Err(invalid("lambda", "must be nonzero"));
    }
    z.check_dim(x.dim())?;
    let p = f.prox(gamma * lambda * lambda, &x.lincomb(lambda, T::one(), z));
    Ok((&p - z).scale(T::one() / lambda))
}

/// Moreau envelope F_γ at a point together with the prox point and the Yosida gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeEval<T> {
    pub env_value: T,
    pub prox_point: Point<T>,
    pub yosida_grad: Point<T>,
}

pub fn moreau_envelope<T: Scalar, F: ProxFn<T> + ?Sized>(f: &F, gamma: T, x: &Point<T>) -> Result<EnvelopeEval<T>> {
    if !(gamma > T::zero()) {
        return Err(invalid("gamma", "must be positive"));
    }
    let p = f.prox(gamma, x);
    let fp = match f.value(&p) {
        Extended::Finite(v) => v,
        Extended::PosInf => return Err(Error::InfiniteAtProx),
    };
    let d = x - &p;
    Ok(EnvelopeEval {
        env_value: d.norm_sq() / (T::lit(2.0) * gamma) + fp,
        yosida_grad: d.scale(T::one() / gamma),
        prox_point: p,
    })
}

/// x − L⁻¹∇F(x).
pub fn prox_of_smooth<T: Scalar, F: SmoothFn<T> + ?Sized>(f: &F, x: &Point<T>) -> Result<Point<T>> {
    let l = f.lipschitz().ok_or_else(|| invalid("lipschitz", "unknown; prox_of_smooth needs L"))?;
    if !(l > T::zero()) {
        return Err(invalid("lipschitz", format!("must be positive, got {l}")));
    }
    Ok(x.axpy(-T::one() / l, &f.grad(x)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::core::{LeastSquares, Matrix, ZeroSmooth};
    use crate::prox::functions::{BoxIndicator, SquaredNorm, ZeroFn, L1};

    fn p(v: &[f64]) -> Point<f64> {
        Point::from_f64s(v)
    }

    fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-12 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        (a + b) / 2.0
    }

    #[test]
    fn conjugate_examples() {
        let abs = L1::new(1.0).unwrap();
        assert_eq!(prox_conjugate(&abs, 1.0, &p(&[2.0])).as_slice(), &[1.0]);
        assert_eq!(prox_conjugate(&abs, 1.0, &p(&[0.0])).as_slice(), &[0.0]);
        let half_sq = SquaredNorm::<f64>::unit();
        assert_eq!(prox_conjugate(&half_sq, 1.0, &p(&[3.0])).as_slice(), &[1.5]);
    }

    #[test]
    fn decomposition_examples() {
        let abs = L1::new(1.0).unwrap();
        let (a, b) = moreau_decompose(&abs, &p(&[2.0])).unwrap();
        assert_eq!((a[0], b[0]), (1.0, 1.0));
        let (a, b) = moreau_decompose(&abs, &p(&[0.5])).unwrap();
        assert_eq!((a[0], b[0]), (0.0, 0.5));
        let (a, b) = moreau_decompose(&abs, &p(&[0.0, 0.0])).unwrap();
        assert_eq!((a, b), (Point::zeros(2), Point::zeros(2)));
    }

    #[test]
    fn separable_examples() {
        let abs = L1::new(1.0).unwrap();
        let sq = SquaredNorm::<f64>::unit();
        let fs: [(&dyn ProxFn<f64>, usize); 2] = [(&abs, 1), (&sq, 1)];
        assert_eq!(prox_separable_sum(&fs, 1.0, &p(&[2.0, 3.0])).unwrap().as_slice(), &[1.0, 1.5]);

        let zero = ZeroFn;
        let zs: [(&dyn ProxFn<f64>, usize); 2] = [(&zero, 2), (&zero, 1)];
        let x = p(&[0.3, -2.0, 5.0]);
        assert_eq!(prox_separable_sum(&zs, 0.7, &x).unwrap(), x);
        assert!(prox_separable_sum(&zs, 0.7, &p(&[1.0])).is_err());

        let single: [(&dyn ProxFn<f64>, usize); 1] = [(&abs, 3)];
        let mut rng = crate::core::numerics::seeded_rng(3);
        for _ in 0..100 {
            let x: Point<f64> = crate::core::numerics::normal_point(&mut rng, 3);
            assert_eq!(prox_separable_sum(&single, 0.4, &x).unwrap(), abs.prox(0.4, &x));
        }
    }

    #[test]
    fn affine_precompose_examples() {
        let sq = SquaredNorm::<f64>::unit();
        let mut rng = crate::core::numerics::seeded_rng(5);
        for _ in 0..20 {
            let x: Point<f64> = crate::core::numerics::normal_point(&mut rng, 2);
            assert_eq!(prox_affine_precompose(&sq, 1.0, &Point::zeros(2), 0.8, &x).unwrap(), sq.prox(0.8, &x));
        }

        // H(w) = ½(2w)² = 2w²; prox_H(1) minimizes ½(w−1)² + 2w².
        let got = prox_affine_precompose(&sq, 2.0, &p(&[0.0]), 1.0, &p(&[1.0])).unwrap()[0];
        let oracle = golden_min(|w| 0.5 * (w - 1.0) * (w - 1.0) + 2.0 * w * w, -5.0, 5.0);
        // Golden section locates a smooth minimizer only to about √ε.
        assert!((got - oracle).abs() < 1e-7);
        assert!((got - 0.2).abs() < 1e-15);

        // δ_{[−1,1]}(w + 3) is the indicator of [−4, −2].
        let bx = BoxIndicator::uniform(-1.0, 1.0).unwrap();
        let got = prox_affine_precompose(&bx, 1.0, &p(&[3.0]), 1.0, &p(&[0.0])).unwrap()[0];
        let oracle = golden_min(|w| if (-4.0..=-2.0).contains(&w) { w * w } else { f64::INFINITY }, -4.0, -2.0);
        assert!((got - oracle).abs() < 1e-9);
        assert_eq!(got, -2.0);

        assert!(prox_affine_precompose(&sq, 0.0, &p(&[0.0]), 1.0, &p(&[1.0])).is_err());
    }

    #[test]
    fn envelope_examples() {
        let abs = L1::new(1.0).unwrap();
        let e = moreau_envelope(&abs, 1.0, &p(&[2.0])).unwrap();
        assert_eq!(e.env_value, 1.5);
        assert_eq!(e.yosida_grad.as_slice(), &[1.0]);
        let e = moreau_envelope(&abs, 1.0, &p(&[0.5])).unwrap();
        assert_eq!(e.env_value, 0.125);
        let e = moreau_envelope(&abs, 1.0, &p(&[0.0, 0.0])).unwrap();
        assert_eq!(e.env_value, 0.0);
        assert_eq!(e.yosida_grad, Point::zeros(2));
        assert!(moreau_envelope(&abs, 0.0, &p(&[1.0])).is_err());
    }

    #[test]
    fn envelope_of_abs_is_huber() {
        let abs = L1::new(1.0).unwrap();
        let mut rng = crate::core::numerics::seeded_rng(11);
        for gamma in [0.1, 1.0, 3.0] {
            for _ in 0..200 {
                let x: Point<f64> = crate::core::numerics::uniform_point(&mut rng, 1, -5.0, 5.0);
                let t = x[0];
                let huber = if t.abs() > gamma { t.abs() - gamma / 2.0 } else { t * t / (2.0 * gamma) };
                assert!((moreau_envelope(&abs, gamma, &x).unwrap().env_value - huber).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn smooth_prox_examples() {
        let x = p(&[1.0, -2.0, 0.5]);
        let sq = crate::core::SquaredDistance { center: Point::zeros(3), weight: 1.0 };
        assert_eq!(prox_of_smooth(&sq, &x).unwrap(), Point::zeros(3));

        let a = Matrix::from_fn(4, 4, |i, j| ((i * 4 + j) as f64 * 0.37).sin());
        let b = p(&[1.0, 0.0, -1.0, 2.0]);
        let ls = LeastSquares::new(a.clone(), b.clone()).unwrap();
        let x = p(&[0.2, -0.1, 0.4, 1.0]);
        let l = ls.lipschitz().unwrap();
        let grad = a.matvec_t(&(&a.matvec(&x) - &b));
        let want = x.axpy(-1.0 / l, &grad);
        assert!(prox_of_smooth(&ls, &x).unwrap().dist(&want) < 1e-14);

        let zero = crate::core::FnSmooth::new(3, |_| 0.0, |x: &Point<f64>| Point::zeros(x.dim()), Some(1.0));
        let x3 = p(&[1.0, -2.0, 0.5]);
        assert_eq!(prox_of_smooth(&zero, &x3).unwrap(), x3);
        let unknown = crate::core::UnknownLipschitz::<f64> { inner: Arc::new(ZeroSmooth { n: 2 }) };
        assert!(prox_of_smooth(&unknown, &p(&[1.0, 1.0])).is_err());
    }
}
