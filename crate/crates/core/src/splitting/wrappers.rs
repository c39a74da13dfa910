//! Over-relaxation and inertia as wrappers that evaluate an inner step at a shifted base point.

use crate::error::Result;
use crate::scalar::Scalar;
use crate::splitting::config::LambdaSchedule;
use crate::splitting::state::SolverState;

pub trait StepFn<T: Scalar> {
    fn step(&self, s: &SolverState<T>) -> Result<SolverState<T>>;
}

impl<T: Scalar, F: Fn(&SolverState<T>) -> Result<SolverState<T>>> StepFn<T> for F {
    fn step(&self, s: &SolverState<T>) -> Result<SolverState<T>> {
        self(s)
    }
}

impl<T: Scalar> StepFn<T> for Box<dyn StepFn<T> + '_> {
    fn step(&self, s: &SolverState<T>) -> Result<SolverState<T>> {
        (**self).step(s)
    }
}

/// Runs the inner step at zᵏ (and vᵏ for a dual variable), then
/// z^{k+1} = λ_k⁻¹x^{k+1} + (1 − λ_k⁻¹)zᵏ.
pub struct Overrelaxed<S, T> {
    inner: S,
    schedule: LambdaSchedule<T>,
    lower: T,
}

pub fn overrelax_wrap<T: Scalar, S: StepFn<T>>(inner: S, schedule: LambdaSchedule<T>, lower: T) -> Overrelaxed<S, T> {
    Overrelaxed { inner, schedule, lower }
}

impl<T: Scalar, S: StepFn<T>> StepFn<T> for Overrelaxed<S, T> {
    fn step(&self, s: &SolverState<T>) -> Result<SolverState<T>> {
        let z = s.z.clone().unwrap_or_else(|| s.x.clone());
        let v = s.v.clone().or_else(|| s.y.clone());
        let mut base = s.clone();
        base.x = z.clone();
        base.y = v.clone();
        let mut out = self.inner.step(&base)?;
        let lam = self.schedule.at(s.k, self.lower);
        let il = T::one() / lam;
        out.z = Some(out.x.lincomb(il, T::one() - il, &z));
        out.v = match (&out.y, &v) {
            (Some(y), Some(v)) => Some(y.lincomb(il, T::one() - il, v)),
            _ => None,
        };
        out.lambda_k = lam;
        Ok(out)
    }
}

/// λ_{k+1} = 2/(1 + √(1 + 4λ_k⁻²)).
pub fn inertia_next<T: Scalar>(lambda: T) -> T {
    let four = T::lit(4.0);
    T::lit(2.0) / (T::one() + (T::one() + four / (lambda * lambda)).sqrt())
}

/// α_{k+1} = λ_{k+1}(λ_k⁻¹ − 1).
pub fn inertia_alpha<T: Scalar>(lambda: T, lambda_next: T) -> T {
    lambda_next * (T::one() / lambda - T::one())
}

/// λ₀ = 1, λ₁, …, λ_n.
pub fn inertia_sequence<T: Scalar>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    for k in 0..n {
        let next = inertia_next(out[k]);
        out.push(next);
    }
    out
}

/// Runs the inner step at x̄ᵏ and extrapolates x̄^{k+1} = x^{k+1} + α_{k+1}(x^{k+1} − xᵏ).
pub struct Inertial<S> {
    inner: S,
}

pub fn inertia_wrap<T: Scalar, S: StepFn<T>>(inner: S) -> Inertial<S> {
    Inertial { inner }
}

impl<T: Scalar, S: StepFn<T>> StepFn<T> for Inertial<S> {
    fn step(&self, s: &SolverState<T>) -> Result<SolverState<T>> {
        let mut base = s.clone();
        base.x = s.x_bar.clone().unwrap_or_else(|| s.x.clone());
        let mut out = self.inner.step(&base)?;
        let lam_next = inertia_next(s.lambda_k);
        let alpha = inertia_alpha(s.lambda_k, lam_next);
        out.x_bar = Some(out.x.axpy(alpha, &(&out.x - &s.x)));
        out.x_prev = Some(s.x.clone());
        out.lambda_k = lam_next;
        Ok(out)
    }
}

/// Lower bound on λ for over-relaxed proximal point: ½.
pub fn overrelax_bound_pp<T: Scalar>() -> T {
    T::lit(0.5)
}

/// Lower bound on λ for over-relaxed forward-backward: ¼(1 + √(1 + 8Lτ)).
pub fn overrelax_bound_fb<T: Scalar>(l: T, tau: T) -> T {
    (T::one() + (T::one() + T::lit(8.0) * l * tau).sqrt()) / T::lit(4.0)
}

/// Lower bound on λ for over-relaxed PDPS: ¼(1 + √(1 + 8Lτ/(1 − τσ‖K‖²))); needs τσ‖K‖² < 1.
pub fn overrelax_bound_pdps<T: Scalar>(l: T, tau: T, sigma: T, k_norm: T) -> T {
    let q = T::one() - tau * sigma * k_norm * k_norm;
    (T::one() + (T::one() + T::lit(8.0) * l * tau / q).sqrt()) / T::lit(4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Point, SquaredDistance};
    use crate::prox::{SquaredNorm, L1};
    use crate::splitting::steps::{fb_step, pp_step};

    #[test]
    fn inertia_examples() {
        let l1: f64 = inertia_next(1.0);
        assert!((l1 - 0.618_033_988_749_894_9).abs() < 1e-15);
        assert_eq!(inertia_alpha(1.0, l1), 0.0);
        let seq = inertia_sequence::<f64>(10_000);
        for (n, &l) in seq.iter().enumerate() {
            assert!(1.0 / l >= (n + 2) as f64 / 2.0, "λ_{n}");
        }
        // The sharper N + 1 bound already fails at N = 1.
        assert!(1.0 / seq[1] < 2.0);
        for k in 1..seq.len() {
            assert!(seq[k] < seq[k - 1]);
            let (a, b) = (1.0 / seq[k], 1.0 / seq[k - 1]);
            assert!(((a * a - a) - b * b).abs() <= 1e-12 * b * b);
        }
    }

    #[test]
    fn unit_lambda_is_the_plain_method() {
        let g = L1::new(0.3).unwrap();
        let f = SquaredDistance { center: Point::from_f64s(&[1.0, -2.0, 0.1]), weight: 1.5 };
        let plain = |s: &SolverState<f64>| Ok(fb_step(s, &g, &f, 0.5));
        let wrapped = overrelax_wrap(plain, LambdaSchedule::Constant(1.0), 1.0);
        let (mut a, mut b) = (SolverState::new(Point::from_f64s(&[3.0, 3.0, 3.0]), 0.5), None::<SolverState<f64>>);
        b.get_or_insert(a.clone());
        let mut b = b.unwrap();
        for _ in 0..50 {
            a = plain(&a).unwrap();
            b = wrapped.step(&b).unwrap();
            assert_eq!(a.x, b.x);
            assert_eq!(b.z.as_ref(), Some(&b.x));
        }
    }

    #[test]
    fn overrelaxed_pp_example() {
        let sq = SquaredNorm::<f64>::unit();
        let step = overrelax_wrap(|s: &SolverState<f64>| Ok(pp_step(s, &sq, 1.0)), LambdaSchedule::Constant(0.5), 0.5);
        let s = step.step(&SolverState::new(Point::from_f64s(&[1.0]), 1.0)).unwrap();
        assert_eq!(s.x.as_slice(), &[0.5]);
        assert_eq!(s.z.as_ref().unwrap().as_slice(), &[0.0]);

        let fixed = SolverState::new(Point::from_f64s(&[0.0]), 1.0);
        let s = step.step(&fixed).unwrap();
        assert_eq!((s.x[0], s.z.as_ref().unwrap()[0]), (0.0, 0.0));
    }

    #[test]
    fn first_inertial_step_is_plain() {
        let sq = SquaredNorm::<f64>::unit();
        let plain = |s: &SolverState<f64>| Ok(pp_step(s, &sq, 0.7));
        let s0 = SolverState::new(Point::from_f64s(&[2.0, -1.0]), 0.7);
        let s = inertia_wrap(plain).step(&s0).unwrap();
        assert_eq!(s.x, plain(&s0).unwrap().x);
        assert_eq!(s.x_bar.as_ref(), Some(&s.x));
    }

    #[test]
    fn bounds() {
        assert_eq!(overrelax_bound_pp::<f64>(), 0.5);
        assert_eq!(overrelax_bound_fb(0.0f64, 1.0), 0.5);
        assert_eq!(overrelax_bound_fb(1.0f64, 1.0), 1.0);
        assert_eq!(overrelax_bound_pdps(0.0f64, 0.5, 0.5, 1.0), 0.5);
    }
}
