//! Lagrangian and duality gaps for min F(x) + G(Kx − c) with F = F₀ + E.

use crate::core::Point;
use crate::error::{Error, Result};
use crate::prox::Extended;
use crate::scalar::Scalar;
use crate::splitting::CompositeProblem;

/// Both gaps at a primal-dual pair.
#[derive(Clone, Debug, PartialEq)]
pub struct GapEval<T> {
    pub lagrangian_gap: Extended<T>,
    pub duality_gap: Extended<T>,
    pub at: (Point<T>, Point<T>),
}

fn finite_at_base<T: Scalar>(v: Option<Extended<T>>, what: &str) -> Result<T> {
    match v {
        Some(Extended::Finite(t)) => Ok(t),
        Some(Extended::PosInf) => Err(Error::Consistency(format!("{what} is +inf at the base point"))),
        None => Err(Error::MissingConjugate(what.into())),
    }
}

/// (F(x) + ⟨ȳ, Kx⟩ − G*(ȳ)) − (F(x̄) + ⟨y, Kx̄⟩ − G*(y)), where G* is the conjugate of
/// v ↦ G(v − c). +∞ is possible when x or y leave the domains.
pub fn lagrangian_gap<T: Scalar>(
    prob: &CompositeProblem<T>,
    u: (&Point<T>, &Point<T>),
    base: (&Point<T>, &Point<T>),
) -> Result<Extended<T>> {
    let (x, y) = u;
    let (xb, yb) = base;
    let f_xb = finite_at_base(Some(prob.f_value(xb)), "F")?;
    let gs_yb = finite_at_base(prob.outer_conjugate_value(yb), "G*")?;
    let gs_y = prob.outer_conjugate_value(y).ok_or_else(|| Error::MissingConjugate("G*".into()))?;
    let lin = yb.dot(&prob.apply_k(x)) - y.dot(&prob.apply_k(xb));
    Ok(prob.f_value(x) + gs_y + (lin - f_xb - gs_yb))
}

/// F(x) + G(Kx − c) + G*(y) + ⟨c, y⟩ + F*(−K*y).
pub fn duality_gap<T: Scalar>(prob: &CompositeProblem<T>, u: (&Point<T>, &Point<T>)) -> Result<Extended<T>> {
    let (x, y) = u;
    let primal = prob.primal_value(x).ok_or_else(|| Error::MissingConjugate("G".into()))?;
    let dual = prob.dual_value(y).ok_or_else(|| Error::MissingConjugate("F* or G*".into()))?;
    Ok(primal + dual)
}

pub fn gap_eval<T: Scalar>(
    prob: &CompositeProblem<T>,
    u: (&Point<T>, &Point<T>),
    base: (&Point<T>, &Point<T>),
) -> Result<GapEval<T>> {
    Ok(GapEval {
        lagrangian_gap: lagrangian_gap(prob, u, base)?,
        duality_gap: duality_gap(prob, u)?,
        at: (u.0.clone(), u.1.clone()),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::core::{seeded_rng, normal_point, ScaledIdentity};
    use crate::prox::{BoxIndicator, Outer, SharedProx, SquaredNorm};

    fn p(v: &[f64]) -> Point<f64> {
        Point::from_f64s(v)
    }

    // F = ½x², G = ½(· − 1)², K = Id; saddle point (½, −½).
    fn one_dim() -> CompositeProblem<f64> {
        let g: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(p(&[1.0]))).unwrap());
        CompositeProblem::new(1, Arc::new(SquaredNorm::unit()), Outer::Primal(g))
            .unwrap()
            .with_operator(Arc::new(ScaledIdentity::identity(1)))
            .unwrap()
    }

    #[test]
    fn hand_expansion() {
        let prob = one_dim();
        let (xh, yh) = (p(&[0.5]), p(&[-0.5]));
        let o = p(&[0.0]);
        // G*(y) = ½y² + y: (0 + 0 − G*(−½)) − (⅛ + 0 − 0) = ⅜ − ⅛.
        assert_eq!(lagrangian_gap(&prob, (&o, &o), (&xh, &yh)).unwrap(), Extended::Finite(0.25));
        // F(0) + G(0) + G*(0) + F*(0) = ½.
        assert_eq!(duality_gap(&prob, (&o, &o)).unwrap(), Extended::Finite(0.5));
        assert_eq!(lagrangian_gap(&prob, (&xh, &yh), (&xh, &yh)).unwrap(), Extended::Finite(0.0));
        assert_eq!(duality_gap(&prob, (&xh, &yh)).unwrap(), Extended::Finite(0.0));
    }

    #[test]
    fn nonnegative_and_ordered_at_saddle_base() {
        let prob = one_dim();
        let (xh, yh) = (p(&[0.5]), p(&[-0.5]));
        let mut rng = seeded_rng(3);
        for _ in 0..500 {
            let x = normal_point::<f64>(&mut rng, 1).scale(3.0);
            let y = normal_point::<f64>(&mut rng, 1).scale(3.0);
            let e = gap_eval(&prob, (&x, &y), (&xh, &yh)).unwrap();
            let (Extended::Finite(l), Extended::Finite(d)) = (e.lagrangian_gap, e.duality_gap) else { panic!() };
            assert!(l >= -1e-10 && l <= d + 1e-10);
        }
    }

    #[test]
    fn infinite_outside_the_domain() {
        // G = ι_[−1,1], so G*(y) = |y|; F = ½x². Saddle (0, 0).
        let g: SharedProx<f64> = Arc::new(BoxIndicator::uniform(-1.0, 1.0).unwrap());
        let prob = CompositeProblem::new(1, Arc::new(SquaredNorm::unit()), Outer::Primal(g))
            .unwrap()
            .with_operator(Arc::new(ScaledIdentity::identity(1)))
            .unwrap();
        assert_eq!(duality_gap(&prob, (&p(&[2.0]), &p(&[0.0]))).unwrap(), Extended::PosInf);
        let o = p(&[0.0]);
        assert_eq!(lagrangian_gap(&prob, (&p(&[2.0]), &p(&[1.0])), (&o, &o)).unwrap(), Extended::Finite(3.0));
    }
}
