use std::fmt;
use std::ops::Add;

use crate::scalar::Scalar;

/// Value in ℝ ∪ {+∞}. −∞ is not representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    PosInf,
}

impl<T: Scalar> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::PosInf => None,
        }
    }

    /// The value as a float, with +∞ mapped to `T::infinity()`.
    pub fn to_scalar(self) -> T {
        self.finite().unwrap_or_else(T::infinity)
    }

    /// 0 inside the set, +∞ outside.
    pub fn indicator(inside: bool) -> Self {
        if inside {
            Extended::Finite(T::zero())
        } else {
            Extended::PosInf
        }
    }

    /// Maps a float, sending +∞ to `PosInf`. NaN and −∞ yield `None`.
    pub fn from_scalar(v: T) -> Option<Self> {
        if v.is_nan() || v == T::neg_infinity() {
            None
        } else if v == T::infinity() {
            Some(Extended::PosInf)
        } else {
            Some(Extended::Finite(v))
        }
    }
}

impl<T: Scalar> Add for Extended<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::PosInf,
        }
    }
}

impl<T: Scalar> Add<T> for Extended<T> {
    type Output = Self;
    fn add(self, rhs: T) -> Self {
        self + Extended::Finite(rhs)
    }
}

impl<T: Scalar> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::PosInf => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs() {
        let a = Extended::Finite(2.0f64);
        assert_eq!(a + Extended::Finite(3.0), Extended::Finite(5.0));
        assert_eq!(a + Extended::PosInf, Extended::PosInf);
        assert_eq!(Extended::<f64>::PosInf + 1.0, Extended::PosInf);
        assert_eq!(Extended::from_scalar(f64::NEG_INFINITY), None);
        assert_eq!(Extended::from_scalar(f64::INFINITY), Some(Extended::PosInf));
    }
}
