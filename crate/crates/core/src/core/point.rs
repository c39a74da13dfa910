use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense vector in ℝⁿ, n ≥ 1.
///
/// [`Point::new`] enforces finiteness. Arithmetic helpers do not re-check it; solvers call
/// [`Point::is_finite`] on every iterate instead.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    data: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(data: Vec<T>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { data })
    }

    /// Builds a point from `f64` values; panics on empty or non-finite input.
    pub fn from_f64s(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| T::lit(v)).collect()).expect("valid literal point")
    }

    pub(crate) fn from_vec(data: Vec<T>) -> Self {
        debug_assert!(!data.is_empty());
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::filled(n, T::zero())
    }

    pub fn filled(n: usize, value: T) -> Self {
        assert!(n > 0, "point dimension must be positive");
        Self { data: vec![value; n] }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut p = Self::zeros(n);
        p.data[i] = T::one();
        p
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> T) -> Self {
        assert!(n > 0, "point dimension must be positive");
        Self { data: (0..n).map(f).collect() }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn norm_inf(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn norm_l1(&self) -> T {
        self.data.iter().fold(T::zero(), |s, v| s + v.abs())
    }

    pub fn dist(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
            .sqrt()
    }

    pub fn map(&self, mut f: impl FnMut(T) -> T) -> Self {
        Self { data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, mut f: impl FnMut(T, T) -> T) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self { data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// self + a·x
    pub fn axpy(&self, a: T, x: &Self) -> Self {
        self.zip_map(x, |s, v| s + a * v)
    }

    /// a·self + b·x
    pub fn lincomb(&self, a: T, b: T, x: &Self) -> Self {
        self.zip_map(x, |s, v| a * s + b * v)
    }

    /// Concatenates blocks into one point.
    pub fn concat(blocks: &[&Self]) -> Self {
        let data: Vec<T> = blocks.iter().flat_map(|b| b.data.iter().copied()).collect();
        Self::from_vec(data)
    }

    /// Splits into consecutive blocks of the given sizes.
    pub fn split(&self, dims: &[usize]) -> Result<Vec<Self>> {
        let total: usize = dims.iter().sum();
        if total != self.dim() {
            return Err(Error::DimensionMismatch { expected: total, got: self.dim() });
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::EmptyPoint);
        }
        let mut out = Vec::with_capacity(dims.len());
        let mut start = 0;
        for &d in dims {
            out.push(Self::from_vec(self.data[start..start + d].to_vec()));
            start += d;
        }
        Ok(out)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got: self.dim() })
        }
    }
}

/// Euclidean inner product ⟨x, y⟩.
pub fn inner<T: Scalar>(x: &Point<T>, y: &Point<T>) -> Result<T> {
    y.check_dim(x.dim())?;
    Ok(x.dot(y))
}

impl<T> Index<usize> for Point<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.data[i]
    }
}

impl<T: Scalar> Add for &Point<T> {
    type Output = Point<T>;
    fn add(self, rhs: &Point<T>) -> Point<T> {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &Point<T> {
    type Output = Point<T>;
    fn sub(self, rhs: &Point<T>) -> Point<T> {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Neg for &Point<T> {
    type Output = Point<T>;
    fn neg(self) -> Point<T> {
        self.map(|v| -v)
    }
}

impl<T: Scalar> Mul<T> for &Point<T> {
    type Output = Point<T>;
    fn mul(self, s: T) -> Point<T> {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_examples() {
        let x = Point::<f64>::from_f64s(&[1.0, 2.0]);
        let y = Point::from_f64s(&[3.0, 4.0]);
        assert_eq!(inner(&x, &y).unwrap(), 11.0);
        let z = Point::<f64>::from_f64s(&[0.0, 0.0]);
        assert_eq!(inner(&z, &Point::from_f64s(&[5.0, -7.0])).unwrap(), 0.0);
        assert!(inner(&x, &Point::from_f64s(&[1.0])).is_err());
    }

    #[test]
    fn constructor_rejects_bad_entries() {
        assert_eq!(Point::<f64>::new(vec![]), Err(Error::EmptyPoint));
        assert_eq!(Point::new(vec![1.0, f64::NAN]), Err(Error::NonFinite { index: 1 }));
        assert_eq!(Point::new(vec![f64::INFINITY]), Err(Error::NonFinite { index: 0 }));
    }

    #[test]
    fn split_and_concat_round_trip() {
        let x = Point::<f64>::from_f64s(&[1.0, 2.0, 3.0]);
        let parts = x.split(&[1, 2]).unwrap();
        assert_eq!(parts[1].as_slice(), &[2.0, 3.0]);
        assert_eq!(Point::concat(&[&parts[0], &parts[1]]), x);
        assert!(x.split(&[2, 2]).is_err());
    }

    #[test]
    fn norms() {
        let x = Point::<f32>::from_f64s(&[3.0, -4.0]);
        assert_eq!(x.norm(), 5.0);
        assert_eq!(x.norm_inf(), 4.0);
        assert_eq!(x.norm_l1(), 7.0);
    }
}
