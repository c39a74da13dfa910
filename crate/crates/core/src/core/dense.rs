use crate::core::point::Point;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("shape", "matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| T::lit(v))).collect();
        Self::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn diag(d: &Point<T>) -> Self {
        let mut m = Self::zeros(d.dim(), d.dim());
        for i in 0..d.dim() {
            m.set(i, i, d[i]);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Assembles the matrix of a linear map from its action on the coordinate basis.
    pub fn from_columns(rows: usize, cols: usize, mut col: impl FnMut(usize) -> Point<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            let c = col(j);
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &Point<T>) -> Point<T> {
        debug_assert_eq!(x.dim(), self.cols);
        let xs = x.as_slice();
        Point::from_vec(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(xs).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
                .collect(),
        )
    }

    pub fn matvec_t(&self, y: &Point<T>) -> Point<T> {
        debug_assert_eq!(y.dim(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let yi = y[i];
            if yi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a * yi;
            }
        }
        Point::from_vec(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// AᵀA
    pub fn gram(&self) -> Self {
        let mut g = Self::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                let a = row[i];
                if a == T::zero() {
                    continue;
                }
                for j in i..self.cols {
                    let v = g.get(i, j) + a * row[j];
                    g.set(i, j, v);
                }
            }
        }
        for i in 0..self.cols {
            for j in 0..i {
                let v = g.get(j, i);
                g.set(i, j, v);
            }
        }
        g
    }

    pub fn add_scaled_identity(&self, s: T) -> Result<Self> {
        if self.rows != self.cols {
            return Err(invalid("matrix", "not square"));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) + s;
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |s, &v| s + v * v).sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |s, i| s + self.get(i, j).abs()))
            .fold(T::zero(), T::max)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.is_empty() {
            return Err(invalid("cols", "empty selection"));
        }
        Ok(Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j])))
    }
}

/// Condition numbers above this are treated as singular.
pub fn condition_limit<T: Scalar>() -> T {
    T::lit(1e14).min(T::one() / T::epsilon())
}

/// LU factorization with partial pivoting, PA = LU.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    lu: Matrix<T>,
    perm: Vec<usize>,
    condition: T,
}

impl<T: Scalar> Lu<T> {
    /// Factors `a`. Fails with [`Error::Singular`] (iteration 0) when a pivot vanishes or the
    /// 1-norm condition number exceeds [`condition_limit`].
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        if a.rows != a.cols {
            return Err(invalid("matrix", "LU needs a square matrix"));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let anorm = a.norm_1();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold((k, -T::one()), |best, c| if c.1 > best.1 { c } else { best });
            if pmax == T::zero() || !pmax.is_finite() {
                return Err(Error::Singular { iteration: 0, condition: f64::INFINITY });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, t);
                }
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let f = lu.get(i, k) / pivot;
                lu.set(i, k, f);
                if f == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu.get(i, j) - f * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        let mut out = Self { n, lu, perm, condition: T::zero() };
        // Exact ‖A⁻¹‖₁ from the n unit solves; affordable at the sizes this is meant for.
        let mut inv_norm = T::zero();
        for j in 0..n {
            let col = out.solve_unchecked(&Point::basis(n, j));
            inv_norm = inv_norm.max(col.norm_l1());
        }
        out.condition = anorm * inv_norm;
        if !out.condition.is_finite() || out.condition > condition_limit::<T>() {
            return Err(Error::Singular { iteration: 0, condition: out.condition.as_f64() });
        }
        Ok(out)
    }

    pub fn condition(&self) -> T {
        self.condition
    }

    pub fn solve(&self, b: &Point<T>) -> Result<Point<T>> {
        b.check_dim(self.n)?;
        Ok(self.solve_unchecked(b))
    }

    fn solve_unchecked(&self, b: &Point<T>) -> Point<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu.get(i, j) * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu.get(i, j) * x[j];
            }
            x[i] = s / self.lu.get(i, i);
        }
        Point::from_vec(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_and_transpose_agree() {
        let a = Matrix::<f64>::from_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]).unwrap();
        let x = Point::from_f64s(&[1.0, 0.0, -1.0]);
        assert_eq!(a.matvec(&x).as_slice(), &[-2.0, -2.0]);
        let y = Point::from_f64s(&[1.0, 1.0]);
        assert_eq!(a.matvec_t(&y), a.transpose().matvec(&y));
        assert_eq!(a.gram(), a.transpose().matmul(&a).unwrap());
    }

    #[test]
    fn lu_solves_with_pivoting() {
        let a = Matrix::<f64>::from_rows(&[&[0.0, 2.0], &[3.0, 1.0]]).unwrap();
        let lu = Lu::factor(&a).unwrap();
        let x = lu.solve(&Point::from_f64s(&[4.0, 5.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        // ‖A‖₁ = 3, A⁻¹ = [[-1/6, 1/3], [1/2, 0]] so ‖A⁻¹‖₁ = 2/3.
        assert!((lu.condition() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lu_flags_singular_and_ill_conditioned() {
        let s = Matrix::<f64>::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(Lu::factor(&s), Err(Error::Singular { .. })));
        let ill = Matrix::<f64>::from_rows(&[&[1.0, 0.0], &[0.0, 1e-15]]).unwrap();
        assert!(matches!(Lu::factor(&ill), Err(Error::Singular { .. })));
    }
}
