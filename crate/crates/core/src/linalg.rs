//! Exact rational and integer linear algebra.
//!
//! Everything here is dense and exact. Matrices are small (a few hundred rows at
//! most on the inputs this crate targets), so the simple row-major layout is
//! enough; what matters is that no rounding ever happens.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("SingularMatrix: no nonzero pivot in column {column}")]
    SingularMatrix { column: usize },
    #[error("DimensionMismatch: {what}")]
    DimensionMismatch { what: String },
    #[error("ResidualNotZero: back-substitution left a nonzero residual in row {row}")]
    ResidualNotZero { row: usize },
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<BigInt>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T: Clone> Matrix<T> {
    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Submatrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        m.map(|v| Rational::from_integer(v.clone()))
    }

    /// Entrywise integer view, if every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|v| v.is_integer()) {
            Some(self.map(|v| v.to_integer()))
        } else {
            None
        }
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                what: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                what: "subtraction of differently shaped matrices".into(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> RationalMatrix {
        self.map(|v| -v.clone())
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(Rational::zero(), |acc, v| acc + v))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

/// Solves `a * x = rhs` exactly for all columns of `rhs` in one elimination pass.
///
/// Gaussian elimination over the rationals, choosing the first nonzero entry of
/// each column as pivot. The result is checked by substituting back into the
/// original system; any nonzero residual is reported as an error.
pub fn solve_exact(a: &RationalMatrix, rhs: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            what: format!("coefficient matrix is {}x{}", a.rows, a.cols),
        });
    }
    if rhs.rows != a.rows {
        return Err(LinalgError::DimensionMismatch {
            what: format!("right-hand side has {} rows, expected {}", rhs.rows, a.rows),
        });
    }
    let n = a.rows;
    let m = rhs.cols;
    let mut lhs = a.clone();
    let mut x = rhs.clone();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !lhs[(r, col)].is_zero())
            .ok_or(LinalgError::SingularMatrix { column: col })?;
        lhs.swap_rows(col, pivot);
        x.swap_rows(col, pivot);

        let inv = lhs[(col, col)].recip();
        for j in col..n {
            let v = &lhs[(col, j)] * &inv;
            lhs[(col, j)] = v;
        }
        for j in 0..m {
            let v = &x[(col, j)] * &inv;
            x[(col, j)] = v;
        }
        for r in 0..n {
            if r == col || lhs[(r, col)].is_zero() {
                continue;
            }
            let factor = lhs[(r, col)].clone();
            for j in col..n {
                let v = &lhs[(col, j)] * &factor;
                lhs[(r, j)] -= v;
            }
            for j in 0..m {
                let v = &x[(col, j)] * &factor;
                x[(r, j)] -= v;
            }
        }
    }

    let back = a.mul(&x)?;
    for i in 0..n {
        if back.row(i) != rhs.row(i) {
            return Err(LinalgError::ResidualNotZero { row: i });
        }
    }
    Ok(x)
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn determinant_exact(a: &IntMatrix) -> BigInt {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

/// Determinant of a rational matrix, computed by clearing denominators row by row
/// and delegating to [`determinant_exact`].
pub fn determinant_rational(a: &RationalMatrix) -> Rational {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let lcm = a
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
        rows.push(
            a.row(i)
                .iter()
                .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
                .collect(),
        );
        scale *= lcm;
    }
    Rational::new(determinant_exact(&IntMatrix::from_rows(rows)), scale)
}

/// Cofactor-expansion determinant. Exponential; only for cross-checks on tiny matrices.
pub fn determinant_cofactor(a: &IntMatrix) -> BigInt {
    assert!(a.is_square());
    fn rec(a: &IntMatrix, rows: &[usize], cols: &mut Vec<usize>) -> BigInt {
        let Some((&r, rest)) = rows.split_first() else {
            return BigInt::one();
        };
        let mut total = BigInt::zero();
        for idx in 0..cols.len() {
            let c = cols.remove(idx);
            let entry = &a[(r, c)];
            if !entry.is_zero() {
                let minor = rec(a, rest, cols);
                if idx % 2 == 0 {
                    total += entry * minor;
                } else {
                    total -= entry * minor;
                }
            }
            cols.insert(idx, c);
        }
        total
    }
    let rows: Vec<usize> = (0..a.rows).collect();
    let mut cols: Vec<usize> = (0..a.cols).collect();
    rec(a, &rows, &mut cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int_matrix(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = RationalMatrix::identity(3);
        let rhs = RationalMatrix::from_rows(vec![
            vec![q(1, 2), q(3, 1)],
            vec![q(-7, 3), q(0, 1)],
            vec![q(5, 1), q(1, 9)],
        ]);
        assert_eq!(solve_exact(&a, &rhs).unwrap(), rhs);
    }

    #[test]
    fn diagonal_solve() {
        let a = RationalMatrix::from_rows(vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(4, 1)]]);
        let rhs = RationalMatrix::from_rows(vec![vec![q(1, 1)], vec![q(1, 1)]]);
        let x = solve_exact(&a, &rhs).unwrap();
        assert_eq!(x.to_rows(), vec![vec![q(1, 2)], vec![q(1, 4)]]);
    }

    #[test]
    fn pivoting_handles_leading_zero() {
        let a = RationalMatrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let rhs = RationalMatrix::from_rows(vec![vec![q(3, 1)], vec![q(5, 1)]]);
        let x = solve_exact(&a, &rhs).unwrap();
        assert_eq!(x.to_rows(), vec![vec![q(5, 1)], vec![q(3, 1)]]);
    }

    #[test]
    fn singular_is_rejected() {
        let a = RationalMatrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]);
        let rhs = RationalMatrix::from_rows(vec![vec![q(1, 1)], vec![q(1, 1)]]);
        assert!(matches!(
            solve_exact(&a, &rhs),
            Err(LinalgError::SingularMatrix { column: 1 })
        ));
        assert!(determinant_exact(&int_matrix(vec![vec![1, 2], vec![2, 4]])).is_zero());
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(determinant_exact(&int_matrix(vec![vec![3]])), BigInt::from(3));
        assert_eq!(
            determinant_exact(&int_matrix(vec![vec![0, 1], vec![1, 0]])),
            BigInt::from(-1)
        );
        let fig1 = int_matrix(vec![
            vec![3, -1, -1, 0],
            vec![-1, 4, 0, -1],
            vec![-1, 0, 3, -1],
            vec![0, -1, -1, 4],
        ]);
        assert_eq!(determinant_exact(&fig1), BigInt::from(95));
        assert_eq!(determinant_cofactor(&fig1), BigInt::from(95));
    }

    #[test]
    fn rational_determinant_clears_denominators() {
        let a = RationalMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]);
        assert_eq!(determinant_rational(&a), q(1, 10) - q(1, 12));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=6).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n))
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(rows in small_matrix()) {
            let m = int_matrix(rows);
            prop_assert_eq!(determinant_exact(&m), determinant_cofactor(&m));
        }

        #[test]
        fn solve_has_zero_residual(rows in small_matrix(), seed in any::<u64>()) {
            let m = int_matrix(rows);
            let n = m.rows();
            prop_assume!(!determinant_exact(&m).is_zero());
            let a = RationalMatrix::from_int(&m);
            let rhs = RationalMatrix::from_fn(n, 2, |i, j| {
                q(((seed >> ((i + j) % 48)) & 0xff) as i64 - 100, 1 + j as i64)
            });
            let x = solve_exact(&a, &rhs).unwrap();
            prop_assert_eq!(a.mul(&x).unwrap(), rhs);
        }
    }
}
