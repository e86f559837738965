use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "IntMatrix dimensions must be positive");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::structural("matrix must have at least one row and one column"));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::structural("ragged matrix rows"));
        }
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::structural(format!(
                "cannot shape {} entries as a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::structural(format!(
                "vector of length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    *o += a * xj;
                }
            }
        }
        Ok(out)
    }

    /// `(A | b)` with `b` appended as a final column.
    pub fn augment(&self, b: &[BigInt]) -> Result<IntMatrix> {
        if b.len() != self.rows {
            return Err(Error::structural(format!(
                "right-hand side of length {} does not match {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            out[(i, self.cols)] = b[i].clone();
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::structural(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(bareiss_determinant(self.to_rows()))
    }

    /// Exact rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.to_rows())
    }

    /// `Π_k ‖column k‖₂²`, the square of the Hadamard bound on `|det|`.
    pub fn hadamard_bound_squared(&self) -> BigInt {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &self[(i, j)] * &self[(i, j)]).sum::<BigInt>())
            .product()
    }

    pub(crate) fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = (&m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::identity(3).rank(), 3);
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(mat(&[vec![1, 2], vec![2, 4], vec![3, 6]]).rank(), 1);
        assert_eq!(mat(&[vec![0, 1, 2], vec![0, 2, 4], vec![1, 0, 0]]).rank(), 2);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(mat(&[vec![1, 2], vec![3, 4]]).determinant().unwrap(), BigInt::from(-2));
        assert_eq!(mat(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(
            mat(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).determinant().unwrap(),
            BigInt::from(6)
        );
        assert!(mat(&[vec![1, 2, 3]]).determinant().is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(&[vec![1i64, 2], vec![3]]).is_err());
        assert!(IntMatrix::from_rows::<i64>(&[]).is_err());
    }

    #[test]
    fn hadamard_squared() {
        let m = mat(&[vec![1, 2], vec![3, 4]]);
        // column norms² are 10 and 20
        assert_eq!(m.hadamard_bound_squared(), BigInt::from(200));
    }
}
