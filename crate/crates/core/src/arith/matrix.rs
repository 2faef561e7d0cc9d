use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use super::Scalar;
use crate::error::{Error, Result};

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

/// Outcome of [`Matrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    /// Consistent with free variables; the free variables are set to zero.
    Particular(Vec<T>),
    Inconsistent,
}

impl<T> Solution<T> {
    pub fn vector(&self) -> Option<&[T]> {
        match self {
            Solution::Unique(v) | Solution::Particular(v) => Some(v),
            Solution::Inconsistent => None,
        }
    }

    pub fn into_vector(self) -> Option<Vec<T>> {
        match self {
            Solution::Unique(v) | Solution::Particular(v) => Some(v),
            Solution::Inconsistent => None,
        }
    }
}

/// Reduced row echelon form together with its pivot columns.
struct Rref<T> {
    m: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Build from integer literals; convenient in tests and examples.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                if self[(i, k)].is_zero() || rhs[(k, j)].is_zero() {
                    acc
                } else {
                    acc + self[(i, k)].clone() * rhs[(k, j)].clone()
                }
            })
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Select a submatrix by row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Gauss-Jordan elimination. Pivots are chosen by scanning columns left
    /// to right and taking the first nonzero entry at or below the current
    /// pivot row, which makes the output deterministic.
    fn rref(&self) -> Rref<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].clone() * inv.clone();
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn determinant(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(T::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() / piv.clone();
                for j in c..m.cols {
                    m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let rref = aug.rref();
        if rref.pivots.len() < n || rref.pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_fn(n, n, |i, j| rref.m[(i, j + n)].clone()))
    }

    /// One exact solution of `self * x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[T]) -> Result<Solution<T>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &c) in rref.pivots.iter().enumerate() {
            x[c] = rref.m[(r, self.cols)].clone();
        }
        if rref.pivots.len() == self.cols {
            Ok(Solution::Unique(x))
        } else {
            Ok(Solution::Particular(x))
        }
    }

    /// Basis of the right kernel; empty iff the matrix has full column rank.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let rref = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rref.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &c) in rref.pivots.iter().enumerate() {
                    v[c] = -rref.m[(r, f)].clone();
                }
                v
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_exact_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, random_rational, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = Matrix<Rational>;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> M {
        M::from_fn(r, c, |_, _| random_rational(rng))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(M::identity(3).rank(), 3);
        assert_eq!(M::from_fn(4, 4, |_, _| int(1)).rank(), 1);
        assert_eq!(M::zeros(2, 5).rank(), 0);
    }

    #[test]
    fn rank_of_generic_product_is_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = M::from_fn(5, 3, |_, _| crate::arith::random_positive_rational(&mut rng));
        let b = M::from_fn(3, 6, |_, _| crate::arith::random_positive_rational(&mut rng));
        assert_eq!(a.mul(&b).unwrap().rank(), 3);
    }

    #[test]
    fn solve_examples() {
        let s = M::identity(2).solve(&[int(3), int(4)]).unwrap();
        assert_eq!(s, Solution::Unique(vec![int(3), int(4)]));
        let s = M::from_i64_rows(&[&[1, 1]]).solve(&[int(2)]).unwrap();
        assert_eq!(s, Solution::Particular(vec![int(2), int(0)]));
        let s = M::from_i64_rows(&[&[1], &[1]]).solve(&[int(0), int(1)]).unwrap();
        assert_eq!(s, Solution::Inconsistent);
    }

    #[test]
    fn nullspace_examples() {
        assert!(M::identity(3).nullspace().is_empty());
        let ns = M::from_i64_rows(&[&[1, 1]]).nullspace();
        assert_eq!(ns, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn nullspace_of_rank_two_wide_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 2, 4);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = M::from_i64_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(a.determinant().unwrap(), int(6));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), M::identity(3));
        assert!(M::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn rank_is_transpose_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 6);
            let b = random_matrix(&mut rng, 6, 3);
            let m = a.mul(&b).unwrap();
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
