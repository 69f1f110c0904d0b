//! Dense exact-rational matrices and fraction-preserving elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::rational::Q;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
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

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn row_sum(&self, i: usize) -> Q {
        self.row(i).iter().sum()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Rows and columns both reordered: `out[(a, b)] = self[(order[a], order[b])]`.
    pub fn permuted(&self, order: &[usize]) -> Matrix {
        Matrix::from_fn(order.len(), order.len(), |a, b| {
            self[(order[a], order[b])].clone()
        })
    }

    /// Leading `n × n` block.
    pub fn leading_block(&self, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| self[(i, j)].clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        self.mul_with(rhs, Execution::default())
    }

    pub fn mul_with(&self, rhs: &Matrix, exec: Execution) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let cols = rhs.cols;
        let rows = exec.map(self.rows, |i| {
            let mut out = vec![Q::zero(); cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
            out
        });
        Matrix {
            rows: self.rows,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Q::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(i)) {
                *o += a * b;
            }
        }
        out
    }

    /// Exact `n`-th power by repeated squaring; `n = 0` gives the identity.
    pub fn pow(&self, mut n: u64) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Reduced row echelon form. Returns the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m[(rank, c)].recip();
            for j in c..m.cols {
                let v = &m[(rank, j)] * &inv;
                m[(rank, j)] = v;
            }
            let pivot_row = m.row(rank).to_vec();
            for r in 0..m.rows {
                if r == rank || m[(r, c)].is_zero() {
                    continue;
                }
                let factor = m[(r, c)].clone();
                for j in c..m.cols {
                    if !pivot_row[j].is_zero() {
                        let v = &m[(r, j)] - &factor * &pivot_row[j];
                        m[(r, j)] = v;
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self · x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -r[(row, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Solves `self · x = rhs` for square nonsingular `self`; `None` if singular.
    pub fn solve(&self, rhs: &[Q]) -> Option<Vec<Q>> {
        assert!(self.is_square() && rhs.len() == self.rows);
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                rhs[i].clone()
            }
        });
        for c in 0..n {
            let p = (c..n).find(|&r| !aug[(r, c)].is_zero())?;
            aug.swap_rows(c, p);
            let inv = aug[(c, c)].recip();
            for j in c..=n {
                let v = &aug[(c, j)] * &inv;
                aug[(c, j)] = v;
            }
            for r in c + 1..n {
                if aug[(r, c)].is_zero() {
                    continue;
                }
                let factor = aug[(r, c)].clone();
                for j in c..=n {
                    if !aug[(c, j)].is_zero() {
                        let v = &aug[(r, j)] - &factor * &aug[(c, j)];
                        aug[(r, j)] = v;
                    }
                }
            }
        }
        let mut x = vec![Q::zero(); n];
        for i in (0..n).rev() {
            let mut v = aug[(i, n)].clone();
            for j in i + 1..n {
                if !aug[(i, j)].is_zero() {
                    v -= &aug[(i, j)] * &x[j];
                }
            }
            x[i] = v;
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;

    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| q(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_rows(vec![vec![int(1)], vec![int(1), int(2)]]).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn solve_small_system() {
        let a = m(&[&[(2, 1), (1, 1)], &[(1, 1), (3, 1)]]);
        let x = a.solve(&[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
    }

    #[test]
    fn solve_needs_row_swap() {
        let a = m(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(a.solve(&[int(2), int(3)]).unwrap(), vec![int(3), int(2)]);
    }

    #[test]
    fn singular_system_detected() {
        let a = m(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        assert!(a.solve(&[int(1), int(1)]).is_none());
        assert_eq!(a.rank(), 1);
        let ns = a.null_space();
        assert_eq!(ns, vec![vec![int(-2), int(1)]]);
    }

    #[test]
    fn power_zero_is_identity() {
        let a = m(&[&[(1, 2), (1, 2)], &[(1, 3), (2, 3)]]);
        assert_eq!(a.pow(0), Matrix::identity(2));
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }

    proptest! {
        #[test]
        fn null_space_vectors_are_annihilated(
            entries in proptest::collection::vec(-3i64..4, 12),
        ) {
            let a = Matrix::from_fn(3, 4, |i, j| int(entries[i * 4 + j]));
            let basis = a.null_space();
            prop_assert_eq!(basis.len() + a.rank(), 4);
            for x in basis {
                let col = Matrix::from_fn(4, 1, |i, _| x[i].clone());
                prop_assert!(a.mul(&col).entries().all(|(_, _, v)| v.is_zero()));
            }
        }
    }
}
