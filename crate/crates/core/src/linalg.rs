//! Minimal exact linear algebra over the rationals: just what the
//! number-field basis changes need.

use crate::rat::BigRat;
use num_traits::{One, Zero};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigRat::one();
        }
        m
    }

    pub fn from_columns(cols: &[Vec<BigRat>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = QMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigRat {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, v: &[BigRat]) -> Vec<BigRat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRat::zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Inverse by Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.at(pivot, j).clone();
                    *a.at_mut(pivot, j) = a.at(col, j).clone();
                    *a.at_mut(col, j) = tmp;
                    let tmp = inv.at(pivot, j).clone();
                    *inv.at_mut(pivot, j) = inv.at(col, j).clone();
                    *inv.at_mut(col, j) = tmp;
                }
            }
            let scale = BigRat::one() / a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j) * &scale;
                *inv.at_mut(col, j) = inv.at(col, j) * &scale;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let av = a.at(col, j) * &factor;
                    *a.at_mut(r, j) = a.at(r, j) - av;
                    let iv = inv.at(col, j) * &factor;
                    *inv.at_mut(r, j) = inv.at(r, j) - iv;
                }
            }
        }
        Some(inv)
    }

    /// First nonzero kernel vector of the matrix (columns = unknowns), or
    /// `None` when the kernel is trivial.
    pub fn kernel_vector(&self) -> Option<Vec<BigRat>> {
        let mut a = self.clone();
        let n = a.cols;
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
        let mut rank = 0usize;
        for col in 0..n {
            let pivot = (rank..a.rows).find(|&r| !a.at(r, col).is_zero());
            let Some(pivot) = pivot else { continue };
            if pivot != rank {
                for j in 0..n {
                    let tmp = a.at(pivot, j).clone();
                    *a.at_mut(pivot, j) = a.at(rank, j).clone();
                    *a.at_mut(rank, j) = tmp;
                }
            }
            let scale = BigRat::one() / a.at(rank, col).clone();
            for j in 0..n {
                *a.at_mut(rank, j) = a.at(rank, j) * &scale;
            }
            for r in 0..a.rows {
                if r == rank || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let v = a.at(rank, j) * &factor;
                    *a.at_mut(r, j) = a.at(r, j) - v;
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
        let free = (0..n).find(|&c| pivot_of_col[c].is_none())?;
        let mut v = vec![BigRat::zero(); n];
        v[free] = BigRat::one();
        for c in 0..n {
            if let Some(r) = pivot_of_col[c] {
                v[c] = -a.at(r, free).clone();
            }
        }
        Some(v)
    }
}
