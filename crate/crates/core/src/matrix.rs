//! Dense exact matrices over any [`RingElt`].
//!
//! Sized for desk scale: the largest matrices in play are the rank-m
//! multiplication matrices (m ≤ 6) and the index matrices (≤ 4×4), so
//! determinants use cofactor expansion rather than elimination — no
//! divisions, valid over non-fields like Z₂[[u₁]].

use crate::ring::RingElt;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: RingElt> {
    rows: usize,
    cols: usize,
    data: Vec<R>, // row-major
}

impl<R: RingElt> Matrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let nrows = rows.len();
        assert!(nrows > 0, "empty matrix");
        let ncols = rows[0].len();
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix"
        );
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// n×n zero matrix in the ring of `sample`.
    pub fn zero_like(n: usize, sample: &R) -> Self {
        Matrix {
            rows: n,
            cols: n,
            data: vec![sample.zero_like(); n * n],
        }
    }

    pub fn identity_like(n: usize, sample: &R) -> Self {
        let mut m = Self::zero_like(n, sample);
        for i in 0..n {
            m.data[i * n + i] = sample.one_like();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = self.data[0].zero_like();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
                }
                out.push(acc);
            }
        }
        Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    /// Entrywise scaling by a ring element.
    pub fn scale(&self, c: &R) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut acc = Self::identity_like(self.rows, &self.data[0]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn trace(&self) -> R {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Determinant by cofactor expansion along the first column —
    /// division-free, so valid over Z_p[[u₁]]. O(n!) but n ≤ 6 here.
    pub fn det(&self) -> Result<R> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.det_unchecked())
    }

    fn det_unchecked(&self) -> R {
        let n = self.rows;
        if n == 1 {
            return self.data[0].clone();
        }
        let mut acc = self.data[0].zero_like();
        for i in 0..n {
            let a = self.get(i, 0);
            if a.is_zero() {
                continue;
            }
            let mut minor_rows = Vec::with_capacity(n - 1);
            for r in (0..n).filter(|&r| r != i) {
                minor_rows.push((1..n).map(|c| self.get(r, c).clone()).collect());
            }
            let cof = a.mul(&Self::from_rows(minor_rows).det_unchecked());
            acc = if i % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
        }
        acc
    }
}
