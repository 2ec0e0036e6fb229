use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense real matrix stored row-major in double precision.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        DenseMatrix { n_rows, n_cols, entries: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major entries. Rejects length mismatches and
    /// non-finite values.
    pub fn from_vec(n_rows: usize, n_cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                n_rows,
                n_cols
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite entry at index {pos}")));
        }
        Ok(DenseMatrix { n_rows, n_cols, entries })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::Dimension(format!("row {i} has {} columns, expected {n_cols}", r.len())));
            }
            entries.extend_from_slice(r);
        }
        Self::from_vec(n_rows, n_cols, entries)
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { n_rows, n_cols, entries }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(DenseMatrix { n_rows: self.n_rows, n_cols: self.n_cols, entries })
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(DenseMatrix { n_rows: self.n_rows, n_cols: self.n_cols, entries })
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            let dst = &mut out.entries[i * other.n_cols..(i + 1) * other.n_cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(l)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Adds `weight * x yᵀ` in place.
    pub(crate) fn add_outer(&mut self, weight: f64, x: &[f64], y: &[f64]) {
        debug_assert_eq!(x.len(), self.n_rows);
        debug_assert_eq!(y.len(), self.n_cols);
        for (i, &xi) in x.iter().enumerate() {
            let s = weight * xi;
            if s == 0.0 {
                continue;
            }
            let row = &mut self.entries[i * self.n_cols..(i + 1) * self.n_cols];
            for (r, &yj) in row.iter_mut().zip(y) {
                *r += s * yj;
            }
        }
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.n_rows)
        } else {
            Err(Error::Dimension(format!("{what} requires a square matrix, got {}x{}", self.n_rows, self.n_cols)))
        }
    }

    fn check_same_shape(&self, other: &DenseMatrix) -> Result<()> {
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols) {
            return Err(Error::Dimension(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        &self.entries[i * self.n_cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        &mut self.entries[i * self.n_cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
