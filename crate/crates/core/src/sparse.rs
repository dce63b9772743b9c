//! Compressed sparse row matrices over real or complex scalars.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex64;

/// Sparse matrix in CSR form.
///
/// Structural invariants, enforced by every constructor:
/// - `row_ptr` has length `nrows + 1`, starts at 0, is nondecreasing, and
///   ends at `values.len()`;
/// - within each row, column indices are strictly increasing;
/// - no explicitly stored zero values.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T = f64> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Builds a CSR matrix from `(row, col, value)` triplets.
    ///
    /// Duplicate entries are summed; entries that are exactly zero after
    /// summing are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, T)],
    ) -> Result<Self> {
        for &(i, j, _) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidArgument(format!(
                    "triplet ({i}, {j}) outside {nrows}x{ncols}"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, T)> = triplets.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<T> = Vec::with_capacity(sorted.len());
        let mut k = 0;
        while k < sorted.len() {
            let (i, j, mut v) = sorted[k];
            k += 1;
            while k < sorted.len() && sorted[k].0 == i && sorted[k].1 == j {
                v += sorted[k].2;
                k += 1;
            }
            if v != T::ZERO {
                row_ptr[i + 1] += 1;
                col_idx.push(j);
                values.push(v);
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds a matrix directly from CSR arrays, validating every invariant.
    pub fn from_csr(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_ptr.len() != nrows + 1 {
            return Err(Error::InvalidArgument(format!(
                "row_ptr length {} != nrows + 1 = {}",
                row_ptr.len(),
                nrows + 1
            )));
        }
        if row_ptr[0] != 0 || *row_ptr.last().unwrap() != values.len() {
            return Err(Error::InvalidArgument(
                "row_ptr must start at 0 and end at nnz".into(),
            ));
        }
        if col_idx.len() != values.len() {
            return Err(Error::InvalidArgument(
                "col_idx and values lengths differ".into(),
            ));
        }
        for i in 0..nrows {
            if row_ptr[i] > row_ptr[i + 1] {
                return Err(Error::InvalidArgument("row_ptr must be nondecreasing".into()));
            }
            let lo = row_ptr[i];
            let hi = row_ptr[i + 1];
            for k in lo..hi {
                if col_idx[k] >= ncols {
                    return Err(Error::InvalidArgument(format!(
                        "column index {} out of bounds",
                        col_idx[k]
                    )));
                }
                if k > lo && col_idx[k] <= col_idx[k - 1] {
                    return Err(Error::InvalidArgument(format!(
                        "column indices not strictly increasing in row {i}"
                    )));
                }
            }
        }
        if values.iter().any(|v| *v == T::ZERO) {
            return Err(Error::InvalidArgument(
                "explicitly stored zero value".into(),
            ));
        }
        Ok(Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::ONE; n],
        }
    }

    /// Diagonal matrix from the given entries (zeros are dropped).
    pub fn from_diag(d: &[T]) -> Self {
        let triplets: Vec<(usize, usize, T)> = d
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != T::ZERO)
            .map(|(i, v)| (i, i, *v))
            .collect();
        Self::from_triplets(d.len(), d.len(), &triplets).unwrap()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Entry `(i, j)`, zero if not stored.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => T::ZERO,
        }
    }

    /// Main diagonal as a dense vector.
    pub fn diag(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Sparse matrix-vector product `y = A x`.
    ///
    /// Each `y[i]` is accumulated over the stored entries of row `i` in
    /// column order, so the floating-point result is reproducible.
    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "spmv: vector length {} vs {} columns",
                x.len(),
                self.ncols
            )));
        }
        let mut y = vec![T::ZERO; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut acc = T::ZERO;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            y[i] = acc;
        }
        Ok(y)
    }

    /// Transposed matrix (CSC of the original, re-expressed as CSR).
    pub fn transpose(&self) -> Self {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                triplets.push((j, i, v));
            }
        }
        Self::from_triplets(self.ncols, self.nrows, &triplets).unwrap()
    }

    /// `A + s I` (the shift is added to every diagonal position, creating
    /// entries where the diagonal was structurally zero).
    pub fn shift_diagonal(&self, s: T) -> Result<Self> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch(
                "diagonal shift requires a square matrix".into(),
            ));
        }
        let mut triplets = Vec::with_capacity(self.nnz() + self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                triplets.push((i, j, v));
            }
            triplets.push((i, i, s));
        }
        Self::from_triplets(self.nrows, self.ncols, &triplets)
    }

    /// Maps values into another scalar type, preserving structure
    /// (exact zeros produced by the map are dropped).
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SparseMatrix<U> {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                triplets.push((i, j, f(v)));
            }
        }
        SparseMatrix::from_triplets(self.nrows, self.ncols, &triplets).unwrap()
    }

    /// True if `A == A^T` exactly (entrywise over the stored pattern).
    pub fn is_symmetric(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if self.get(j, i) != v {
                    return false;
                }
            }
        }
        true
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs() * v.abs())
            .sum::<f64>()
            .sqrt()
    }
}

impl SparseMatrix<f64> {
    /// Dense copy.
    pub fn to_dense(&self) -> crate::dense::DenseMatrix {
        let mut a = crate::dense::DenseMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                a.set(i, j, v);
            }
        }
        a
    }

    /// Sparsify a dense matrix, keeping entries with `|v| > drop_tol`.
    pub fn from_dense(a: &crate::dense::DenseMatrix, drop_tol: f64) -> Self {
        let mut triplets = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let v = a.get(i, j);
                if v.abs() > drop_tol {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(a.nrows(), a.ncols(), &triplets)
            .expect("triplets are in bounds by construction")
    }

    /// Promotes real entries to complex.
    pub fn to_complex(&self) -> SparseMatrix<Complex64> {
        self.map(|v| Complex64::new(v, 0.0))
    }
}

impl SparseMatrix<Complex64> {
    /// Dense complex copy.
    pub fn to_dense_complex(&self) -> crate::cmatrix::ComplexMatrix {
        let mut a = crate::cmatrix::ComplexMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                a.set(i, j, v);
            }
        }
        a
    }

    /// True if `A == A^H` exactly.
    pub fn is_hermitian(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if self.get(j, i) != v.conj() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spmv_returns_input() {
        let a = SparseMatrix::<f64>::identity(3);
        let y = a.spmv(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn tridiagonal_spmv_matches_hand_computation() {
        // 5x5 constant tridiagonal (-1, 2, -1) against x = ones.
        let n = 5;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &t).unwrap();
        let y = a.spmv(&vec![1.0; n]).unwrap();
        assert_eq!(y, vec![1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn duplicate_triplets_are_summed_and_zeros_dropped() {
        let a =
            SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, -1.0), (1, 1, 2.0)]).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 0), 0.0);
        assert_eq!(a.get(1, 1), 2.0);
    }

    #[test]
    fn from_csr_rejects_unsorted_columns() {
        let r = SparseMatrix::from_csr(1, 3, vec![0, 2], vec![2, 0], vec![1.0, 1.0]);
        assert!(r.is_err());
    }

    #[test]
    fn from_csr_rejects_explicit_zero() {
        let r = SparseMatrix::from_csr(1, 2, vec![0, 1], vec![0], vec![0.0]);
        assert!(r.is_err());
    }

    #[test]
    fn spmv_length_mismatch_is_an_error() {
        let a = SparseMatrix::<f64>::identity(3);
        assert!(a.spmv(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn transpose_roundtrip() {
        let a = SparseMatrix::from_triplets(2, 3, &[(0, 1, 1.0), (1, 2, -2.0)]).unwrap();
        let att = a.transpose().transpose();
        assert_eq!(a, att);
    }

    #[test]
    fn shift_diagonal_creates_missing_entries() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0)]).unwrap();
        let b = a.shift_diagonal(-4.0).unwrap();
        assert_eq!(b.get(0, 0), -4.0);
        assert_eq!(b.get(1, 1), -4.0);
        assert_eq!(b.get(0, 1), 1.0);
    }

    #[test]
    fn hermitian_check_uses_conjugate() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, one), (0, 1, i), (1, 0, -i), (1, 1, one)])
            .unwrap();
        assert!(a.is_hermitian());
        let b = SparseMatrix::from_triplets(2, 2, &[(0, 1, i), (1, 0, i)]).unwrap();
        assert!(!b.is_hermitian());
    }
}
