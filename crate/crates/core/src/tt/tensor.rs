//! Dense tensors in generalized column-major storage.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Dense tensor of arbitrary order. Values are stored with the first index
/// fastest (generalized column-major), so matricizing at any split point is
/// a pure reshape of the value vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    values: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dims: &[usize]) -> Self {
        let len = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            values: vec![0.0; len],
        }
    }

    pub fn from_values(dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if values.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} values for dims {dims:?} (need {len})",
                values.len()
            )));
        }
        Ok(Self { dims, values })
    }

    pub fn from_fn(dims: &[usize], f: impl Fn(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dims);
        let mut idx = vec![0usize; dims.len()];
        for k in 0..t.values.len() {
            t.values[k] = f(&idx);
            // Advance the multi-index, first coordinate fastest.
            for (pos, d) in dims.iter().enumerate() {
                idx[pos] += 1;
                if idx[pos] < *d {
                    break;
                }
                idx[pos] = 0;
            }
        }
        t
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (k, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.dims[k]);
            off += i * stride;
            stride *= self.dims[k];
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let off = self.offset(idx);
        self.values[off] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Matricization at split point `k` (1 <= k < order): rows are indexed
    /// by the first `k` tensor indices, columns by the rest. Because storage
    /// is generalized column-major this is exactly a reshape, so the
    /// operation is exact and trivially norm-preserving.
    pub fn matricize(&self, k: usize) -> Result<DenseMatrix> {
        if k == 0 || k >= self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "split {k} outside 1..{}",
                self.dims.len()
            )));
        }
        let rows: usize = self.dims[..k].iter().product();
        let cols: usize = self.dims[k..].iter().product();
        DenseMatrix::from_column_major(rows, cols, self.values.clone())
    }

    /// Inverse of [`matricize`]: reinterprets a matrix as a tensor with the
    /// given dims (the matrix must be a reshape-compatible size).
    pub fn from_matricization(dims: &[usize], m: &DenseMatrix) -> Result<Self> {
        Self::from_values(dims.to_vec(), m.data().to_vec())
    }
}
