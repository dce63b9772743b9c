//! Dense column-major complex matrices.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Dense matrix with `Complex64` entries in column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Complex64>,
}

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

impl ComplexMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![C_ZERO; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a.set(i, i, C_ONE);
        }
        a
    }

    pub fn from_fn(
        nrows: usize,
        ncols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut a = Self::zeros(nrows, ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                a.set(i, j, f(i, j));
            }
        }
        a
    }

    /// Promotes a real matrix.
    pub fn from_real(a: &DenseMatrix) -> Self {
        Self::from_fn(a.nrows(), a.ncols(), |i, j| Complex64::new(a.get(i, j), 0.0))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.data[i + j * self.nrows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.data[i + j * self.nrows] = v;
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    /// Conjugate transpose `A^H`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i).conj())
    }

    /// `A * B`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut c = Self::zeros(self.nrows, other.ncols);
        for j in 0..other.ncols {
            for k in 0..self.ncols {
                let b = other.get(k, j);
                if b != C_ZERO {
                    let a_col = self.col(k);
                    let c_col = c.col_mut(j);
                    for i in 0..self.nrows {
                        c_col[i] += a_col[i] * b;
                    }
                }
            }
        }
        c
    }

    /// `A * x`.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![C_ZERO; self.nrows];
        for j in 0..self.ncols {
            let xj = x[j];
            if xj != C_ZERO {
                let col = self.col(j);
                for i in 0..self.nrows {
                    y[i] += col[i] * xj;
                }
            }
        }
        y
    }

    pub fn add_scaled(&self, alpha: Complex64, other: &Self) -> Self {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols, other.ncols);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data,
        }
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|a| a * alpha).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real 2n x 2m block embedding `[[Re, -Im], [Im, Re]]`.
    ///
    /// The embedding has the same singular values as the complex matrix, each
    /// repeated twice, so spectral norms of complex matrices can be measured
    /// with the real SVD.
    pub fn real_embedding(&self) -> DenseMatrix {
        let (m, n) = (self.nrows, self.ncols);
        DenseMatrix::from_fn(2 * m, 2 * n, |i, j| {
            let v = self.get(i % m, j % n);
            match (i >= m, j >= n) {
                (false, false) | (true, true) => v.re,
                (false, true) => -v.im,
                (true, false) => v.im,
            }
        })
    }

    /// Maximum column-wise deviation of `Q^H Q` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint().matmul(self);
        let mut worst: f64 = 0.0;
        for j in 0..g.ncols() {
            for i in 0..g.nrows() {
                let target = if i == j { C_ONE } else { C_ZERO };
                worst = worst.max((g.get(i, j) - target).norm());
            }
        }
        worst
    }

    /// Householder QR factorization `A = Q R` with unitary `Q` (n x n for
    /// square input, economy-size m x min(m, n) otherwise) and upper
    /// triangular `R`.
    pub fn householder_qr(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let m = self.nrows;
        let n = self.ncols;
        if m < n {
            return Err(Error::InvalidArgument(
                "complex QR requires nrows >= ncols".into(),
            ));
        }
        let p = n.min(m);
        let mut r = self.clone();
        // Q accumulated as a product of Householder reflectors applied to I.
        let mut q = ComplexMatrix::identity(m);
        for k in 0..p {
            // Householder vector for column k below the diagonal.
            let mut x = vec![C_ZERO; m - k];
            for i in k..m {
                x[i - k] = r.get(i, k);
            }
            let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if xnorm == 0.0 {
                continue;
            }
            // alpha = -sign(x0) * ||x||, with sign(0) = 1.
            let phase = if x[0].norm() > 0.0 {
                x[0] / x[0].norm()
            } else {
                C_ONE
            };
            let alpha = -phase * xnorm;
            let mut v = x;
            v[0] -= alpha;
            let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                continue;
            }
            for z in v.iter_mut() {
                *z /= vnorm;
            }
            // Apply H = I - 2 v v^H to the trailing block of R.
            for j in k..n {
                let mut dot = C_ZERO;
                for i in k..m {
                    dot += v[i - k].conj() * r.get(i, j);
                }
                let two_dot = dot * 2.0;
                for i in k..m {
                    let val = r.get(i, j) - two_dot * v[i - k];
                    r.set(i, j, val);
                }
            }
            // Accumulate Q <- Q H (applying H from the right).
            for i in 0..m {
                let mut dot = C_ZERO;
                for l in k..m {
                    dot += q.get(i, l) * v[l - k];
                }
                let two_dot = dot * 2.0;
                for l in k..m {
                    let val = q.get(i, l) - two_dot * v[l - k].conj();
                    q.set(i, l, val);
                }
            }
        }
        // Zero the strictly lower part of R explicitly.
        for j in 0..n {
            for i in (j + 1)..m {
                r.set(i, j, C_ZERO);
            }
        }
        if m == n {
            Ok((q, r))
        } else {
            let q_econ = ComplexMatrix::from_fn(m, p, |i, j| q.get(i, j));
            let r_econ = ComplexMatrix::from_fn(p, n, |i, j| r.get(i, j));
            Ok((q_econ, r_econ))
        }
    }
}
