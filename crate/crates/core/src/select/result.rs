//! Common result type for column-subset selection routines.

use crate::dense::DenseMatrix;
use crate::error::Result;
use crate::qr::householder_qr;
use crate::svd::two_norm;

/// Norm in which a column-subset residual is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsspNorm {
    Frobenius,
    Spectral,
}

/// Outcome of a selection routine: chosen indices and the residual of
/// projecting the matrix onto the span of the selected columns.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    /// Selected column indices, in pivot order.
    pub indices: Vec<usize>,
    /// Selected row indices for two-sided (cross) selections.
    pub row_indices: Option<Vec<usize>>,
    /// `||A - P_J A||_F`.
    pub residual_fro: f64,
    /// `||A - P_J A||_2`.
    pub residual_spectral: f64,
    /// Best achievable residual when an exhaustive oracle was run.
    pub oracle_residual: Option<f64>,
    /// Achieved over optimal residual in the oracle's norm.
    pub quasi_ratio: Option<f64>,
}

impl SelectionResult {
    /// Attaches an oracle value and the quasi-optimality ratio in `norm`.
    pub fn with_oracle(mut self, oracle: f64, norm: CsspNorm) -> Self {
        let achieved = match norm {
            CsspNorm::Frobenius => self.residual_fro,
            CsspNorm::Spectral => self.residual_spectral,
        };
        self.oracle_residual = Some(oracle);
        self.quasi_ratio = Some(if oracle > 0.0 {
            achieved / oracle
        } else if achieved.abs() <= 1e-30 {
            1.0
        } else {
            f64::INFINITY
        });
        self
    }
}

/// Residual of projecting `a` onto the span of its columns `j_set`, in both
/// norms. Rank deficiency among the selected columns is handled by keeping
/// only the directions with non-negligible pivot.
pub(crate) fn projection_residual(a: &DenseMatrix, j_set: &[usize]) -> Result<(f64, f64)> {
    let aj = a.select_columns(j_set);
    let f = householder_qr(&aj, true)?;
    let p = f.r.nrows().min(f.r.ncols());
    let head = f.r.get(0, 0).abs();
    let kept: Vec<usize> = (0..p)
        .filter(|&i| f.r.get(i, i).abs() > 1e-13 * head)
        .collect();
    if kept.is_empty() {
        return Ok((a.frobenius_norm(), two_norm(a)?));
    }
    let q = f.q.select_columns(&kept);
    let resid = a.add_scaled(-1.0, &q.matmul(&q.matmul_transa(a)));
    Ok((resid.frobenius_norm(), two_norm(&resid)?))
}
