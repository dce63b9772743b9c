//! Greedy diagonal-pivoted Cholesky selection on positive semidefinite
//! matrices.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::select::result::SelectionResult;
use crate::svd::two_norm;

/// Outcome of pivoted Cholesky: the selection plus the partial factor and
/// the trace of the residual after each accepted pivot.
#[derive(Debug, Clone)]
pub struct PivotedCholesky {
    /// Indices, residual norms of `K - L L^T`.
    pub selection: SelectionResult,
    /// `n x achieved` lower-trapezoidal factor with `L L^T ~ K` on the
    /// selected principal directions.
    pub factor: DenseMatrix,
    /// Trace of the residual after each step, nonincreasing.
    pub trace_residuals: Vec<f64>,
}

/// Runs up to `k` steps of diagonally pivoted Cholesky on a symmetric psd
/// matrix. The greedy pivot is the largest residual diagonal entry (ties
/// toward the lowest index). Stops early when the best pivot reaches
/// roundoff level; a residual diagonal entry below `-1e-12 * max diag(K)`
/// means the input was not psd.
pub fn pivoted_cholesky(kmat: &DenseMatrix, k: usize) -> Result<PivotedCholesky> {
    let n = kmat.nrows();
    if kmat.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "pivoted cholesky needs a square matrix, got {}x{}",
            n,
            kmat.ncols()
        )));
    }
    if !kmat.is_symmetric(1e-12 * kmat.max_abs().max(1e-300)) {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "selection size {k} out of range for dimension {n}"
        )));
    }
    let mut d: Vec<f64> = (0..n).map(|i| kmat.get(i, i)).collect();
    let scale = d.iter().fold(0.0_f64, |m, &v| m.max(v.abs())).max(1e-300);
    let psd_floor = -1e-12 * scale;
    let stop = 1e-14 * scale;
    let mut factor = DenseMatrix::zeros(n, k);
    let mut indices = Vec::with_capacity(k);
    let mut trace_residuals = Vec::with_capacity(k);
    for step in 0..k {
        if let Some(&bad) = d.iter().find(|&&v| v < psd_floor) {
            return Err(Error::NotPsd(format!(
                "residual diagonal reached {bad:.3e} (tolerance {psd_floor:.3e})"
            )));
        }
        let mut p = 0;
        for i in 1..n {
            if d[i] > d[p] {
                p = i;
            }
        }
        if d[p] <= stop {
            break;
        }
        indices.push(p);
        let root = d[p].sqrt();
        // New factor column: (K[:, p] - L L[p, :]^T) / sqrt(d[p]).
        let mut col = vec![0.0; n];
        for (i, c) in col.iter_mut().enumerate() {
            let mut v = kmat.get(i, p);
            for t in 0..step {
                v -= factor.get(i, t) * factor.get(p, t);
            }
            *c = v / root;
        }
        col[p] = root;
        for i in 0..n {
            d[i] -= col[i] * col[i];
        }
        d[p] = 0.0;
        factor.set_col(step, &col);
        trace_residuals.push(d.iter().map(|&v| v.max(0.0)).sum());
    }
    if indices.is_empty() {
        return Err(Error::InvalidArgument(
            "matrix diagonal is numerically zero; nothing to select".into(),
        ));
    }
    let achieved = indices.len();
    let factor = DenseMatrix::from_fn(n, achieved, |i, j| factor.get(i, j));
    let resid = kmat.add_scaled(-1.0, &factor.matmul(&factor.transpose()));
    let selection = SelectionResult {
        indices,
        row_indices: None,
        residual_fro: resid.frobenius_norm(),
        residual_spectral: two_norm(&resid)?,
        oracle_residual: None,
        quasi_ratio: None,
    };
    Ok(PivotedCholesky {
        selection,
        factor,
        trace_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_matrix, trial_rng};
    use crate::select::cross::gecp_cross;
    use crate::select::fixtures::rbf_kernel_1d;

    #[test]
    fn diagonal_matrix_is_selected_in_value_order() {
        let k = DenseMatrix::diag_from(&[3.0, 2.0, 1.0]);
        let out = pivoted_cholesky(&k, 3).unwrap();
        assert_eq!(out.selection.indices, vec![0, 1, 2]);
        assert!(out.selection.residual_fro <= 1e-14);
    }

    #[test]
    fn trace_residual_decays_monotonically_on_the_rbf_kernel() {
        let k = rbf_kernel_1d(64, 0.2);
        let out = pivoted_cholesky(&k, 12).unwrap();
        let mut last = f64::INFINITY;
        for &t in &out.trace_residuals {
            assert!(t <= last + 1e-12);
            assert!(t >= -1e-12);
            last = t;
        }
        assert!(*out.trace_residuals.last().unwrap() < out.trace_residuals[0]);
    }

    #[test]
    fn pivot_sequence_matches_complete_pivoting_on_psd_inputs() {
        // On a psd residual the largest entry lies on the diagonal, so
        // greedy complete pivoting and greedy diagonal pivoting walk the
        // same index sequence under the shared lowest-index tie-break.
        for trial in 0..50 {
            let mut rng = trial_rng(960, trial);
            let g = gaussian_matrix(&mut rng, 8, 8);
            let k = g.matmul(&g.transpose());
            let chol = pivoted_cholesky(&k, 4).unwrap();
            let cross = gecp_cross(&k, 4).unwrap();
            assert_eq!(chol.selection.indices, cross.col_indices, "trial {trial}");
            assert_eq!(cross.row_indices, cross.col_indices, "trial {trial}");
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let k = DenseMatrix::from_fn(3, 3, |i, j| if i == j { [1.0, -0.5, 2.0][i] } else { 0.0 });
        assert!(matches!(pivoted_cholesky(&k, 3), Err(Error::NotPsd(_))));
    }

    #[test]
    fn hidden_indefiniteness_is_caught_mid_sweep() {
        // Positive diagonal but not psd: [[1, 2], [2, 1]] has eigenvalues
        // 3 and -1; the first elimination drives a diagonal entry negative.
        let k = DenseMatrix::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(matches!(pivoted_cholesky(&k, 2), Err(Error::NotPsd(_))));
    }

    #[test]
    fn exact_low_rank_input_stops_early() {
        let mut rng = trial_rng(961, 0);
        let g = gaussian_matrix(&mut rng, 10, 3);
        let k = g.matmul(&g.transpose());
        let out = pivoted_cholesky(&k, 8).unwrap();
        assert_eq!(out.selection.indices.len(), 3);
        assert!(out.selection.residual_fro <= 1e-10 * k.frobenius_norm());
    }
}
