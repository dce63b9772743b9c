//! Column selection by greedy column-pivoted QR.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::qr::householder_qr;
use crate::select::result::{projection_residual, SelectionResult};

/// Selects the first `k` pivots of column-pivoted QR and measures the
/// projection residual onto their span. Ties in the greedy pivot are broken
/// toward the lowest column index.
pub fn cpqr_select(a: &DenseMatrix, k: usize) -> Result<SelectionResult> {
    if k == 0 || k > a.nrows().min(a.ncols()) {
        return Err(Error::InvalidArgument(format!(
            "selection size {k} out of range for a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let f = householder_qr(a, true)?;
    let indices: Vec<usize> = f.perm[..k].to_vec();
    let (residual_fro, residual_spectral) = projection_residual(a, &indices)?;
    Ok(SelectionResult {
        indices,
        row_indices: None,
        residual_fro,
        residual_spectral,
        oracle_residual: None,
        quasi_ratio: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_matrix, trial_rng};
    use crate::select::brute::brute_cssp;
    use crate::select::fixtures::kahan_matrix;
    use crate::select::result::CsspNorm;
    use crate::svd::singular_values;

    #[test]
    fn orthogonal_columns_are_selected_in_norm_order() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                (3 - i) as f64
            } else {
                0.0
            }
        });
        let sel = cpqr_select(&a, 3).unwrap();
        assert_eq!(sel.indices, vec![0, 1, 2]);
        assert!(sel.residual_fro <= 1e-14);
    }

    #[test]
    fn exact_ties_select_the_lowest_index() {
        // Columns 0 and 1 are identical with unit norm; column 2 also has
        // unit norm, so the first pivot is a three-way tie.
        let a = DenseMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) | (0, 1) | (1, 2) => 1.0,
            _ => 0.0,
        });
        let sel = cpqr_select(&a, 2).unwrap();
        assert_eq!(sel.indices, vec![0, 2]);
        assert!(sel.residual_fro <= 1e-14);
    }

    #[test]
    fn residuals_are_nonincreasing_in_selection_size() {
        let mut rng = trial_rng(930, 0);
        let a = gaussian_matrix(&mut rng, 6, 6);
        let mut last = f64::INFINITY;
        for k in 1..=6 {
            let sel = cpqr_select(&a, k).unwrap();
            assert!(sel.residual_fro <= last + 1e-12);
            last = sel.residual_fro;
        }
    }

    #[test]
    fn greedy_never_beats_the_exhaustive_oracle_and_stays_in_the_envelope() {
        let n = 8;
        let mut rng = trial_rng(931, 0);
        let a = gaussian_matrix(&mut rng, n, n);
        for k in 1..=4 {
            let oracle = brute_cssp(&a, k, CsspNorm::Spectral).unwrap();
            let sel = cpqr_select(&a, k)
                .unwrap()
                .with_oracle(oracle.residual_spectral, CsspNorm::Spectral);
            let ratio = sel.quasi_ratio.unwrap();
            let envelope = 2f64.powi(k as i32) * ((n - k) as f64).sqrt();
            assert!(ratio >= 1.0 - 1e-12, "k={k}: ratio {ratio}");
            assert!(ratio <= envelope, "k={k}: ratio {ratio} vs envelope {envelope}");
        }
    }

    #[test]
    fn kahan_matrix_loses_rank_revealing_quality_exponentially() {
        // The selected block A_J = Q R11 shares its singular values with
        // R11, so sigma_k(A) / sigma_k(R11) is the factor by which greedy
        // selection misses the k-th singular value. On this construction it
        // blows up geometrically in k.
        let n = 48;
        let a = kahan_matrix(n, 1.2, 1e-7);
        let sv_full = singular_values(&a).unwrap();
        let deficiency = |k: usize| -> f64 {
            let sel = cpqr_select(&a, k).unwrap();
            assert_eq!(sel.indices, (0..k).collect::<Vec<_>>(), "pivot order at k={k}");
            let sv_block = singular_values(&a.select_columns(&sel.indices)).unwrap();
            sv_full[k - 1] / sv_block[k - 1]
        };
        let d8 = deficiency(8);
        let d16 = deficiency(16);
        let d24 = deficiency(24);
        assert!(d16 > 2.0 * d8, "d8={d8:.3e}, d16={d16:.3e}");
        assert!(d24 > 2.0 * d16, "d16={d16:.3e}, d24={d24:.3e}");
        assert!(d24 > 1e2, "deficiency at k=24: {d24:.3e}");
    }
}
