//! Rank-revealing quality measurement for a low-rank approximant.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::svd::singular_values;

/// Per-index rank-revealing ratios for an approximation `A_k` of `A`:
/// the smallest `mu` satisfying both `sigma_i(A) <= mu * sigma_i(A_k)` for
/// `i <= k` and `sigma_j(A - A_k) <= mu * sigma_{k+j}(A)`.
#[derive(Debug, Clone)]
pub struct MuReport {
    /// `sigma_i(A) / sigma_i(A_k)` for `i = 1..=k`.
    pub kept_ratios: Vec<f64>,
    /// `sigma_j(A - A_k) / sigma_{k+j}(A)` for `j = 1..`.
    pub tail_ratios: Vec<f64>,
    /// Maximum of all ratios (at least 1 for any projection-based `A_k`).
    pub mu: f64,
}

/// Measures the rank-revealing quality of `a_k` against `a`.
pub fn rrqr_mu(a: &DenseMatrix, a_k: &DenseMatrix, k: usize) -> Result<MuReport> {
    if a.nrows() != a_k.nrows() || a.ncols() != a_k.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} approximant for a {}x{} matrix",
            a_k.nrows(),
            a_k.ncols(),
            a.nrows(),
            a.ncols()
        )));
    }
    let p = a.nrows().min(a.ncols());
    if k == 0 || k > p {
        return Err(Error::InvalidArgument(format!(
            "rank target {k} out of range for a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let sv = singular_values(a)?;
    let sv_k = singular_values(a_k)?;
    let scale = sv[0].max(1e-300);
    if k < sv_k.len() && sv_k[k] > 1e-10 * scale {
        return Err(Error::InvalidArgument(format!(
            "approximant has rank greater than {k} (sigma_{} = {:.3e})",
            k + 1,
            sv_k[k]
        )));
    }
    let sv_e = singular_values(&a.add_scaled(-1.0, a_k))?;

    // A singular value at roundoff level (relative to sigma_1(A)) counts as
    // zero: a zero-over-zero constraint is vacuous and reports 1, while a
    // positive-over-zero constraint cannot be satisfied by any finite mu.
    let negligible = 1e-14 * scale;
    let ratio = |num: f64, den: f64| -> f64 {
        if num <= negligible {
            1.0
        } else if den <= negligible {
            f64::INFINITY
        } else {
            num / den
        }
    };

    let kept_ratios: Vec<f64> = (0..k).map(|i| ratio(sv[i], sv_k[i])).collect();
    let tail_ratios: Vec<f64> = (0..p - k).map(|j| ratio(sv_e[j], sv[k + j])).collect();
    let mu = kept_ratios
        .iter()
        .chain(&tail_ratios)
        .fold(1.0_f64, |m, &r| m.max(r));
    Ok(MuReport {
        kept_ratios,
        tail_ratios,
        mu,
    })
}
