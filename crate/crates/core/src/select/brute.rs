//! Exhaustive column-subset selection oracle.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::select::result::{projection_residual, CsspNorm, SelectionResult};

/// Number of `k`-subsets of `n`, saturating far past the enumeration budget.
fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > u128::from(u64::MAX) {
            return acc;
        }
    }
    acc
}

/// Finds the exact minimizer of `||A - P_J A||` over all `k`-subsets `J` by
/// enumeration (budgeted at one million subsets). Ties resolve to the
/// lexicographically first subset.
pub fn brute_cssp(a: &DenseMatrix, k: usize, norm: CsspNorm) -> Result<SelectionResult> {
    let n = a.ncols();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "selection size {k} out of range for {n} columns"
        )));
    }
    if binomial(n, k) > 1_000_000 {
        return Err(Error::InvalidArgument(format!(
            "enumeration budget exceeded: C({n}, {k}) > 1e6 subsets"
        )));
    }
    let mut subset: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>, f64, f64)> = None;
    loop {
        let (fro, spectral) = projection_residual(a, &subset)?;
        let value = match norm {
            CsspNorm::Frobenius => fro,
            CsspNorm::Spectral => spectral,
        };
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, subset.clone(), fro, spectral));
        }
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                let (_, indices, residual_fro, residual_spectral) = best.unwrap();
                return Ok(SelectionResult {
                    indices,
                    row_indices: None,
                    residual_fro,
                    residual_spectral,
                    oracle_residual: None,
                    quasi_ratio: None,
                });
            }
            i -= 1;
            if subset[i] != i + n - k {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}
