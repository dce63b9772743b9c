//! Power iteration for the spectral radius, with a stagnation-exposing
//! trace: defective dominant eigenvalues are not detected, they simply show
//! up as slow Rayleigh-quotient drift.

use crate::error::{Error, Result};
use crate::scalar::norm2;
use crate::sparse::SparseMatrix;

/// Per-iteration absolute Rayleigh quotients and termination flags.
#[derive(Debug, Clone)]
pub struct PowerTrace {
    pub estimates: Vec<f64>,
    pub converged: bool,
    /// The starting vector was annihilated by the matrix and was replaced
    /// once by a deterministic fallback.
    pub reseeded: bool,
}

/// Run power iteration from `v0`, stopping when consecutive absolute
/// Rayleigh quotients agree to `tol` relatively. A zero image triggers one
/// deterministic reseed (the normalized all-ones vector); a second zero
/// image is an error.
pub fn power_method(
    a: &SparseMatrix<f64>,
    v0: &[f64],
    maxit: usize,
    tol: f64,
) -> Result<(f64, PowerTrace)> {
    let n = a.nrows();
    if a.ncols() != n || v0.len() != n {
        return Err(Error::DimensionMismatch("square matrix and matching start".into()));
    }
    let nv0 = norm2(v0);
    if !(nv0 > 0.0) {
        return Err(Error::InvalidArgument("zero starting vector".into()));
    }
    let mut v: Vec<f64> = v0.iter().map(|x| x / nv0).collect();
    let mut estimates: Vec<f64> = Vec::with_capacity(maxit);
    let mut converged = false;
    let mut reseeded = false;

    for _ in 0..maxit {
        let w = a.spmv(&v)?;
        let wnorm = norm2(&w);
        if wnorm == 0.0 {
            if reseeded {
                return Err(Error::InvalidArgument(
                    "iterate annihilated twice; operator is nilpotent on this subspace".into(),
                ));
            }
            reseeded = true;
            let u = (n as f64).sqrt().recip();
            v = vec![u; n];
            continue;
        }
        let rho = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>().abs();
        if let Some(&prev) = estimates.last() {
            if (rho - prev).abs() <= tol * rho.max(f64::MIN_POSITIVE) {
                estimates.push(rho);
                converged = true;
                break;
            }
        }
        estimates.push(rho);
        v = w.iter().map(|x| x / wnorm).collect();
    }

    let last = *estimates.last().unwrap_or(&0.0);
    Ok((
        last,
        PowerTrace {
            estimates,
            converged,
            reseeded,
        },
    ))
}
