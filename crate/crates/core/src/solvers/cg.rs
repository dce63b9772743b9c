//! Conjugate gradients with the Hestenes–Stiefel recurrences, generic over
//! real and complex Hermitian positive definite operators.

use num_complex::Complex64;

use super::trace::{anorm_error_sq, criterion_met, IterOptions, SolveTrace};
use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{dot, norm2, Scalar};
use crate::sparse::SparseMatrix;

/// Generic CG driver over an operator closure. One iteration costs one
/// operator application (plus one more per iteration when energy errors
/// are being recorded).
pub(crate) fn cg_operator<T: Scalar>(
    apply: impl Fn(&[T]) -> Vec<T>,
    b: &[T],
    x0: &[T],
    opts: &IterOptions<'_, T>,
) -> Result<(Vec<T>, SolveTrace)> {
    opts.validate()?;
    let n = b.len();
    if x0.len() != n {
        return Err(Error::DimensionMismatch("starting point length".into()));
    }
    let mut x = x0.to_vec();
    let ax = apply(&x);
    let mut r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rho = dot(&r, &r).re();

    let r0_norm = rho.sqrt();
    let mut residual_norms = vec![r0_norm];
    let mut epochs = vec![0usize];
    let mut anorm_errors = opts
        .x_star
        .map(|xs| vec![anorm_error_sq(&apply, &x, xs).max(0.0).sqrt()]);
    let e0_sq = anorm_errors.as_ref().map(|v| v[0] * v[0]);

    let mut converged = criterion_met(
        opts.stop,
        opts.tol,
        r0_norm,
        r0_norm,
        e0_sq,
        e0_sq,
    ) || r0_norm == 0.0;

    let mut k = 0usize;
    while !converged && k < opts.max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap).re();
        if pap <= 0.0 {
            return Err(Error::NotSpd(format!(
                "direction curvature {pap:e} at iteration {k}"
            )));
        }
        let alpha = T::from_f64(rho / pap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rho_next = dot(&r, &r).re();
        let beta = T::from_f64(rho_next / rho);
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rho = rho_next;
        k += 1;

        let rnorm = rho.max(0.0).sqrt();
        residual_norms.push(rnorm);
        epochs.push(k);
        let mut e_sq = None;
        if let Some(errs) = anorm_errors.as_mut() {
            let e = anorm_error_sq(&apply, &x, opts.x_star.unwrap()).max(0.0);
            errs.push(e.sqrt());
            e_sq = Some(e);
        }
        converged = criterion_met(opts.stop, opts.tol, r0_norm, rnorm, e0_sq, e_sq);
    }

    let solution = x.iter().map(|v| v.re()).collect();
    Ok((
        x,
        SolveTrace {
            solution,
            residual_norms,
            anorm_errors,
            epochs,
            iterations: k,
            converged,
            coordinate_audit: None,
        },
    ))
}

/// CG on a real symmetric positive definite sparse matrix. Stops on the
/// criterion in `opts`; fails with a curvature report if the matrix is not
/// positive definite along some search direction.
pub fn cg(
    a: &SparseMatrix<f64>,
    b: &[f64],
    x0: &[f64],
    opts: &IterOptions<'_, f64>,
) -> Result<SolveTrace> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(Error::DimensionMismatch("system shape".into()));
    }
    let (_, trace) = cg_operator(|v| a.spmv(v).expect("shape checked"), b, x0, opts)?;
    Ok(trace)
}

/// CG on a complex Hermitian positive definite dense matrix, with the
/// Hermitian inner product. Returns the complex iterate along with the
/// trace (whose `solution` field keeps only real parts).
pub fn cg_complex(
    a: &ComplexMatrix,
    b: &[Complex64],
    x0: &[Complex64],
    opts: &IterOptions<'_, Complex64>,
) -> Result<(Vec<Complex64>, SolveTrace)> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(Error::DimensionMismatch("system shape".into()));
    }
    cg_operator(|v| a.matvec(v), b, x0, opts)
}

/// Relative residual of a candidate solution, for verification.
pub fn relative_residual(a: &SparseMatrix<f64>, b: &[f64], x: &[f64]) -> f64 {
    let ax = a.spmv(x).expect("shape");
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    norm2(&r) / norm2(b).max(f64::MIN_POSITIVE)
}
