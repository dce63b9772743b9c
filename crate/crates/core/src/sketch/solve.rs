//! Downstream sketch probes: sketched least squares against the exact
//! solver, and projection-based low-rank approximation against the optimal
//! truncation.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::qr::{householder_qr, solve_ls};
use crate::sketch::embed::measure_embedding;
use crate::sketch::operator::SketchOperator;
use crate::svd::{dense_svd, singular_values};

/// Result of solving `min ||A X - B||_F` through a sketch.
#[derive(Debug, Clone)]
pub struct SketchSolve {
    /// Minimizer of the sketched problem `min ||Ω^T A X - Ω^T B||_F`.
    pub solution: DenseMatrix,
    /// `||A X_sketch - B||_F` evaluated on the original problem.
    pub sketched_residual: f64,
    /// `||A X_opt - B||_F` from the exact least-squares solver.
    pub optimal_residual: f64,
    /// Sketched over optimal residual; reported as 1 for consistent systems
    /// where both residuals are at roundoff level.
    pub ratio: f64,
}

/// Solves least squares through the sketch and compares the achieved
/// residual with the exact minimum.
pub fn sketch_and_solve_ls(
    a: &DenseMatrix,
    b: &DenseMatrix,
    op: &SketchOperator,
) -> Result<SketchSolve> {
    let n = a.nrows();
    let d = a.ncols();
    if b.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, matrix has {n}",
            b.nrows()
        )));
    }
    if op.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator expects {} rows, matrix has {n}",
            op.ambient_dim()
        )));
    }
    if n < d {
        return Err(Error::InvalidArgument(
            "least squares requires nrows >= ncols".into(),
        ));
    }
    let fa = householder_qr(a, true)?;
    if rank_deficient(&fa.r) {
        return Err(Error::InvalidArgument(
            "input matrix must have full column rank".into(),
        ));
    }

    let sa = op.apply(a)?;
    let sb = op.apply(b)?;
    let deficient = if op.sketch_dim() < d {
        true
    } else {
        rank_deficient(&householder_qr(&sa, true)?.r)
    };
    if deficient {
        // The basis of range(A) is insensitive to the column pivoting above.
        let alpha = measure_embedding(op, &fa.q)?.alpha;
        return Err(Error::SketchDeficient { alpha });
    }

    let solution = solve_ls(&sa, &sb)?;
    let x_opt = solve_ls(a, b)?;
    let sketched_residual = a.matmul(&solution).add_scaled(-1.0, b).frobenius_norm();
    let optimal_residual = a.matmul(&x_opt).add_scaled(-1.0, b).frobenius_norm();
    let noise = 1e-13 * (b.frobenius_norm() + a.frobenius_norm() * x_opt.frobenius_norm());
    let ratio = if optimal_residual <= noise {
        1.0
    } else {
        sketched_residual / optimal_residual
    };
    Ok(SketchSolve {
        solution,
        sketched_residual,
        optimal_residual,
        ratio,
    })
}

fn rank_deficient(r: &DenseMatrix) -> bool {
    let p = r.nrows().min(r.ncols());
    let head = r.get(0, 0).abs();
    let tail = r.get(p - 1, p - 1).abs();
    tail <= 1e-12 * head
}

/// Low-rank approximation built from a sketched range.
#[derive(Debug, Clone)]
pub struct RandomizedSvd {
    /// Orthonormal basis of the captured range (columns).
    pub basis: DenseMatrix,
    /// `basis^T A`; the approximation is `basis * coefficients`.
    pub coefficients: DenseMatrix,
    /// Rank the approximation is judged against.
    pub rank_target: usize,
    /// `||A - approx||_F`.
    pub absolute_error: f64,
    /// Error over the optimal rank-`rank_target` truncation error; 1 when
    /// both are at roundoff level.
    pub error_ratio: f64,
}

/// Projects `A` onto the range captured by `A Ω` and reports the error
/// relative to the best rank-`r` truncation.
pub fn randomized_svd(a: &DenseMatrix, op: &SketchOperator, r: usize) -> Result<RandomizedSvd> {
    if op.ambient_dim() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "operator expects {} columns, matrix has {}",
            op.ambient_dim(),
            a.ncols()
        )));
    }
    if r == 0 || op.sketch_dim() < r {
        return Err(Error::InvalidArgument(format!(
            "sketch size {} cannot target rank {r}",
            op.sketch_dim()
        )));
    }
    let y = op.apply(&a.transpose())?.transpose();
    let ysvd = dense_svd(&y)?;
    let cutoff = 1e-12 * ysvd.sigma.first().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..ysvd.sigma.len())
        .filter(|&i| ysvd.sigma[i] > cutoff && ysvd.sigma[i] > 0.0)
        .collect();
    let basis = ysvd.u.select_columns(&kept);
    let coefficients = basis.matmul_transa(a);
    let approx = basis.matmul(&coefficients);
    let absolute_error = a.add_scaled(-1.0, &approx).frobenius_norm();

    let sv = singular_values(a)?;
    let optimal_error = sv.iter().skip(r).map(|s| s * s).sum::<f64>().sqrt();
    let scale = a.frobenius_norm();
    let error_ratio = if optimal_error <= 1e-13 * scale {
        if absolute_error <= 1e-11 * scale.max(1e-300) {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        absolute_error / optimal_error
    };
    Ok(RandomizedSvd {
        basis,
        coefficients,
        rank_target: r,
        absolute_error,
        error_ratio,
    })
}
