//! Restarted s-step conjugate gradients tracking the normalized residual
//! directions `y_k = r_k / ||r_k||`. The inner steps run with full
//! reorthogonalization to emulate exact arithmetic, since the questions
//! being probed (two-point accumulation of the `y_k`, Cauchy behavior of
//! even/odd subsequences) concern the exact-arithmetic iteration.

use crate::dense::DenseMatrix;
use crate::eig::symmetric_eig;
use crate::error::{Error, Result};
use crate::qr;
use crate::scalar::norm2;

/// Everything observable about one run: the direction sequence, restart
/// residual norms, the Cauchy increments of the even and odd direction
/// subsequences, and the per-restart Krylov orthogonality defect
/// `||V_s^T r_{k+1}|| / ||r_{k+1}||`.
#[derive(Debug, Clone)]
pub struct ForsytheRun {
    pub y: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
    /// `||y_{k+2} - y_k||` over even k, in order.
    pub even_increments: Vec<f64>,
    /// `||y_{k+2} - y_k||` over odd k, in order.
    pub odd_increments: Vec<f64>,
    pub krylov_orthogonality: Vec<f64>,
    /// Set when the residual vanished or the Krylov basis lost rank before
    /// the restart budget was exhausted.
    pub early_termination: bool,
}

/// Number of distinct eigenvalues, clustering to relative spacing 1e-8.
fn distinct_eigenvalue_count(a: &DenseMatrix) -> Result<usize> {
    let eig = symmetric_eig(a)?;
    let spread = eig.values.last().unwrap() - eig.values[0];
    let tol = 1e-8 * spread.max(1e-300);
    let mut count = 1;
    for w in eig.values.windows(2) {
        if w[1] - w[0] > tol {
            count += 1;
        }
    }
    Ok(count)
}

/// Run `big_k` restarts of `s` fully reorthogonalized CG steps on the
/// symmetric positive definite system. Requires `1 <= s < d(A)` where
/// `d(A)` counts distinct eigenvalues; rank loss inside a restart (the
/// starting residual supporting fewer than `s+1` eigencomponents) ends the
/// run early with a flag rather than an error.
pub fn forsythe_iteration(
    a: &DenseMatrix,
    b: &[f64],
    x0: &[f64],
    s: usize,
    big_k: usize,
) -> Result<ForsytheRun> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n || x0.len() != n {
        return Err(Error::DimensionMismatch("system shape".into()));
    }
    if !a.is_symmetric(1e-12) {
        return Err(Error::NotSpd("matrix must be symmetric".into()));
    }
    let d = distinct_eigenvalue_count(a)?;
    if s == 0 || s >= d {
        return Err(Error::InvalidArgument(format!(
            "restart length s = {s} must satisfy 1 <= s < {d} (distinct eigenvalues)"
        )));
    }

    let mut x = x0.to_vec();
    let mut y: Vec<Vec<f64>> = Vec::with_capacity(big_k + 1);
    let mut residual_norms = Vec::with_capacity(big_k + 1);
    let mut krylov_orthogonality = Vec::with_capacity(big_k);
    let mut early_termination = false;
    let anorm_est = a.frobenius_norm();
    // A residual this far below the cancellation level of b - A x carries
    // no directional information; treat it as exact termination. Scaled to
    // the current iterate so that pure-decay runs (b = 0) continue cleanly.
    let noise_floor =
        |x: &[f64], b: &[f64]| 4e-15 * (norm2(b) + anorm_est * norm2(x)) + 1e-300;

    'restarts: for _k in 0..=big_k {
        let ax = a.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let rnorm = norm2(&r);
        if rnorm <= noise_floor(&x, b) {
            early_termination = true;
            break;
        }
        residual_norms.push(rnorm);
        y.push(r.iter().map(|v| v / rnorm).collect());
        if _k == big_k {
            break;
        }

        // Krylov basis of this restart for the orthogonality diagnostic.
        let ynow = y.last().unwrap().clone();
        let mut kmat = DenseMatrix::zeros(n, s);
        let mut col = ynow.clone();
        for j in 0..s {
            kmat.set_col(j, &col);
            col = a.matvec(&col);
        }
        let kf = qr::householder_qr(&kmat, false)?;
        let full_rank = (0..s).all(|j| kf.r.get(j, j).abs() > 1e-12 * rnorm.max(1.0));
        if !full_rank {
            early_termination = true;
            break;
        }

        // s CG steps with full reorthogonalization of residuals and
        // A-orthogonalization of directions.
        let mut res = r.clone();
        let mut dirs: Vec<Vec<f64>> = vec![res.clone()];
        let mut adirs: Vec<Vec<f64>> = Vec::new();
        let mut past_res: Vec<Vec<f64>> = vec![res.clone()];
        for _j in 0..s {
            let p = dirs.last().unwrap().clone();
            let ap = a.matvec(&p);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                if pap < 0.0 {
                    return Err(Error::NotSpd(format!("direction curvature {pap:e}")));
                }
                early_termination = true;
                break 'restarts;
            }
            let rr: f64 = res.iter().map(|v| v * v).sum();
            let alpha = rr / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                res[i] -= alpha * ap[i];
            }
            // Project out every previous residual direction.
            for prev in &past_res {
                let pp: f64 = prev.iter().map(|v| v * v).sum();
                if pp > 0.0 {
                    let c: f64 =
                        res.iter().zip(prev).map(|(a, b)| a * b).sum::<f64>() / pp;
                    for i in 0..n {
                        res[i] -= c * prev[i];
                    }
                }
            }
            let rr_new: f64 = res.iter().map(|v| v * v).sum();
            let beta = rr_new / rr;
            let mut pnew: Vec<f64> = res.iter().zip(&p).map(|(r, p)| r + beta * p).collect();
            adirs.push(ap);
            // Force conjugacy against all earlier directions.
            for (pd, apd) in dirs.iter().zip(&adirs) {
                let denom: f64 = pd.iter().zip(apd.iter()).map(|(a, b)| a * b).sum();
                if denom > 0.0 {
                    let c: f64 =
                        pnew.iter().zip(apd.iter()).map(|(a, b)| a * b).sum::<f64>() / denom;
                    for i in 0..n {
                        pnew[i] -= c * pd[i];
                    }
                }
            }
            past_res.push(res.clone());
            dirs.push(pnew);
        }

        // Fresh residual after the restart; measure its orthogonality to
        // the restart's Krylov space.
        let ax = a.matvec(&x);
        let rnew: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let rnew_norm = norm2(&rnew);
        if rnew_norm <= noise_floor(&x, b) {
            // Record the defect as exact and finish on the next loop pass.
            krylov_orthogonality.push(0.0);
            continue;
        }
        let vt_r = kf.q.matvec_transa(&rnew);
        krylov_orthogonality.push(norm2(&vt_r) / rnew_norm);
    }

    let increments = |parity: usize| -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = parity;
        while k + 2 < y.len() {
            let d: f64 = y[k]
                .iter()
                .zip(&y[k + 2])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            out.push(d);
            k += 2;
        }
        out
    };

    Ok(ForsytheRun {
        even_increments: increments(0),
        odd_increments: increments(1),
        y,
        residual_norms,
        krylov_orthogonality,
        early_termination,
    })
}
