//! Singular value decomposition via Golub-Kahan bidiagonalization followed
//! by implicit-shift QR on the bidiagonal factor.
//!
//! The implementation favors a self-contained, well-understood algorithm
//! over speed: it is the trusted oracle the rest of the crate measures
//! spectral quantities with.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Economy-size SVD `A = U diag(sigma) V^T` with `U` of shape
/// `m x min(m, n)`, `V` of shape `n x min(m, n)`, and `sigma` nonnegative in
/// descending order.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

/// Computes the SVD. Handles any shape (wide inputs are transposed
/// internally); fails only if the bidiagonal QR iteration stalls, which a
/// bounded iteration count turns into an error instead of a hang.
pub fn dense_svd(a: &DenseMatrix) -> Result<SvdResult> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if a.nrows() < a.ncols() {
        let t = svd_tall(&a.transpose())?;
        return Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    svd_tall(a)
}

/// Golub-Kahan-Reinsch SVD for m >= n.
fn svd_tall(a: &DenseMatrix) -> Result<SvdResult> {
    let m = a.nrows();
    let n = a.ncols();
    debug_assert!(m >= n);
    let nu = n;
    let mut work_a = a.clone();
    let mut s = vec![0.0f64; (m + 1).min(n)];
    let mut e = vec![0.0f64; n];
    let mut work = vec![0.0f64; m];
    let mut u = DenseMatrix::zeros(m, nu);
    let mut v = DenseMatrix::zeros(n, n);

    // Householder bidiagonalization, storing the transformations in the
    // lower/upper triangles of the working copy.
    let nct = (m - 1).min(n);
    let nrt = if n >= 2 { (n - 2).min(m) } else { 0 };
    for k in 0..nct.max(nrt) {
        if k < nct {
            s[k] = 0.0;
            for i in k..m {
                s[k] = s[k].hypot(work_a.get(i, k));
            }
            if s[k] != 0.0 {
                if work_a.get(k, k) < 0.0 {
                    s[k] = -s[k];
                }
                for i in k..m {
                    let val = work_a.get(i, k) / s[k];
                    work_a.set(i, k, val);
                }
                let val = work_a.get(k, k) + 1.0;
                work_a.set(k, k, val);
            }
            s[k] = -s[k];
        }
        for j in (k + 1)..n {
            if k < nct && s[k] != 0.0 {
                let mut t = 0.0;
                for i in k..m {
                    t += work_a.get(i, k) * work_a.get(i, j);
                }
                t = -t / work_a.get(k, k);
                for i in k..m {
                    let val = work_a.get(i, j) + t * work_a.get(i, k);
                    work_a.set(i, j, val);
                }
            }
            e[j] = work_a.get(k, j);
        }
        if k < nct {
            for i in k..m {
                u.set(i, k, work_a.get(i, k));
            }
        }
        if k < nrt {
            e[k] = 0.0;
            for i in (k + 1)..n {
                e[k] = e[k].hypot(e[i]);
            }
            if e[k] != 0.0 {
                if e[k + 1] < 0.0 {
                    e[k] = -e[k];
                }
                for i in (k + 1)..n {
                    e[i] /= e[k];
                }
                e[k + 1] += 1.0;
            }
            e[k] = -e[k];
            if k + 1 < m && e[k] != 0.0 {
                for item in work.iter_mut().take(m).skip(k + 1) {
                    *item = 0.0;
                }
                for j in (k + 1)..n {
                    for i in (k + 1)..m {
                        work[i] += e[j] * work_a.get(i, j);
                    }
                }
                for j in (k + 1)..n {
                    let t = -e[j] / e[k + 1];
                    for i in (k + 1)..m {
                        let val = work_a.get(i, j) + t * work[i];
                        work_a.set(i, j, val);
                    }
                }
            }
            for i in (k + 1)..n {
                v.set(i, k, e[i]);
            }
        }
    }

    // Final bidiagonal of order p.
    let mut p = n.min(m + 1);
    if nct < n {
        s[nct] = work_a.get(nct, nct);
    }
    if m < p {
        s[p - 1] = 0.0;
    }
    if nrt + 1 < p {
        e[nrt] = work_a.get(nrt, p - 1);
    }
    e[p - 1] = 0.0;

    // Accumulate the left Householder transformations into U.
    for j in nct..nu {
        for i in 0..m {
            u.set(i, j, 0.0);
        }
        u.set(j, j, 1.0);
    }
    for k in (0..nct).rev() {
        if s[k] != 0.0 {
            for j in (k + 1)..nu {
                let mut t = 0.0;
                for i in k..m {
                    t += u.get(i, k) * u.get(i, j);
                }
                t = -t / u.get(k, k);
                for i in k..m {
                    let val = u.get(i, j) + t * u.get(i, k);
                    u.set(i, j, val);
                }
            }
            for i in k..m {
                let val = -u.get(i, k);
                u.set(i, k, val);
            }
            let val = 1.0 + u.get(k, k);
            u.set(k, k, val);
            for i in 0..k.saturating_sub(1) {
                u.set(i, k, 0.0);
            }
        } else {
            for i in 0..m {
                u.set(i, k, 0.0);
            }
            u.set(k, k, 1.0);
        }
    }

    // Accumulate the right Householder transformations into V.
    for k in (0..n).rev() {
        if k < nrt && e[k] != 0.0 {
            for j in (k + 1)..nu {
                let mut t = 0.0;
                for i in (k + 1)..n {
                    t += v.get(i, k) * v.get(i, j);
                }
                t = -t / v.get(k + 1, k);
                for i in (k + 1)..n {
                    let val = v.get(i, j) + t * v.get(i, k);
                    v.set(i, j, val);
                }
            }
        }
        for i in 0..n {
            v.set(i, k, 0.0);
        }
        v.set(k, k, 1.0);
    }

    // Implicit-shift QR iteration on the bidiagonal.
    let pp_final = p - 1;
    let mut iter = 0usize;
    let eps = 2f64.powi(-52);
    let tiny = 2f64.powi(-966);
    while p > 0 {
        if iter > 500 {
            return Err(Error::NoConvergence(
                "bidiagonal QR exceeded 500 sweeps".into(),
            ));
        }
        // Locate negligible elements of s and e to pick the next action.
        let mut k = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny + eps * (s[ku].abs() + s[ku + 1].abs()) {
                e[ku] = 0.0;
                break;
            }
            k -= 1;
        }
        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let t = if ks != p as isize { e[ksu].abs() } else { 0.0 }
                    + if ks != k + 1 { e[ksu - 1].abs() } else { 0.0 };
                if s[ksu].abs() <= tiny + eps * t {
                    s[ksu] = 0.0;
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            // Deflate negligible s[p-1].
            1 => {
                let mut f = e[p - 2];
                e[p - 2] = 0.0;
                for j in (k..=(p - 2)).rev() {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    if j != k {
                        f = -sn * e[j - 1];
                        e[j - 1] *= cs;
                    }
                    for i in 0..n {
                        let t2 = cs * v.get(i, j) + sn * v.get(i, p - 1);
                        let val = -sn * v.get(i, j) + cs * v.get(i, p - 1);
                        v.set(i, p - 1, val);
                        v.set(i, j, t2);
                    }
                }
            }
            // Split at negligible s[k-1].
            2 => {
                let mut f = e[k - 1];
                e[k - 1] = 0.0;
                for j in k..p {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;

                    s[j] = t;
                    f = -sn * e[j];
                    e[j] *= cs;
                    for i in 0..m {
                        let t2 = cs * u.get(i, j) + sn * u.get(i, k - 1);
                        let val = -sn * u.get(i, j) + cs * u.get(i, k - 1);
                        u.set(i, k - 1, val);
                        u.set(i, j, t2);
                    }
                }
            }
            // One implicit-shift QR step on rows k..p.
            3 => {
                let scale = s[p - 1]
                    .abs()
                    .max(s[p - 2].abs())
                    .max(e[p - 2].abs())
                    .max(s[k].abs())
                    .max(e[k].abs());
                let sp = s[p - 1] / scale;
                let spm1 = s[p - 2] / scale;
                let epm1 = e[p - 2] / scale;
                let sk = s[k] / scale;
                let ek = e[k] / scale;
                let b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
                let c = (sp * epm1) * (sp * epm1);
                let mut shift = 0.0;
                if b != 0.0 || c != 0.0 {
                    shift = (b * b + c).sqrt();
                    if b < 0.0 {
                        shift = -shift;
                    }
                    shift = c / (b + shift);
                }
                let mut f = (sk + sp) * (sk - sp) + shift;
                let mut g = sk * ek;

                for j in k..(p - 1) {
                    let mut t = f.hypot(g);
                    let mut cs = f / t;
                    let mut sn = g / t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs * s[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * s[j];
                    g = sn * s[j + 1];
                    s[j + 1] *= cs;
                    for i in 0..n {
                        let t2 = cs * v.get(i, j) + sn * v.get(i, j + 1);
                        let val = -sn * v.get(i, j) + cs * v.get(i, j + 1);
                        v.set(i, j + 1, val);
                        v.set(i, j, t2);
                    }
                    t = f.hypot(g);
                    cs = f / t;
                    sn = g / t;
                    s[j] = t;
                    f = cs * e[j] + sn * s[j + 1];
                    s[j + 1] = -sn * e[j] + cs * s[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] *= cs;
                    if j < m - 1 {
                        for i in 0..m {
                            let t2 = cs * u.get(i, j) + sn * u.get(i, j + 1);
                            let val = -sn * u.get(i, j) + cs * u.get(i, j + 1);
                            u.set(i, j + 1, val);
                            u.set(i, j, t2);
                        }
                    }
                }
                e[p - 2] = f;
                iter += 1;
            }
            // Convergence for s[k]; fix sign and restore descending order.
            _ => {
                if s[k] <= 0.0 {
                    s[k] = if s[k] < 0.0 { -s[k] } else { 0.0 };
                    for i in 0..=pp_final.min(n - 1) {
                        let val = -v.get(i, k);
                        v.set(i, k, val);
                    }
                }
                let mut kk = k;
                while kk < pp_final {
                    if s[kk] >= s[kk + 1] {
                        break;
                    }
                    s.swap(kk, kk + 1);
                    if kk < n - 1 {
                        for i in 0..n {
                            let t = v.get(i, kk + 1);
                            let val = v.get(i, kk);
                            v.set(i, kk + 1, val);
                            v.set(i, kk, t);
                        }
                    }
                    if kk < m - 1 {
                        for i in 0..m {
                            let t = u.get(i, kk + 1);
                            let val = u.get(i, kk);
                            u.set(i, kk + 1, val);
                            u.set(i, kk, t);
                        }
                    }
                    kk += 1;
                }
                iter = 0;
                p -= 1;
            }
        }
    }

    let sigma: Vec<f64> = s[..nu].to_vec();
    let v_econ = DenseMatrix::from_fn(n, nu, |i, j| v.get(i, j));
    Ok(SvdResult {
        u,
        sigma,
        v: v_econ,
    })
}

/// Singular values only.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(dense_svd(a)?.sigma)
}

/// Spectral norm (largest singular value).
pub fn two_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(dense_svd(a)?.sigma.first().copied().unwrap_or(0.0))
}

/// Numerical rank at relative tolerance `rtol` (singular values above
/// `rtol * sigma_max` count).
pub fn rank(a: &DenseMatrix, rtol: f64) -> Result<usize> {
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&x| x > rtol * smax).count())
}

/// Moore-Penrose pseudoinverse, truncating singular values at
/// `rtol * sigma_max`.
pub fn pinv(a: &DenseMatrix, rtol: f64) -> Result<DenseMatrix> {
    let f = dense_svd(a)?;
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let p = f.sigma.len();
    let mut vs = f.v.clone();
    for j in 0..p {
        let inv = if f.sigma[j] > rtol * smax && f.sigma[j] > 0.0 {
            1.0 / f.sigma[j]
        } else {
            0.0
        };
        for i in 0..vs.nrows() {
            let val = vs.get(i, j) * inv;
            vs.set(i, j, val);
        }
    }
    Ok(vs.matmul(&f.u.transpose()))
}

/// Best rank-`r` approximation by SVD truncation.
pub fn truncate(a: &DenseMatrix, r: usize) -> Result<DenseMatrix> {
    let f = dense_svd(a)?;
    let r = r.min(f.sigma.len());
    let mut out = DenseMatrix::zeros(a.nrows(), a.ncols());
    for k in 0..r {
        let sk = f.sigma[k];
        for j in 0..a.ncols() {
            let vkj = f.v.get(j, k) * sk;
            for i in 0..a.nrows() {
                let val = out.get(i, j) + f.u.get(i, k) * vkj;
                out.set(i, j, val);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn check_svd(a: &DenseMatrix, f: &SvdResult) {
        let n_dim = a.nrows().max(a.ncols()) as f64;
        // Orthonormality to 1e-10 * n.
        assert!(f.u.orthonormality_defect() <= 1e-10 * n_dim);
        assert!(f.v.orthonormality_defect() <= 1e-10 * n_dim);
        // Descending nonnegative singular values.
        for k in 0..f.sigma.len() {
            assert!(f.sigma[k] >= 0.0);
            if k > 0 {
                assert!(f.sigma[k] <= f.sigma[k - 1] + 1e-14);
            }
        }
        // Reconstruction to 1e-10 * ||A||_F.
        let us = DenseMatrix::from_fn(f.u.nrows(), f.sigma.len(), |i, j| {
            f.u.get(i, j) * f.sigma[j]
        });
        let recon = us.matmul(&f.v.transpose());
        let err = recon.add_scaled(-1.0, a).frobenius_norm();
        assert!(
            err <= 1e-10 * a.frobenius_norm().max(1e-300),
            "reconstruction error {err}"
        );
    }

    #[test]
    fn hand_checked_two_by_two() {
        // A = [[3, 0], [4, 5]] has singular values 3*sqrt(5) and sqrt(5).
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![4.0, 5.0]]).unwrap();
        let f = dense_svd(&a).unwrap();
        assert!((f.sigma[0] - 45f64.sqrt()).abs() < 1e-12);
        assert!((f.sigma[1] - 5f64.sqrt()).abs() < 1e-12);
        check_svd(&a, &f);
    }

    #[test]
    fn diagonal_matrix_recovers_absolute_values_sorted() {
        let a = DenseMatrix::diag_from(&[3.0, -7.0, 0.5]);
        let f = dense_svd(&a).unwrap();
        assert!((f.sigma[0] - 7.0).abs() < 1e-13);
        assert!((f.sigma[1] - 3.0).abs() < 1e-13);
        assert!((f.sigma[2] - 0.5).abs() < 1e-13);
        check_svd(&a, &f);
    }

    #[test]
    fn random_instances_meet_residual_invariants() {
        // 100 seeded instances per shape, including square, tall, and wide.
        for &(m, n) in &[(6usize, 6usize), (8, 5), (5, 8)] {
            for seed in 0..100u64 {
                let mut r = rng::trial_rng(7100 + m as u64 * 17 + n as u64, seed);
                let a = rng::gaussian_matrix(&mut r, m, n);
                let f = dense_svd(&a).unwrap();
                assert_eq!(f.sigma.len(), m.min(n));
                check_svd(&a, &f);
            }
        }
    }

    #[test]
    fn rank_one_matrix_has_one_nonzero_singular_value() {
        let u = [1.0, -2.0, 0.5, 3.0];
        let v = [2.0, 1.0, -1.0];
        let a = DenseMatrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        let f = dense_svd(&a).unwrap();
        assert!(f.sigma[1] <= 1e-12 * f.sigma[0]);
        assert!(f.sigma[2] <= 1e-12 * f.sigma[0]);
        check_svd(&a, &f);
    }

    #[test]
    fn zero_matrix_is_handled() {
        let a = DenseMatrix::zeros(3, 2);
        let f = dense_svd(&a).unwrap();
        assert_eq!(f.sigma, vec![0.0, 0.0]);
        assert!(f.u.orthonormality_defect() < 1e-14);
        assert!(f.v.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn pinv_satisfies_moore_penrose_identities() {
        let mut r = rng::root_rng(77);
        let a = rng::gaussian_matrix(&mut r, 6, 4);
        let p = pinv(&a, 1e-12).unwrap();
        let apa = a.matmul(&p).matmul(&a);
        let pap = p.matmul(&a).matmul(&p);
        assert!(apa.add_scaled(-1.0, &a).max_abs() < 1e-11);
        assert!(pap.add_scaled(-1.0, &p).max_abs() < 1e-11);
    }

    #[test]
    fn truncation_error_is_tail_energy() {
        let mut r = rng::root_rng(78);
        let a = rng::gaussian_matrix(&mut r, 7, 7);
        let f = dense_svd(&a).unwrap();
        let a2 = truncate(&a, 3).unwrap();
        let err = a.add_scaled(-1.0, &a2).frobenius_norm();
        let tail: f64 = f.sigma[3..].iter().map(|s| s * s).sum::<f64>().sqrt();
        assert!((err - tail).abs() < 1e-10 * a.frobenius_norm());
    }
}
