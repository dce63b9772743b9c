//! Householder QR factorization with optional column pivoting.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Result of a QR factorization: `A P = Q R` where `P` permutes columns,
/// `Q` has orthonormal columns (economy size, `m x min(m, n)`), and `R` is
/// upper triangular (`min(m, n) x n`).
///
/// `perm[j]` is the index of the original column of `A` that lands in
/// position `j`; without pivoting it is the identity.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
    pub perm: Vec<usize>,
}

/// Householder QR with optional greedy column pivoting.
///
/// With `pivot` set, each step moves the remaining column with the largest
/// trailing norm to the front (ties broken toward the lowest column index),
/// which makes the diagonal of `R` nonincreasing in magnitude. Trailing
/// column norms are downdated incrementally and recomputed from scratch when
/// cancellation makes the running value untrustworthy.
pub fn householder_qr(a: &DenseMatrix, pivot: bool) -> Result<QrFactors> {
    let m = a.nrows();
    let n = a.ncols();
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let p = m.min(n);
    let mut r = a.clone();
    // Householder vectors, kept for assembling the economy Q afterwards;
    // an empty vector marks a step where no reflection was needed.
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut perm: Vec<usize> = (0..n).collect();

    // Trailing squared column norms for pivot selection.
    let mut norms_sq: Vec<f64> = (0..n)
        .map(|j| r.col(j).iter().map(|v| v * v).sum())
        .collect();
    let norms_orig = norms_sq.clone();
    let recompute_guard = f64::EPSILON.sqrt();

    for k in 0..p {
        if pivot {
            let mut best = k;
            for j in (k + 1)..n {
                if norms_sq[j] > norms_sq[best] {
                    best = j;
                }
            }
            if best != k {
                for i in 0..m {
                    let tmp = r.get(i, k);
                    r.set(i, k, r.get(i, best));
                    r.set(i, best, tmp);
                }
                norms_sq.swap(k, best);
                perm.swap(k, best);
            }
        }

        // Householder vector for column k.
        let mut v: Vec<f64> = (k..m).map(|i| r.get(i, k)).collect();
        let xnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut applied = false;
        if xnorm > 0.0 {
            let alpha = if v[0] >= 0.0 { -xnorm } else { xnorm };
            v[0] -= alpha;
            let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if vnorm > 0.0 {
                for x in v.iter_mut() {
                    *x /= vnorm;
                }
                // R <- H R on the trailing block.
                for j in k..n {
                    let mut dot = 0.0;
                    for i in k..m {
                        dot += v[i - k] * r.get(i, j);
                    }
                    let two_dot = 2.0 * dot;
                    for i in k..m {
                        let val = r.get(i, j) - two_dot * v[i - k];
                        r.set(i, j, val);
                    }
                }
                applied = true;
            }
        }
        reflectors.push(if applied { v } else { Vec::new() });

        // Downdate trailing norms; recompute when the running value has lost
        // too much mass to be trusted.
        for j in (k + 1)..n {
            let rkj = r.get(k, j);
            norms_sq[j] -= rkj * rkj;
            if norms_sq[j] < recompute_guard * norms_orig[perm[j]] {
                norms_sq[j] = ((k + 1)..m).map(|i| r.get(i, j) * r.get(i, j)).sum();
            }
        }
    }

    for j in 0..n {
        for i in (j + 1)..p.min(m) {
            r.set(i, j, 0.0);
        }
    }

    // Economy Q = H_0 H_1 ... H_{p-1} applied to the leading m x p identity
    // slab, built by sweeping the reflectors in reverse. This keeps the cost
    // at O(m p^2) instead of the O(m^2 p) of accumulating a square Q.
    let mut q_econ = DenseMatrix::from_fn(m, p, |i, j| if i == j { 1.0 } else { 0.0 });
    for k in (0..p).rev() {
        let v = &reflectors[k];
        if v.is_empty() {
            continue;
        }
        // Columns left of k are still identity columns with no overlap in
        // rows k..m, so the reflector cannot change them.
        for j in k..p {
            let mut dot = 0.0;
            for i in k..m {
                dot += v[i - k] * q_econ.get(i, j);
            }
            let two_dot = 2.0 * dot;
            for i in k..m {
                let val = q_econ.get(i, j) - two_dot * v[i - k];
                q_econ.set(i, j, val);
            }
        }
    }
    let r_econ = DenseMatrix::from_fn(p, n, |i, j| if i <= j { r.get(i, j) } else { 0.0 });
    Ok(QrFactors {
        q: q_econ,
        r: r_econ,
        perm,
    })
}

/// Solves the upper-triangular system `R x = b` for one right-hand side.
pub fn solve_upper_triangular(r: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = r.ncols();
    if r.nrows() < n || b.len() < n {
        return Err(Error::DimensionMismatch("triangular solve".into()));
    }
    let mut x = vec![0.0; n];
    // A diagonal entry at roundoff level relative to the largest one means
    // the triangle came from a rank-deficient matrix, not a small pivot.
    let floor = (0..n).map(|i| r.get(i, i).abs()).fold(0.0, f64::max)
        * (n as f64)
        * f64::EPSILON;
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in (i + 1)..n {
            acc -= r.get(i, j) * x[j];
        }
        let d = r.get(i, i);
        if d.abs() <= floor {
            return Err(Error::Singular(format!("negligible pivot at position {i}")));
        }
        x[i] = acc / d;
    }
    Ok(x)
}

/// Least-squares solve `min ||A X - B||_F` for full-column-rank `A` via
/// unpivoted Householder QR. Also serves as the exact solver for square
/// nonsingular systems.
pub fn solve_ls(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: {} rows vs {} rows",
            a.nrows(),
            b.nrows()
        )));
    }
    if a.nrows() < a.ncols() {
        return Err(Error::InvalidArgument(
            "least squares requires nrows >= ncols".into(),
        ));
    }
    let f = householder_qr(a, false)?;
    let qtb = f.q.matmul_transa(b);
    let n = a.ncols();
    let mut x = DenseMatrix::zeros(n, b.ncols());
    for j in 0..b.ncols() {
        let rhs: Vec<f64> = (0..n).map(|i| qtb.get(i, j)).collect();
        let col = solve_upper_triangular(&f.r, &rhs).map_err(|_| {
            Error::Singular("matrix is rank deficient to working precision".into())
        })?;
        x.set_col(j, &col);
    }
    Ok(x)
}

/// Inverse of a square nonsingular matrix via QR.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
    }
    solve_ls(a, &DenseMatrix::identity(a.nrows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn reconstruction_error(a: &DenseMatrix, f: &QrFactors) -> f64 {
        let ap = a.select_columns(&f.perm);
        let qr = f.q.matmul(&f.r);
        ap.add_scaled(-1.0, &qr).frobenius_norm()
    }

    #[test]
    fn qr_reconstruction_meets_backward_error_bound() {
        // ||A P - Q R||_F <= 100 n u ||A||_F over seeded random instances.
        let u = 2f64.powi(-53);
        for shape in [(8usize, 5usize), (6, 6), (5, 8)] {
            for seed in 0..100u64 {
                let mut r = rng::trial_rng(900 + seed, 0);
                let a = rng::gaussian_matrix(&mut r, shape.0, shape.1);
                for pivot in [false, true] {
                    let f = householder_qr(&a, pivot).unwrap();
                    let bound = 100.0 * (shape.1 as f64) * u * a.frobenius_norm();
                    assert!(
                        reconstruction_error(&a, &f) <= bound,
                        "shape {shape:?} seed {seed} pivot {pivot}"
                    );
                    assert!(f.q.orthonormality_defect() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn pivoted_r_diagonal_is_nonincreasing() {
        let mut r = rng::root_rng(11);
        let a = rng::gaussian_matrix(&mut r, 10, 7);
        let f = householder_qr(&a, true).unwrap();
        for k in 1..7 {
            assert!(f.r.get(k, k).abs() <= f.r.get(k - 1, k - 1).abs() + 1e-12);
        }
    }

    #[test]
    fn pivot_ties_prefer_lowest_column_index() {
        // All columns of the identity have equal norm at every step, so the
        // pivot order must be 0, 1, 2, 3.
        let a = DenseMatrix::identity(4);
        let f = householder_qr(&a, true).unwrap();
        assert_eq!(f.perm, vec![0, 1, 2, 3]);
    }

    #[test]
    fn unpivoted_perm_is_identity() {
        let mut r = rng::root_rng(12);
        let a = rng::gaussian_matrix(&mut r, 5, 3);
        let f = householder_qr(&a, false).unwrap();
        assert_eq!(f.perm, vec![0, 1, 2]);
    }

    #[test]
    fn least_squares_matches_normal_equations_solution() {
        let mut r = rng::root_rng(13);
        let a = rng::gaussian_matrix(&mut r, 8, 3);
        let b = rng::gaussian_matrix(&mut r, 8, 2);
        let x = solve_ls(&a, &b).unwrap();
        // Residual must be orthogonal to the column space.
        let resid = a.matmul(&x).add_scaled(-1.0, &b);
        let atr = a.matmul_transa(&resid);
        assert!(atr.max_abs() < 1e-12);
    }

    #[test]
    fn inverse_of_singular_matrix_is_an_error() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(inverse(&a).is_err());
    }
}
