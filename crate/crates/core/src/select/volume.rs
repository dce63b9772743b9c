//! Volume-sampling trace objective and the randomized search for the worst
//! orthogonal conjugation in trace column-subset selection.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::rng::{haar_orthogonal, root_rng, standard_normal};
use crate::select::nystrom::{nystrom_error, NystromNorm};

/// Elementary symmetric polynomials `e_0..e_n` of the values, by expanding
/// the product of `(x + v)` factors.
fn elem_sym(vals: &[f64]) -> Vec<f64> {
    let n = vals.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (m, &v) in vals.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e
}

/// Expected trace residual of volume sampling on a spectrum:
/// `y_k = (k+1) e_{k+1}(lambda) / e_k(lambda)`.
///
/// The value is scale-covariant (`y_k(c lambda) = c y_k(lambda)`), which is
/// used to rescale internally when the symmetric polynomials would overflow;
/// at ordinary scales the polynomials are computed on the raw input.
pub fn volume_objective(lambda: &[f64], k: usize) -> Result<f64> {
    let n = lambda.len();
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "objective index {k} out of range for {n} values"
        )));
    }
    if lambda.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "spectrum values must be positive and finite".into(),
        ));
    }
    let mx = lambda.iter().fold(0.0_f64, |m, &v| m.max(v));
    // e_j <= C(n, j) mx^j, so ln e_j <= n (ln 2 + |ln mx|); rescale by the
    // maximum only when that bound approaches the overflow threshold.
    let needs_rescale = (n as f64) * (mx.ln().abs() + std::f64::consts::LN_2) > 600.0;
    let scale = if needs_rescale { mx } else { 1.0 };
    let e = if needs_rescale {
        let scaled: Vec<f64> = lambda.iter().map(|&v| v / scale).collect();
        elem_sym(&scaled)
    } else {
        elem_sym(lambda)
    };
    Ok(scale * (k + 1) as f64 * e[k + 1] / e[k])
}

/// Orthogonal `V` such that `(V^T diag(lambda) V)^{-1}` has an equal
/// diagonal, built by repeatedly rotating the extreme diagonal pair of the
/// inverse onto their average until the spread is below `1e-10` relative to
/// the mean.
pub fn equal_diagonal_rotation(lambda: &[f64]) -> Result<DenseMatrix> {
    let n = lambda.len();
    if n == 0 || lambda.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(
            "spectrum values must be positive".into(),
        ));
    }
    let mut l = DenseMatrix::diag_from(&lambda.iter().map(|&v| 1.0 / v).collect::<Vec<_>>());
    let mut v = DenseMatrix::identity(n);
    let mean = (0..n).map(|i| l.get(i, i)).sum::<f64>() / n as f64;
    let tol = 1e-10 * mean.abs().max(1.0);
    for _ in 0..200 * n * n {
        let (mut p, mut q) = (0, 0);
        for i in 1..n {
            if l.get(i, i) > l.get(p, p) {
                p = i;
            }
            if l.get(i, i) < l.get(q, q) {
                q = i;
            }
        }
        let (a, b) = (l.get(p, p), l.get(q, q));
        if a - b <= tol {
            return Ok(v);
        }
        let c = l.get(p, q);
        let theta = 0.5 * (b - a).atan2(2.0 * c);
        let (co, si) = (theta.cos(), theta.sin());
        // Two-sided rotation of rows/columns p and q of L; V picks up the
        // same column mix.
        for j in 0..n {
            let (lp, lq) = (l.get(p, j), l.get(q, j));
            l.set(p, j, co * lp + si * lq);
            l.set(q, j, -si * lp + co * lq);
        }
        for i in 0..n {
            let (lp, lq) = (l.get(i, p), l.get(i, q));
            l.set(i, p, co * lp + si * lq);
            l.set(i, q, -si * lp + co * lq);
        }
        for i in 0..n {
            let (vp, vq) = (v.get(i, p), v.get(i, q));
            v.set(i, p, co * vp + si * vq);
            v.set(i, q, -si * vp + co * vq);
        }
    }
    Err(Error::NoConvergence(
        "diagonal averaging did not flatten the spread".into(),
    ))
}

/// Lower-bound search for the worst-case trace residual over orthogonal
/// conjugations, reported against the volume-sampling objective.
#[derive(Debug, Clone)]
pub struct VolumeGap {
    /// Best (largest) min-over-subsets trace residual found.
    pub x_hat: f64,
    /// Volume-sampling objective `y_k`.
    pub y_k: f64,
    /// `y_k - x_hat`.
    pub gap: f64,
    /// Number of search evaluations spent.
    pub trials: usize,
}

fn min_subset_trace(kmat: &DenseMatrix, k: usize) -> Result<f64> {
    let n = kmat.nrows();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    loop {
        let v = nystrom_error(kmat, &subset, NystromNorm::Nuclear)?;
        if v < best {
            best = v;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(best);
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

fn conjugate_spectrum(v: &DenseMatrix, lambda: &[f64]) -> DenseMatrix {
    let d = DenseMatrix::diag_from(lambda);
    v.matmul_transa(&d.matmul(v))
}

fn random_givens(v: &DenseMatrix, rng: &mut ChaCha8Rng, angle_scale: f64) -> DenseMatrix {
    let n = v.nrows();
    let p = rng.gen_range(0..n);
    let mut q = rng.gen_range(0..n - 1);
    if q >= p {
        q += 1;
    }
    let theta = angle_scale * standard_normal(rng);
    let (co, si) = (theta.cos(), theta.sin());
    let mut out = v.clone();
    for i in 0..n {
        let (vp, vq) = (v.get(i, p), v.get(i, q));
        out.set(i, p, co * vp + si * vq);
        out.set(i, q, -si * vp + co * vq);
    }
    out
}

/// Estimates `max_V min_{|I|=k} tr(K - K[:,I] K[I,I]^{-1} K[I,:])` for
/// `K = V^T diag(lambda) V` by randomized search (Haar draws followed by
/// local Givens refinement of the incumbent), and compares the resulting
/// lower bound with the volume objective `y_k`. For `k = n-1` the
/// equal-diagonal construction, which attains the objective exactly, is
/// seeded as a candidate.
pub fn trace_cssp_worst_vs_volume(
    lambda: &[f64],
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<VolumeGap> {
    let n = lambda.len();
    if n > 8 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive inner minimization is limited to n <= 8, got {n}"
        )));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "subset size {k} out of range for dimension {n}"
        )));
    }
    let y_k = volume_objective(lambda, k)?;
    let mut rng = root_rng(seed);

    let mut evals = 0;
    let mut best_v = DenseMatrix::identity(n);
    let mut x_hat = min_subset_trace(&conjugate_spectrum(&best_v, lambda), k)?;
    evals += 1;
    if k == n - 1 {
        let v = equal_diagonal_rotation(lambda)?;
        let val = min_subset_trace(&conjugate_spectrum(&v, lambda), k)?;
        evals += 1;
        if val > x_hat {
            x_hat = val;
            best_v = v;
        }
    }
    let haar_phase = trials / 2;
    for t in 0..trials {
        let cand = if t < haar_phase {
            haar_orthogonal(&mut rng, n)
        } else {
            // Shrinking local rotations around the incumbent.
            let progress = (t - haar_phase) as f64 / (trials - haar_phase).max(1) as f64;
            let angle = 0.3 * (1.0 - progress) + 0.01;
            random_givens(&best_v, &mut rng, angle)
        };
        let val = min_subset_trace(&conjugate_spectrum(&cand, lambda), k)?;
        evals += 1;
        if val > x_hat {
            x_hat = val;
            best_v = cand;
        }
    }
    Ok(VolumeGap {
        x_hat,
        y_k,
        gap: y_k - x_hat,
        trials: evals,
    })
}
