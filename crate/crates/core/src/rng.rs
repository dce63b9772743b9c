//! Seeded random number generation and random matrix ensembles.
//!
//! Every experiment derives its randomness from a `(seed, trial)` pair using
//! a counter-based rule: the base generator is `ChaCha8` seeded with the
//! experiment seed, and trial `t` reads from stream `t + 1` of that
//! generator (stream 0 is reserved for non-trial draws). Streams of a
//! ChaCha generator are independent by construction, so trials can be
//! evaluated in any order and still reproduce bit-for-bit.

use crate::cmatrix::ComplexMatrix;
use crate::dense::DenseMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Base generator for an experiment seed (stream 0).
pub fn root_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

/// Independent generator for trial `trial` of an experiment seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    rng
}

/// Standard normal sample.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Vector of iid standard normal samples.
pub fn normal_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| standard_normal(rng)).collect()
}

/// Matrix with iid `N(0, 1)` entries, filled in column-major order.
pub fn gaussian_matrix(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize) -> DenseMatrix {
    let data: Vec<f64> = (0..nrows * ncols).map(|_| standard_normal(rng)).collect();
    DenseMatrix::from_column_major(nrows, ncols, data).unwrap()
}

/// Complex Ginibre matrix: iid entries with independent `N(0, 1/2)` real and
/// imaginary parts (unit-variance complex normal).
pub fn complex_ginibre(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(nrows, ncols, |_, _| {
        Complex64::new(standard_normal(rng) * s, standard_normal(rng) * s)
    })
}

/// Haar-distributed unitary matrix.
///
/// QR of a complex Ginibre matrix, with the phase of each diagonal entry of
/// `R` absorbed into the corresponding column of `Q` so the factorization is
/// the unique one with positive real diagonal — that correction makes the
/// distribution exactly Haar rather than merely unitary.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = complex_ginibre(rng, n, n);
    let (q, r) = g.householder_qr().expect("square QR cannot fail");
    let mut u = q;
    for j in 0..n {
        let d = r.get(j, j);
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            let v = u.get(i, j) * phase;
            u.set(i, j, v);
        }
    }
    u
}

/// Haar-distributed orthogonal matrix (QR of a real Gaussian matrix with the
/// sign of each `R` diagonal entry absorbed into `Q`).
pub fn haar_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let g = gaussian_matrix(rng, n, n);
    let f = crate::qr::householder_qr(&g, false).expect("square QR cannot fail");
    let mut q = f.q;
    for j in 0..n {
        if f.r.get(j, j) < 0.0 {
            for i in 0..n {
                let v = -q.get(i, j);
                q.set(i, j, v);
            }
        }
    }
    q
}

/// Matrix with orthonormal columns spanning a Haar-uniform r-dimensional
/// subspace of R^n.
pub fn haar_subspace(rng: &mut ChaCha8Rng, n: usize, r: usize) -> DenseMatrix {
    assert!(r <= n);
    let g = gaussian_matrix(rng, n, r);
    let f = crate::qr::householder_qr(&g, false).expect("tall QR cannot fail");
    f.q
}

/// Uniform point on the complex unit sphere in C^n.
pub fn uniform_complex_sphere(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut z: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(standard_normal(rng) * s, standard_normal(rng) * s))
        .collect();
    let norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in z.iter_mut() {
        *v /= norm;
    }
    z
}

/// Random symmetric positive definite matrix with prescribed spectrum:
/// `Q diag(eigs) Q^T` for a Haar orthogonal `Q`.
pub fn spd_with_spectrum(rng: &mut ChaCha8Rng, eigs: &[f64]) -> DenseMatrix {
    let n = eigs.len();
    let q = haar_orthogonal(rng, n);
    let d = DenseMatrix::diag_from(eigs);
    q.matmul(&d).matmul(&q.transpose())
}
