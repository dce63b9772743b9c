//! Named matrix families used by selection experiments.

use crate::dense::DenseMatrix;

/// Upper-triangular matrix with diagonal `s^i` and off-diagonal entries
/// `-c s^i` (`s = sin(theta)`, `c = cos(theta)`), the classical construction
/// on which greedy column pivoting loses rank-revealing quality
/// exponentially. Column `j` is additionally scaled by `(1 - stagger)^j`;
/// with exact arithmetic all columns have unit norm, so a tiny stagger keeps
/// the pivot order deterministic against roundoff in the computed norms.
pub fn kahan_matrix(n: usize, theta: f64, stagger: f64) -> DenseMatrix {
    let s = theta.sin();
    let c = theta.cos();
    let mut spow = vec![0.0; n];
    let mut jscale = vec![0.0; n];
    let mut sp = 1.0;
    let mut js = 1.0;
    for i in 0..n {
        spow[i] = sp;
        jscale[i] = js;
        sp *= s;
        js *= 1.0 - stagger;
    }
    DenseMatrix::from_fn(n, n, move |i, j| {
        let base = if i == j {
            spow[i]
        } else if i < j {
            -c * spow[i]
        } else {
            0.0
        };
        base * jscale[j]
    })
}

/// Hilbert matrix `H_ij = 1 / (i + j + 1)`.
pub fn hilbert_matrix(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64)
}

/// Gaussian radial-basis kernel on `n` uniform points in `[0, 1]`:
/// `K_ij = exp(-(x_i - x_j)^2 / (2 l^2))`.
pub fn rbf_kernel_1d(n: usize, lengthscale: f64) -> DenseMatrix {
    let x: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    };
    let denom = 2.0 * lengthscale * lengthscale;
    DenseMatrix::from_fn(n, n, move |i, j| {
        let d = x[i] - x[j];
        (-d * d / denom).exp()
    })
}
