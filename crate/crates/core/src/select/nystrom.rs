//! Nyström residual of a psd matrix restricted to a pivot set.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::qr::inverse;
use crate::svd::two_norm;

/// Norm in which the Nyström residual is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NystromNorm {
    Spectral,
    /// For a psd residual the nuclear norm is its trace.
    Nuclear,
}

/// Residual norm of `K - K[:, I] K[I, I]^{-1} K[I, :]` for a symmetric psd
/// `K`. The empty selection returns the norm of `K` itself.
pub fn nystrom_error(kmat: &DenseMatrix, indices: &[usize], norm: NystromNorm) -> Result<f64> {
    let n = kmat.nrows();
    if kmat.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "nystrom needs a square matrix, got {}x{}",
            n,
            kmat.ncols()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidArgument(format!(
            "index {bad} out of range for dimension {n}"
        )));
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("duplicate selection index".into()));
    }
    let resid = if indices.is_empty() {
        kmat.clone()
    } else {
        let cols = kmat.select_columns(indices);
        let core = cols.select_rows(indices);
        let core_inv = inverse(&core)
            .map_err(|_| Error::Singular("principal submatrix is singular".into()))?;
        let approx = cols.matmul(&core_inv).matmul(&cols.transpose());
        kmat.add_scaled(-1.0, &approx)
    };
    match norm {
        NystromNorm::Nuclear => Ok((0..n).map(|i| resid.get(i, i)).sum()),
        NystromNorm::Spectral => two_norm(&resid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::symmetric_eig;
    use crate::qr::householder_qr;
    use crate::rng::{gaussian_matrix, trial_rng};

    fn path_laplacian(n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                if i == 0 || i == n - 1 {
                    1.0
                } else {
                    2.0
                }
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn full_selection_has_zero_residual() {
        let mut rng = trial_rng(970, 0);
        let g = gaussian_matrix(&mut rng, 6, 6);
        let k = g.matmul(&g.transpose());
        let all: Vec<usize> = (0..6).collect();
        let e = nystrom_error(&k, &all, NystromNorm::Nuclear).unwrap();
        assert!(e.abs() <= 1e-10 * k.frobenius_norm());
    }

    #[test]
    fn empty_selection_returns_the_trace() {
        let mut rng = trial_rng(971, 0);
        let g = gaussian_matrix(&mut rng, 5, 5);
        let k = g.matmul(&g.transpose());
        let tr: f64 = (0..5).map(|i| k.get(i, i)).sum();
        let e = nystrom_error(&k, &[], NystromNorm::Nuclear).unwrap();
        assert!((e - tr).abs() <= 1e-12 * tr);
    }

    #[test]
    fn singular_principal_submatrix_is_reported() {
        // Rank-1 psd matrix: any 2-subset has a singular core.
        let k = DenseMatrix::from_fn(4, 4, |_, _| 1.0);
        assert!(matches!(
            nystrom_error(&k, &[0, 1], NystromNorm::Nuclear),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn nuclear_error_equals_squared_projection_error_of_the_matrix_root() {
        let n = 8;
        let mut rng = trial_rng(972, 0);
        let g = gaussian_matrix(&mut rng, n, n);
        let k = g.matmul(&g.transpose());
        let eig = symmetric_eig(&k).unwrap();
        let root = {
            // K^{1/2} = U diag(sqrt(lambda)) U^T.
            let mut scaled = eig.vectors.clone();
            for j in 0..n {
                let s = eig.values[j].max(0.0).sqrt();
                for i in 0..n {
                    scaled.set(i, j, scaled.get(i, j) * s);
                }
            }
            scaled.matmul(&eig.vectors.transpose())
        };
        let idx = [1usize, 4, 6];
        let nuclear = nystrom_error(&k, &idx, NystromNorm::Nuclear).unwrap();
        let aj = root.select_columns(&idx);
        let q = householder_qr(&aj, false).unwrap().q;
        let proj_err = root
            .add_scaled(-1.0, &q.matmul(&q.matmul_transa(&root)))
            .frobenius_norm();
        assert!(
            (nuclear - proj_err * proj_err).abs() <= 1e-8 * nuclear.max(1.0),
            "nuclear {nuclear} vs squared projection {}",
            proj_err * proj_err
        );
    }

    #[test]
    fn nuclear_error_has_diminishing_returns_on_the_regularized_laplacian() {
        let n = 6;
        let l = path_laplacian(n);
        let k = crate::qr::inverse(&l.shift_identity(0.1)).unwrap();
        // F over every subset by bitmask; F(mask) = nuclear residual.
        let f: Vec<f64> = (0u32..1 << n)
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                nystrom_error(&k, &idx, NystromNorm::Nuclear).unwrap()
            })
            .collect();
        // Diminishing returns of the gain G(mask, a) = F(mask) - F(mask|a):
        // adding an element helps a smaller (nonempty) set at least as much.
        for sup in 0u32..1 << n {
            let mut sub = sup;
            loop {
                if sub != 0 {
                    for a in 0..n {
                        if sup >> a & 1 == 0 {
                            let gain_sub = f[sub as usize] - f[(sub | 1 << a) as usize];
                            let gain_sup = f[sup as usize] - f[(sup | 1 << a) as usize];
                            assert!(
                                gain_sub >= gain_sup - 1e-9,
                                "sub {sub:b} sup {sup:b} add {a}: {gain_sub} < {gain_sup}"
                            );
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & sup;
            }
        }
    }

    #[test]
    fn spectral_norm_of_the_residual_is_bounded_by_nuclear() {
        let mut rng = trial_rng(973, 0);
        let g = gaussian_matrix(&mut rng, 7, 7);
        let k = g.matmul(&g.transpose());
        let idx = [0usize, 3];
        let nuc = nystrom_error(&k, &idx, NystromNorm::Nuclear).unwrap();
        let spec = nystrom_error(&k, &idx, NystromNorm::Spectral).unwrap();
        assert!(spec <= nuc + 1e-10);
        assert!(spec >= 0.0);
    }
}
