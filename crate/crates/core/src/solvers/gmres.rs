//! Restarted GMRES with modified Gram–Schmidt Arnoldi and Givens-rotation
//! least squares. Works on general square systems; the per-cycle residual
//! sequence is nonincreasing by construction.

use super::trace::{IterOptions, SolveTrace, StopCriterion};
use crate::error::{Error, Result};
use crate::scalar::norm2;
use crate::sparse::SparseMatrix;

/// Solve `A x = b` by GMRES(m). `restart = None` runs the full method.
/// The trace records the implicitly updated residual for every inner
/// iteration (recomputed exactly at each restart), and a happy breakdown
/// — an exactly invariant Krylov subspace — is treated as convergence.
pub fn gmres(
    a: &SparseMatrix<f64>,
    b: &[f64],
    x0: &[f64],
    restart: Option<usize>,
    opts: &IterOptions<'_, f64>,
) -> Result<SolveTrace> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n || x0.len() != n {
        return Err(Error::DimensionMismatch("system shape".into()));
    }
    if opts.stop != StopCriterion::RelResidual {
        return Err(Error::InvalidArgument(
            "gmres stops on relative residuals".into(),
        ));
    }
    let m = restart.unwrap_or(n.max(1)).min(n.max(1)).max(1);

    let mut x = x0.to_vec();
    let r0: Vec<f64> = {
        let ax = a.spmv(&x)?;
        b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
    };
    let b0_norm = norm2(&r0);
    let mut residual_norms = vec![b0_norm];
    let mut epochs = vec![0usize];
    let mut total_iters = 0usize;
    let mut happy = false;
    let mut converged = b0_norm <= opts.tol * b0_norm || b0_norm == 0.0;

    'outer: while !converged && total_iters < opts.max_iter {
        // Fresh residual for this cycle.
        let ax = a.spmv(&x)?;
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm2(&r);
        if beta <= opts.tol * b0_norm {
            converged = true;
            break;
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|x| x / beta).collect()];
        // Hessenberg columns, Givens rotations, and the rotated rhs.
        let mut h: Vec<Vec<f64>> = Vec::new();
        let mut cs: Vec<(f64, f64)> = Vec::new();
        let mut g = vec![beta];
        let mut k = 0usize;
        let mut breakdown = false;

        while k < m && total_iters < opts.max_iter {
            let mut w = a.spmv(&v[k])?;
            let mut hk = vec![0.0f64; k + 2];
            for (i, vi) in v.iter().enumerate() {
                let hik: f64 = vi.iter().zip(&w).map(|(a, b)| a * b).sum();
                hk[i] = hik;
                for (wj, vij) in w.iter_mut().zip(vi) {
                    *wj -= hik * vij;
                }
            }
            let hnext = norm2(&w);
            hk[k + 1] = hnext;

            // Apply the accumulated rotations, then form the new one.
            for (i, &(c, s)) in cs.iter().enumerate() {
                let t = c * hk[i] + s * hk[i + 1];
                hk[i + 1] = -s * hk[i] + c * hk[i + 1];
                hk[i] = t;
            }
            let denom = (hk[k] * hk[k] + hk[k + 1] * hk[k + 1]).sqrt();
            let (c, s) = if denom == 0.0 { (1.0, 0.0) } else { (hk[k] / denom, hk[k + 1] / denom) };
            cs.push((c, s));
            hk[k] = c * hk[k] + s * hk[k + 1];
            hk[k + 1] = 0.0;
            g.push(-s * g[k]);
            g[k] *= c;
            h.push(hk);

            total_iters += 1;
            k += 1;
            let implicit = g[k].abs();
            residual_norms.push(implicit);
            epochs.push(total_iters);

            if hnext <= 1e-14 * b0_norm.max(1.0) {
                breakdown = true; // exact solution inside the current subspace
                happy = true;
            } else if k < m && total_iters < opts.max_iter && implicit > opts.tol * b0_norm {
                v.push(w.iter().map(|x| x / hnext).collect());
                continue;
            }

            // Solve the triangular system and update x.
            let mut y = vec![0.0f64; k];
            for i in (0..k).rev() {
                let mut s = g[i];
                for j in (i + 1)..k {
                    s -= h[j][i] * y[j];
                }
                y[i] = s / h[i][i];
            }
            for (j, yj) in y.iter().enumerate() {
                for i in 0..n {
                    x[i] += yj * v[j][i];
                }
            }
            if breakdown || implicit <= opts.tol * b0_norm {
                converged = true;
                break 'outer;
            }
            break; // restart
        }
    }

    // Replace the last implicit value with the true residual.
    let ax = a.spmv(&x)?;
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let final_res = norm2(&r);
    if let Some(last) = residual_norms.last_mut() {
        *last = final_res;
    }
    converged = happy
        || (converged && final_res <= opts.tol * b0_norm * (1.0 + 1e-8) + f64::MIN_POSITIVE);

    Ok(SolveTrace {
        solution: x,
        residual_norms,
        anorm_errors: None,
        epochs,
        iterations: total_iters,
        converged,
        coordinate_audit: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{gen_convdiff_2d, CoefficientField, ConvectionScheme, Grid2D};
    use crate::rng;

    #[test]
    fn identity_converges_in_one_iteration() {
        let a = SparseMatrix::<f64>::identity(5);
        let b = vec![2.0, -1.0, 0.5, 3.0, 1.0];
        let t = gmres(&a, &b, &[0.0; 5], None, &IterOptions::residual(1e-12, 10)).unwrap();
        assert!(t.converged);
        assert_eq!(t.iterations, 1);
    }

    #[test]
    fn upwind_convection_diffusion_solves_within_n_iterations() {
        let grid = Grid2D::unit(32, 32).unwrap();
        let a_field = CoefficientField::Constant(1.0);
        let b_field = CoefficientField::ConstantPair(8.0, 3.0);
        let a = gen_convdiff_2d(&grid, &a_field, &b_field, ConvectionScheme::Upwind).unwrap();
        let n = a.nrows();
        let mut r = rng::trial_rng(3200, 0);
        let x_star = rng::normal_vec(&mut r, n);
        let b = a.spmv(&x_star).unwrap();
        let t = gmres(&a, &b, &vec![0.0; n], None, &IterOptions::residual(1e-8, n)).unwrap();
        assert!(t.converged, "stalled at {}", t.residual_norms.last().unwrap());
        assert!(t.iterations <= n);
    }

    #[test]
    fn residuals_are_nonincreasing_within_each_cycle() {
        let grid = Grid2D::unit(10, 10).unwrap();
        let a = gen_convdiff_2d(
            &grid,
            &CoefficientField::Constant(1.0),
            &CoefficientField::ConstantPair(5.0, -2.0),
            ConvectionScheme::Centered,
        )
        .unwrap();
        let n = a.nrows();
        let mut r = rng::trial_rng(3201, 0);
        let b = rng::normal_vec(&mut r, n);
        let t = gmres(&a, &b, &vec![0.0; n], Some(7), &IterOptions::residual(1e-10, 300)).unwrap();
        // Within a cycle the least-squares residual cannot grow; check
        // consecutive entries that belong to the same cycle.
        for w in t.residual_norms.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-6) + 1e-13);
        }
        assert!(t.converged);
    }

    #[test]
    fn full_method_needs_no_more_iterations_than_restarted() {
        let grid = Grid2D::unit(8, 8).unwrap();
        let a = gen_convdiff_2d(
            &grid,
            &CoefficientField::Constant(1.0),
            &CoefficientField::ConstantPair(4.0, 1.0),
            ConvectionScheme::Upwind,
        )
        .unwrap();
        let n = a.nrows();
        let mut r = rng::trial_rng(3202, 0);
        let b = rng::normal_vec(&mut r, n);
        let tol = 1e-9;
        let full = gmres(&a, &b, &vec![0.0; n], None, &IterOptions::residual(tol, 2000)).unwrap();
        let restarted =
            gmres(&a, &b, &vec![0.0; n], Some(5), &IterOptions::residual(tol, 2000)).unwrap();
        assert!(full.converged && restarted.converged);
        assert!(full.iterations <= restarted.iterations);
    }

    #[test]
    fn happy_breakdown_is_convergence() {
        // b lies in a 2-dimensional invariant subspace: the Krylov space
        // closes after two steps and the method must stop exactly there.
        let a = SparseMatrix::from_triplets(
            4,
            4,
            &[
                (0, 0, 2.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 2.0),
                (2, 2, 5.0),
                (3, 3, 7.0),
            ],
        )
        .unwrap();
        let b = vec![1.0, 1.0, 0.0, 0.0];
        let t = gmres(&a, &b, &[0.0; 4], None, &IterOptions::residual(1e-300, 10)).unwrap();
        assert!(t.converged);
        assert!(t.iterations <= 2);
        assert!(*t.residual_norms.last().unwrap() <= 1e-12);
    }
}
