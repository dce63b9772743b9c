//! Randomized coordinate descent with coordinates drawn proportionally to
//! the diagonal, `prob(i) = a_ii / tr(A)`, sampled in O(1) per step
//! through an alias table built once from the diagonal.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::trace::{criterion_met, IterOptions, SolveTrace};
use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::scalar::{dot, norm2, Scalar};
use crate::sparse::SparseMatrix;

/// Walker alias table for a fixed discrete distribution.
#[derive(Debug, Clone)]
pub(crate) struct AliasTable {
    accept: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        if n == 0 || !(total > 0.0) || weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidArgument(
                "alias table needs nonnegative weights with positive sum".into(),
            ));
        }
        let mut accept = vec![0.0f64; n];
        let mut alias: Vec<usize> = (0..n).collect();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut small: Vec<usize> = (0..n).filter(|&i| scaled[i] < 1.0).collect();
        let mut large: Vec<usize> = (0..n).filter(|&i| scaled[i] >= 1.0).collect();
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            accept[s] = scaled[s];
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for &i in small.iter().chain(large.iter()) {
            accept[i] = 1.0;
        }
        Ok(Self { accept, alias })
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let k = rng.gen_range(0..self.accept.len());
        if rng.gen::<f64>() < self.accept[k] {
            k
        } else {
            self.alias[k]
        }
    }
}

/// Core loop shared by the real-sparse and complex-dense entry points.
/// `columns[j]` lists the nonzero entries of column `j`; `row_dot`
/// recomputes one equation residual from scratch for the audit trail.
#[allow(clippy::too_many_arguments)]
pub(crate) fn rcd_core<T: Scalar>(
    n: usize,
    diag: &[f64],
    columns: &[Vec<(usize, T)>],
    row_dot: impl Fn(usize, &[T]) -> T,
    apply: impl Fn(&[T]) -> Vec<T>,
    b: &[T],
    x0: &[T],
    opts: &IterOptions<'_, T>,
    max_steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<T>, SolveTrace)> {
    opts.validate()?;
    if diag.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::NotSpd("nonpositive diagonal entry".into()));
    }
    let table = AliasTable::new(diag)?;

    let mut x = x0.to_vec();
    let ax = apply(&x);
    let mut r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
    let r0_norm = norm2(&r);

    let mut residual_norms = vec![r0_norm];
    let mut epochs = vec![0usize];
    let mut audit: Vec<(usize, f64)> = Vec::new();

    // Energy error tracked by the exact one-step decrement
    // |r_i|^2 / a_ii, resynchronized against the definition each epoch.
    let recompute_err = |x: &[T], xs: &[T]| -> f64 {
        let e: Vec<T> = x.iter().zip(xs).map(|(&a, &b)| a - b).collect();
        dot(&e, &apply(&e)).re().max(0.0)
    };
    let mut err_sq = opts.x_star.map(|xs| recompute_err(&x, xs));
    let e0_sq = err_sq;
    let mut anorm_errors = err_sq.map(|e| vec![e.sqrt()]);

    let mut converged = criterion_met(opts.stop, opts.tol, r0_norm, r0_norm, e0_sq, err_sq)
        || r0_norm == 0.0;

    let mut t = 0usize;
    while !converged && t < max_steps {
        let j = table.draw(rng);
        let rj = r[j];
        let delta = rj.scale(1.0 / diag[j]);
        x[j] += delta;
        for &(i, v) in &columns[j] {
            r[i] -= delta * v;
        }
        t += 1;

        if let Some(e) = err_sq.as_mut() {
            *e = (*e - rj.abs() * rj.abs() / diag[j]).max(0.0);
            if t % n == 0 {
                *e = recompute_err(&x, opts.x_star.unwrap());
            }
        }
        let fresh = (b[j] - row_dot(j, &x)).abs();
        audit.push((j, fresh));

        let rnorm = norm2(&r);
        residual_norms.push(rnorm);
        epochs.push(t.div_ceil(n));
        if let Some(errs) = anorm_errors.as_mut() {
            errs.push(err_sq.unwrap().sqrt());
        }
        converged = criterion_met(opts.stop, opts.tol, r0_norm, rnorm, e0_sq, err_sq);
    }

    let solution = x.iter().map(|v| v.re()).collect();
    Ok((
        x,
        SolveTrace {
            solution,
            residual_norms,
            anorm_errors,
            epochs,
            iterations: t,
            converged,
            coordinate_audit: Some(audit),
        },
    ))
}

/// Coordinate descent on a real symmetric positive definite sparse matrix.
/// `opts.max_iter` counts epochs (one epoch = n steps); the seed fixes the
/// coordinate stream, so reruns are bit-identical.
pub fn rcd(
    a: &SparseMatrix<f64>,
    b: &[f64],
    x0: &[f64],
    opts: &IterOptions<'_, f64>,
    seed: u64,
) -> Result<SolveTrace> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch("system shape".into()));
    }
    let at = a.transpose();
    let columns: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| {
            let (rows, vals) = at.row(j);
            rows.iter().copied().zip(vals.iter().copied()).collect()
        })
        .collect();
    let mut rng = trial_rng(seed, 0);
    let (_, trace) = rcd_core(
        n,
        &a.diag(),
        &columns,
        |i, x| {
            let (cols, vals) = a.row(i);
            cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
        },
        |v| a.spmv(v).expect("shape checked"),
        b,
        x0,
        opts,
        opts.max_iter.saturating_mul(n),
        &mut rng,
    )?;
    Ok(trace)
}

/// Coordinate descent on a complex Hermitian positive definite dense
/// matrix (real positive diagonal required).
pub fn rcd_complex(
    a: &ComplexMatrix,
    b: &[Complex64],
    x0: &[Complex64],
    opts: &IterOptions<'_, Complex64>,
    seed: u64,
) -> Result<(Vec<Complex64>, SolveTrace)> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch("system shape".into()));
    }
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    if (0..n).any(|i| a.get(i, i).im.abs() > 1e-12 * diag[i].abs().max(1.0)) {
        return Err(Error::NotSpd("diagonal must be real".into()));
    }
    let columns: Vec<Vec<(usize, Complex64)>> = (0..n)
        .map(|j| a.col(j).iter().copied().enumerate().collect())
        .collect();
    let mut rng = trial_rng(seed, 0);
    rcd_core(
        n,
        &diag,
        &columns,
        |i, x| (0..n).map(|j| a.get(i, j) * x[j]).sum(),
        |v| a.matvec(v),
        b,
        x0,
        opts,
        opts.max_iter.saturating_mul(n),
        &mut rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::StopCriterion;
    use crate::eig::symmetric_eig;
    use crate::rng;

    #[test]
    fn alias_table_matches_weights_empirically() {
        let w = [1.0, 2.0, 3.0, 4.0];
        let table = AliasTable::new(&w).unwrap();
        let mut rng = trial_rng(3100, 0);
        let mut counts = [0usize; 4];
        let draws = 200_000;
        for _ in 0..draws {
            counts[table.draw(&mut rng)] += 1;
        }
        for i in 0..4 {
            let p = w[i] / 10.0;
            let freq = counts[i] as f64 / draws as f64;
            // Three standard deviations of a binomial proportion.
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((freq - p).abs() <= 3.0 * se, "coordinate {i}: {freq} vs {p}");
        }
    }

    #[test]
    fn identity_two_by_two_is_exact_once_both_coordinates_appear() {
        let a = SparseMatrix::<f64>::identity(2);
        let b = vec![3.0, -7.0];
        let t = rcd(&a, &b, &[0.0, 0.0], &IterOptions::residual(0.0, 50), 11).unwrap();
        let audit = t.coordinate_audit.as_ref().unwrap();
        let mut seen = [false; 2];
        let mut first_complete = None;
        for (k, &(i, _)) in audit.iter().enumerate() {
            seen[i] = true;
            if seen[0] && seen[1] {
                first_complete = Some(k);
                break;
            }
        }
        let k = first_complete.expect("both coordinates sampled");
        // From that step on the residual norm is exactly zero.
        assert_eq!(t.residual_norms[k + 1], 0.0);
        assert_eq!(t.solution, b);
    }

    #[test]
    fn diagonal_system_sets_each_visited_coordinate_exactly() {
        let d = [2.0, 0.5, 4.0, 1.25];
        let a = SparseMatrix::from_diag(&d);
        let b = vec![1.0, 2.0, 3.0, 4.0];
        let t = rcd(&a, &b, &[0.0; 4], &IterOptions::residual(0.0, 10), 5).unwrap();
        let visited: std::collections::HashSet<usize> = t
            .coordinate_audit
            .unwrap()
            .iter()
            .map(|&(i, _)| i)
            .collect();
        for &i in &visited {
            assert_eq!(t.solution[i], b[i] / d[i]);
        }
    }

    #[test]
    fn selected_equation_holds_to_roundoff_after_each_step() {
        let n = 8;
        let mut r = rng::trial_rng(3101, 0);
        let eigs: Vec<f64> = (1..=n).map(|k| k as f64 / 2.0).collect();
        let dense = rng::spd_with_spectrum(&mut r, &eigs);
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                trip.push((i, j, dense.get(i, j)));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &trip).unwrap();
        let x_star = rng::normal_vec(&mut r, n);
        let b = a.spmv(&x_star).unwrap();
        let t = rcd(&a, &b, &vec![0.0; n], &IterOptions::residual(1e-10, 400), 3).unwrap();
        let xnorm = norm2(&t.solution) + norm2(&b);
        for &(i, fresh) in t.coordinate_audit.as_ref().unwrap() {
            let (_, vals) = a.row(i);
            let row_norm: f64 = vals.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(
                fresh <= 1e-12 * (b[i].abs() + row_norm * xnorm),
                "coordinate {i}: stale residual {fresh}"
            );
        }
        assert!(t.converged);
    }

    #[test]
    fn epoch_accounting_is_ceil_of_steps_over_n() {
        let a = SparseMatrix::<f64>::identity(4);
        let b = vec![1.0; 4];
        let t = rcd(&a, &b, &[0.0; 4], &IterOptions::residual(0.0, 3), 2).unwrap();
        for (k, &e) in t.epochs.iter().enumerate() {
            assert_eq!(e, k.div_ceil(4));
        }
    }

    #[test]
    fn mean_single_step_contraction_matches_the_spectral_prediction() {
        // Start with the error aligned to the bottom eigenvector: the
        // expected one-step energy contraction is then exactly
        // 1 - lambda_min / tr(A). Monte Carlo mean against three standard
        // errors.
        let n = 8;
        let mut r = rng::trial_rng(3102, 0);
        let eigs: Vec<f64> = vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
        let dense = rng::spd_with_spectrum(&mut r, &eigs);
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                trip.push((i, j, dense.get(i, j)));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &trip).unwrap();
        let sym = symmetric_eig(&dense).unwrap();
        let lambda_min = sym.values[0];
        let v_min: Vec<f64> = (0..n).map(|i| sym.vectors.get(i, 0)).collect();
        let trace_a: f64 = a.diag().iter().sum();
        let predicted = 1.0 - lambda_min / trace_a;

        // x* = 0, b = 0, x0 = -v_min, so e0 = v_min with |e0|_A^2 = lambda_min.
        let x0: Vec<f64> = v_min.iter().map(|v| -v).collect();
        let b = vec![0.0; n];
        let x_star = vec![0.0; n];
        let trials = 10_000;
        let mut ratios = Vec::with_capacity(trials);
        let at = a.transpose();
        let columns: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|j| {
                let (rows, vals) = at.row(j);
                rows.iter().copied().zip(vals.iter().copied()).collect()
            })
            .collect();
        for trial in 0..trials {
            let mut stream = trial_rng(3103, trial as u64);
            let opts = IterOptions {
                tol: 0.0,
                max_iter: 1,
                stop: StopCriterion::ANormErrorSq,
                x_star: Some(&x_star),
            };
            let (_, t) = rcd_core(
                n,
                &a.diag(),
                &columns,
                |i, x| {
                    let (cols, vals) = a.row(i);
                    cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
                },
                |v| a.spmv(v).expect("shape"),
                &b,
                &x0,
                &opts,
                1,
                &mut stream,
            )
            .unwrap();
            let errs = t.anorm_errors.unwrap();
            ratios.push((errs[1] * errs[1]) / (errs[0] * errs[0]));
        }
        let mean: f64 = ratios.iter().sum::<f64>() / trials as f64;
        let var: f64 =
            ratios.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - predicted).abs() <= 3.0 * se + 1e-12,
            "mean {mean} vs predicted {predicted} (se {se})"
        );
    }

    #[test]
    fn nonpositive_diagonal_is_rejected() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0)])
            .unwrap();
        let out = rcd(&a, &[1.0, 1.0], &[0.0, 0.0], &IterOptions::residual(1e-8, 5), 1);
        assert!(matches!(out, Err(Error::NotSpd(_))));
    }

    #[test]
    fn same_seed_reproduces_the_trace_bitwise() {
        let a = SparseMatrix::from_diag(&[1.0, 2.0, 3.0]);
        let b = vec![1.0, 1.0, 1.0];
        let opts = IterOptions::residual(1e-10, 20);
        let t1 = rcd(&a, &b, &[0.0; 3], &opts, 42).unwrap();
        let t2 = rcd(&a, &b, &[0.0; 3], &opts, 42).unwrap();
        assert_eq!(t1.residual_norms, t2.residual_norms);
        assert_eq!(t1.solution, t2.solution);
        let t3 = rcd(&a, &b, &[0.0; 3], &opts, 43).unwrap();
        assert_ne!(
            t1.coordinate_audit.unwrap().iter().map(|&(i, _)| i).collect::<Vec<_>>(),
            t3.coordinate_audit.unwrap().iter().map(|&(i, _)| i).collect::<Vec<_>>()
        );
    }
}
