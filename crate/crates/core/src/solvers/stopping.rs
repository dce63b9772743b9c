//! Paired stopping times of CG and randomized coordinate descent on
//! rotation-invariant test systems: `A = U diag(k^{-p}) U^*` with Haar
//! unitary `U`, right-hand side from a uniformly random unit solution.
//! Both solvers run to the same relative energy-error target and report
//! work in epochs (one CG iteration, or n coordinate steps).

use num_complex::Complex64;

use super::cg::cg_complex;
use super::rcd::rcd_complex;
use super::trace::{IterOptions, StopCriterion};
use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::rng::{haar_unitary, trial_rng, uniform_complex_sphere};

/// One trial's paired epoch counts at a common target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoppingTimes {
    pub t_cg: usize,
    pub t_rcd: usize,
    pub trial: u64,
}

/// Build the trial operator `U diag(lambda) U^*`.
fn rotated_diagonal(u: &ComplexMatrix, lambda: &[f64]) -> ComplexMatrix {
    let n = lambda.len();
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += u.get(i, k) * lambda[k] * u.get(j, k).conj();
            }
            a.set(i, j, s);
        }
    }
    a
}

/// Run `trials` independent draws at decay exponent `p` and dimension `n`,
/// stopping each solver at `||x - x*||_A^2 <= eps ||x0 - x*||_A^2`.
/// Deterministic per `(seed, trial)`; trial `t` uses its own derived
/// stream, so the set of results does not depend on execution order.
pub fn stopping_time_experiment(
    p: f64,
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<StoppingTimes>> {
    if n == 0 || n > 512 {
        return Err(Error::InvalidArgument(
            "dimension must be between 1 and 512 (dense unitary generation)".into(),
        ));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("target must satisfy 0 < eps < 1".into()));
    }
    let lambda: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-p)).collect();
    let mut out = Vec::with_capacity(trials);

    for trial in 0..trials as u64 {
        let mut rng = trial_rng(seed, trial);
        let u = haar_unitary(&mut rng, n);
        let a = rotated_diagonal(&u, &lambda);
        let x_star = uniform_complex_sphere(&mut rng, n);
        let b = a.matvec(&x_star);
        let x0 = vec![Complex64::new(0.0, 0.0); n];

        let cg_opts = IterOptions {
            tol: eps,
            max_iter: 10 * n,
            stop: StopCriterion::ANormErrorSq,
            x_star: Some(&x_star),
        };
        let (_, cg_trace) = cg_complex(&a, &b, &x0, &cg_opts)?;
        if !cg_trace.converged {
            return Err(Error::NoConvergence(format!(
                "cg stalled in trial {trial}"
            )));
        }

        let rcd_opts = IterOptions {
            tol: eps,
            max_iter: 4000,
            stop: StopCriterion::ANormErrorSq,
            x_star: Some(&x_star),
        };
        let (_, rcd_trace) = rcd_complex(&a, &b, &x0, &rcd_opts, seed ^ (trial.wrapping_add(1)))?;
        if !rcd_trace.converged {
            return Err(Error::NoConvergence(format!(
                "coordinate descent stalled in trial {trial}"
            )));
        }

        out.push(StoppingTimes {
            t_cg: cg_trace.final_epoch(),
            t_rcd: rcd_trace.final_epoch(),
            trial,
        });
    }
    Ok(out)
}
