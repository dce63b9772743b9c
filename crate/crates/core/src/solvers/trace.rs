//! Common solver instrumentation: per-iteration traces with epoch
//! accounting and the stopping criteria shared by the iterative methods.

use crate::error::{Error, Result};
use crate::io;
use crate::scalar::Scalar;
use std::path::Path;

/// What ends the iteration (besides the step budget).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopCriterion {
    /// Stop when `||r|| <= tol * ||r_0||`.
    RelResidual,
    /// Stop when `||x - x*||_A^2 <= tol * ||x_0 - x*||_A^2`; requires the
    /// true solution to be supplied.
    ANormErrorSq,
}

/// Options shared by the Krylov and coordinate-descent drivers.
#[derive(Debug, Clone)]
pub struct IterOptions<'a, T> {
    pub tol: f64,
    /// CG/GMRES: maximum iterations. RCD: maximum epochs (n steps each).
    pub max_iter: usize,
    pub stop: StopCriterion,
    /// Known true solution; enables A-norm error recording.
    pub x_star: Option<&'a [T]>,
}

impl<'a, T> IterOptions<'a, T> {
    pub fn residual(tol: f64, max_iter: usize) -> Self {
        Self {
            tol,
            max_iter,
            stop: StopCriterion::RelResidual,
            x_star: None,
        }
    }

    pub fn anorm(tol: f64, max_iter: usize, x_star: &'a [T]) -> Self {
        Self {
            tol,
            max_iter,
            stop: StopCriterion::ANormErrorSq,
            x_star: Some(x_star),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stop == StopCriterion::ANormErrorSq && self.x_star.is_none() {
            return Err(Error::InvalidArgument(
                "energy-norm stopping needs the true solution".into(),
            ));
        }
        Ok(())
    }
}

/// Iteration history of one solve. Entry 0 is the initial point. An "epoch"
/// normalizes work across methods: one CG or GMRES iteration is one epoch,
/// while n coordinate-descent steps are one epoch, so `epochs[k]` is
/// `ceil(steps/n)` for coordinate methods and simply `k` for Krylov ones.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub solution: Vec<f64>,
    pub residual_norms: Vec<f64>,
    /// `||x_k - x*||_A`, present when the true solution was supplied.
    pub anorm_errors: Option<Vec<f64>>,
    pub epochs: Vec<usize>,
    /// Raw steps taken (equals `epochs.len() - 1` entries recorded).
    pub iterations: usize,
    pub converged: bool,
    /// Coordinate methods only: per step, the selected index and the
    /// freshly recomputed `|A(i,:) x - b_i|` after its update, which should
    /// sit at roundoff level.
    pub coordinate_audit: Option<Vec<(usize, f64)>>,
}

impl SolveTrace {
    /// Epochs at termination.
    pub fn final_epoch(&self) -> usize {
        *self.epochs.last().unwrap_or(&0)
    }

    /// Serialize as CSV with columns `iteration,epoch,residual,aerr`
    /// (empty `aerr` when no true solution was supplied).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iteration,epoch,residual,aerr\n");
        for k in 0..self.residual_norms.len() {
            let aerr = match &self.anorm_errors {
                Some(v) => format!("{}", v[k]),
                None => String::new(),
            };
            s.push_str(&format!(
                "{},{},{},{}\n",
                k, self.epochs[k], self.residual_norms[k], aerr
            ));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        io::write_text(path, &self.to_csv())
    }
}

/// Shared stopping logic: returns whether the criterion is met given the
/// initial and current residual norms and squared energy errors.
pub fn criterion_met(
    stop: StopCriterion,
    tol: f64,
    r0: f64,
    r: f64,
    e0_sq: Option<f64>,
    e_sq: Option<f64>,
) -> bool {
    match stop {
        StopCriterion::RelResidual => r <= tol * r0,
        StopCriterion::ANormErrorSq => match (e0_sq, e_sq) {
            (Some(e0), Some(e)) => e <= tol * e0,
            _ => false,
        },
    }
}

/// `||x - x*||_A^2 = Re <x - x*, A (x - x*)>` for Hermitian positive `A`.
pub fn anorm_error_sq<T: Scalar>(apply: impl Fn(&[T]) -> Vec<T>, x: &[T], x_star: &[T]) -> f64 {
    let e: Vec<T> = x.iter().zip(x_star).map(|(&a, &b)| a - b).collect();
    let ae = apply(&e);
    crate::scalar::dot(&e, &ae).re()
}
