//! Distribution of the eigenproblem conditioning under norm-bounded complex
//! Gaussian perturbations.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::ComplexMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::rng::{standard_normal, trial_rng};
use crate::spectral::condition::kappa_eig_complex;
use crate::svd::two_norm;

/// Complex Gaussian matrix with independent entries `(g1 + i g2)/sqrt(2)`.
///
/// The entry variance convention is irrelevant downstream because the
/// perturbation is rescaled to a prescribed spectral norm.
pub fn complex_ginibre(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let re = standard_normal(rng);
            let im = standard_normal(rng);
            g.set(
                i,
                j,
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2,
            );
        }
    }
    g
}

/// Conditioning statistics of `A + E` over independent perturbations with
/// `||E||_2 = delta` exactly.
#[derive(Debug, Clone)]
pub struct ShatteringReport {
    pub n: usize,
    pub delta: f64,
    pub trials: usize,
    /// Per-trial `kappa_eig`, ascending; flagged trials sort to the end as
    /// infinities.
    pub kappa_values: Vec<f64>,
    /// Per-trial exponent `ln(kappa_eig) / ln(n/delta)`, ascending, finite
    /// trials only (empty when `delta` is zero).
    pub exponents: Vec<f64>,
    /// Number of trials whose conditioning did not resolve to a finite
    /// number.
    pub flagged: usize,
}

impl ShatteringReport {
    /// Nearest-rank quantile of the conditioning values, `p` in `[0, 1]`.
    pub fn kappa_quantile(&self, p: f64) -> f64 {
        nearest_rank(&self.kappa_values, p)
    }

    /// Median of the per-trial exponents; absent when no trial was finite
    /// or the perturbation was zero.
    pub fn median_exponent(&self) -> Option<f64> {
        if self.exponents.is_empty() {
            None
        } else {
            Some(nearest_rank(&self.exponents, 0.5))
        }
    }
}

fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let idx = ((p.clamp(0.0, 1.0) * sorted.len() as f64).ceil() as usize)
        .saturating_sub(1)
        .min(sorted.len() - 1);
    sorted[idx]
}

/// Samples `kappa_eig(A + E)` over `trials` independent perturbations
/// `E = delta G / ||G||_2` with `G` complex Gaussian, one derived random
/// stream per trial.
pub fn shattering_experiment(
    a: &DenseMatrix,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<ShatteringReport> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "perturbation study needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial required".into()));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(
            "perturbation size must be finite and nonnegative".into(),
        ));
    }
    let log_ratio = if delta > 0.0 {
        (n as f64 / delta).ln()
    } else {
        0.0
    };
    let mut kappa_values = Vec::with_capacity(trials);
    let mut exponents = Vec::new();
    let mut flagged = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let g = complex_ginibre(&mut rng, n);
        let gnorm = two_norm(&g.real_embedding())?;
        let scale = if gnorm > 0.0 { delta / gnorm } else { 0.0 };
        let perturbed = ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(a.get(i, j), 0.0) + g.get(i, j) * scale
        });
        let cond = kappa_eig_complex(&perturbed)?;
        kappa_values.push(cond.kappa_eig);
        if cond.flagged() {
            flagged += 1;
        } else if log_ratio > 0.0 && cond.kappa_eig >= 1.0 {
            exponents.push(cond.kappa_eig.ln() / log_ratio);
        }
    }
    kappa_values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    exponents.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(ShatteringReport {
        n,
        delta,
        trials,
        kappa_values,
        exponents,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan_block(n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |i, j| if i + 1 == j { 1.0 } else { 0.0 })
    }

    #[test]
    fn zero_perturbation_of_a_defective_matrix_is_always_flagged() {
        let rep = shattering_experiment(&jordan_block(8), 0.0, 3, 1002).unwrap();
        assert_eq!(rep.flagged, 3);
        assert!(rep.kappa_quantile(0.5).is_infinite());
        assert!(rep.median_exponent().is_none());
    }

    #[test]
    fn perturbed_jordan_block_has_small_conditioning_exponent() {
        let rep = shattering_experiment(&jordan_block(16), 1e-2, 100, 1003).unwrap();
        assert_eq!(rep.flagged, 0, "every perturbed trial should be finite");
        let median = rep.median_exponent().unwrap();
        assert!(median <= 5.0, "median exponent {median}");
        assert!(median > 0.0);
    }

    #[test]
    fn normal_matrix_with_wide_gap_keeps_its_conditioning() {
        let a = DenseMatrix::diag_from(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let base = crate::spectral::kappa_eig(&a).unwrap().kappa_eig;
        let rep = shattering_experiment(&a, 1e-3, 100, 1004).unwrap();
        assert_eq!(rep.flagged, 0);
        let within = rep
            .kappa_values
            .iter()
            .filter(|&&v| v <= 10.0 * base)
            .count();
        assert!(within >= 90, "only {within} of 100 trials stayed close");
    }

    #[test]
    fn perturbation_norm_is_exact() {
        let mut rng = trial_rng(1005, 0);
        let g = complex_ginibre(&mut rng, 12);
        let gnorm = two_norm(&g.real_embedding()).unwrap();
        let scaled = g.scale(Complex64::new(0.25 / gnorm, 0.0));
        let norm = two_norm(&scaled.real_embedding()).unwrap();
        assert!((norm - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn quantiles_walk_the_sorted_values() {
        let a = DenseMatrix::diag_from(&[1.0, 2.0, 4.0]);
        let rep = shattering_experiment(&a, 1e-2, 20, 1006).unwrap();
        assert!(rep.kappa_quantile(0.0) <= rep.kappa_quantile(0.5));
        assert!(rep.kappa_quantile(0.5) <= rep.kappa_quantile(1.0));
        assert_eq!(rep.kappa_values.len(), 20);
    }
}
