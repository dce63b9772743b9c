//! Minimum spectral-gap statistics of symmetric tridiagonal matrices under
//! random diagonal noise.

use crate::dense::DenseMatrix;
use crate::eig::symmetric_eig;
use crate::error::{Error, Result};
use crate::rng::{standard_normal, trial_rng};
use rand::Rng;

/// Distribution of the independent diagonal noise entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseDistribution {
    /// Uniform on `[0, 1]`.
    Uniform,
    /// Standard normal.
    Gaussian,
}

impl NoiseDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseDistribution::Uniform => "uniform",
            NoiseDistribution::Gaussian => "gaussian",
        }
    }
}

/// Minimum-gap samples of `T + delta E` over independent diagonal draws.
#[derive(Debug, Clone)]
pub struct MinamiReport {
    pub n: usize,
    pub delta: f64,
    pub trials: usize,
    /// Per-trial smallest eigenvalue spacing, ascending.
    pub gaps: Vec<f64>,
    /// `ln(min gap) / ln(delta/n)` when both logs are meaningful, as a
    /// single-point probe of the polynomial gap-lower-bound exponent.
    pub exponent_hat: Option<f64>,
}

impl MinamiReport {
    pub fn min_gap(&self) -> f64 {
        self.gaps[0]
    }

    pub fn median_gap(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Nearest-rank quantile of the per-trial gaps, `p` in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let idx = ((p.clamp(0.0, 1.0) * self.gaps.len() as f64).ceil() as usize)
            .saturating_sub(1)
            .min(self.gaps.len() - 1);
        self.gaps[idx]
    }
}

/// Slope and intercept of a least-squares line through log-log points.
#[derive(Debug, Clone, Copy)]
pub struct LogLogFit {
    /// Fitted exponent (slope in log-log coordinates).
    pub exponent: f64,
    /// Natural-log constant: `ln(y) ~ exponent ln(x) + log_constant`.
    pub log_constant: f64,
}

/// Least-squares power-law fit `y ~ C x^c` through positive points.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<LogLogFit> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "power-law fit needs at least two points".into(),
        ));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0) || !(y > 0.0)) {
        return Err(Error::InvalidArgument(
            "power-law fit needs strictly positive coordinates".into(),
        ));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let var = sxx - sx * sx / n;
    if var <= 0.0 {
        return Err(Error::InvalidArgument(
            "power-law fit needs at least two distinct abscissas".into(),
        ));
    }
    let exponent = (sxy - sx * sy / n) / var;
    let log_constant = (sy - exponent * sx) / n;
    Ok(LogLogFit {
        exponent,
        log_constant,
    })
}

fn check_tridiagonal(t: &DenseMatrix) -> Result<()> {
    let n = t.nrows();
    if n != t.ncols() || n < 2 {
        return Err(Error::DimensionMismatch(format!(
            "gap study needs a square matrix of order >= 2, got {}x{}",
            n,
            t.ncols()
        )));
    }
    let tol = 1e-12 * t.max_abs().max(1.0);
    if !t.is_symmetric(tol) {
        return Err(Error::InvalidArgument(
            "gap study needs a symmetric matrix".into(),
        ));
    }
    for j in 0..n {
        for i in 0..n {
            if i.abs_diff(j) > 1 && t.get(i, j).abs() > tol {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not tridiagonal at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Samples the smallest eigenvalue spacing of `T + delta diag(e)` with iid
/// noise entries, one derived random stream per trial.
pub fn minami_gap_experiment(
    t: &DenseMatrix,
    delta: f64,
    dist: NoiseDistribution,
    trials: usize,
    seed: u64,
) -> Result<MinamiReport> {
    check_tridiagonal(t)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial required".into()));
    }
    let n = t.nrows();
    let mut gaps = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let mut m = t.clone();
        for i in 0..n {
            let noise = match dist {
                NoiseDistribution::Uniform => rng.gen::<f64>(),
                NoiseDistribution::Gaussian => standard_normal(&mut rng),
            };
            m.set(i, i, m.get(i, i) + delta * noise);
        }
        let se = symmetric_eig(&m)?;
        let gap = se
            .values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        gaps.push(gap);
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ratio = delta / n as f64;
    let exponent_hat = if delta > 0.0 && gaps[0] > 0.0 && ratio < 1.0 {
        Some(gaps[0].ln() / ratio.ln())
    } else {
        None
    };
    Ok(MinamiReport {
        n,
        delta,
        trials,
        gaps,
        exponent_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toeplitz_second_difference(n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// Asymptotic Kolmogorov-Smirnov p-value for statistic `d` at sample
    /// size `n`.
    fn ks_p_value(d: f64, n: usize) -> f64 {
        let nf = n as f64;
        let lambda = (nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d;
        if lambda < 0.2 {
            return 1.0;
        }
        let mut p = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            p += if k % 2 == 1 { term } else { -term };
        }
        (2.0 * p).clamp(0.0, 1.0)
    }

    fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
        let n = sorted.len() as f64;
        let mut d = 0.0_f64;
        for (i, &x) in sorted.iter().enumerate() {
            let f = cdf(x);
            d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
        }
        d
    }

    #[test]
    fn unperturbed_toeplitz_gap_matches_the_cosine_spacing() {
        let n = 8;
        let rep = minami_gap_experiment(
            &toeplitz_second_difference(n),
            0.0,
            NoiseDistribution::Uniform,
            1,
            1010,
        )
        .unwrap();
        let values: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
            .collect();
        let oracle = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        assert!((rep.min_gap() - oracle).abs() <= 1e-12);
        assert!(rep.exponent_hat.is_none());
    }

    #[test]
    fn two_level_uniform_gap_follows_the_triangle_law() {
        // With T = 0 the eigenvalues are the two scaled noise entries, so
        // the gap is |u - u'| whose law has cdf 2g - g^2 on [0, 1].
        let t = DenseMatrix::zeros(2, 2);
        let rep =
            minami_gap_experiment(&t, 1.0, NoiseDistribution::Uniform, 1000, 1011).unwrap();
        let d = ks_statistic(&rep.gaps, |g| (2.0 * g - g * g).clamp(0.0, 1.0));
        let p = ks_p_value(d, 1000);
        assert!(p > 0.01, "ks statistic {d} has p-value {p}");
    }

    #[test]
    fn noisy_toeplitz_sweep_records_positive_gaps() {
        let rep = minami_gap_experiment(
            &toeplitz_second_difference(32),
            1e-3,
            NoiseDistribution::Uniform,
            1000,
            1012,
        )
        .unwrap();
        assert!(rep.min_gap() > 0.0 && rep.min_gap().is_finite());
        assert!(rep.min_gap() <= rep.median_gap());
        assert!(rep.median_gap() <= rep.quantile(1.0));
        let c = rep.exponent_hat.unwrap();
        assert!(c > 0.0 && c.is_finite());
    }

    #[test]
    fn gaussian_noise_path_produces_positive_gaps() {
        let rep = minami_gap_experiment(
            &toeplitz_second_difference(8),
            1e-2,
            NoiseDistribution::Gaussian,
            50,
            1013,
        )
        .unwrap();
        assert!(rep.gaps.iter().all(|&g| g > 0.0));
        assert_eq!(rep.gaps.len(), 50);
    }

    #[test]
    fn power_law_fit_recovers_an_exact_slope() {
        let points: Vec<(f64, f64)> = (1..=8)
            .map(|i| {
                let x = 0.5 * i as f64;
                (x, 3.5 * x.powf(2.25))
            })
            .collect();
        let fit = fit_log_log(&points).unwrap();
        assert!((fit.exponent - 2.25).abs() <= 1e-12);
        assert!((fit.log_constant - 3.5_f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn dense_matrices_are_rejected() {
        let dense = DenseMatrix::from_fn(4, 4, |_, _| 1.0);
        assert!(minami_gap_experiment(&dense, 0.1, NoiseDistribution::Uniform, 1, 0).is_err());
    }
}
