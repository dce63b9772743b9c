//! Embedding quality measurement and oblivious subspace-injection scans.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::rng::{haar_subspace, trial_rng};
use crate::sketch::operator::{make_sketch, FamilyKind, SketchOperator};
use crate::svd::singular_values;
use rand::Rng;

/// Extremal squared singular values of a sketched orthonormal basis:
/// `alpha ||x||^2 <= ||Ω^T x||^2 <= beta ||x||^2` for every `x` in the
/// subspace, with both bounds attained.
#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    /// Injectivity floor `sigma_min(Ω^T Q)^2` (zero when `k < r`).
    pub alpha: f64,
    /// Dilation ceiling `sigma_max(Ω^T Q)^2`.
    pub beta: f64,
    /// Dimension of the tested subspace.
    pub subspace_dim: usize,
    /// Ambient dimension of the operator.
    pub n: usize,
    /// Sketch dimension of the operator.
    pub k: usize,
}

/// Measures how an operator distorts the subspace spanned by an orthonormal
/// basis `Q` (checked to 1e-10).
pub fn measure_embedding(op: &SketchOperator, q: &DenseMatrix) -> Result<EmbeddingReport> {
    if q.nrows() != op.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, operator expects {}",
            q.nrows(),
            op.ambient_dim()
        )));
    }
    let defect = q.orthonormality_defect();
    if defect > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "basis is not orthonormal (defect {defect:.3e})"
        )));
    }
    let r = q.ncols();
    let sv = singular_values(&op.apply(q)?)?;
    let beta = sv[0] * sv[0];
    let alpha = if op.sketch_dim() < r {
        0.0
    } else {
        let s = sv[sv.len() - 1];
        s * s
    };
    Ok(EmbeddingReport {
        alpha,
        beta,
        subspace_dim: r,
        n: op.ambient_dim(),
        k: op.sketch_dim(),
    })
}

/// One grid point of an injection scan.
#[derive(Debug, Clone)]
pub struct OsiCell {
    pub family: String,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    /// Blocks per row for the sparse-stack family; 0 for families without a
    /// sparsity parameter.
    pub zeta: usize,
    pub threshold: f64,
    pub trials: usize,
    pub failures: usize,
}

impl OsiCell {
    /// Empirical fraction of trials whose injectivity fell below threshold.
    pub fn failure_fraction(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

/// Full scan result over a `(k, zeta)` grid.
#[derive(Debug, Clone)]
pub struct OsiScan {
    pub cells: Vec<OsiCell>,
    /// Target failure probability the scan is judged against.
    pub delta: f64,
    pub seed: u64,
}

impl OsiScan {
    /// Renders the scan as CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,n,r,k,zeta,threshold,trials,failures\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                c.family, c.n, c.r, c.k, c.zeta, c.threshold, c.trials, c.failures
            ));
        }
        out
    }
}

/// Estimates, for each grid point, how often a fresh operator fails to embed
/// a Haar-random `r`-dimensional subspace with injectivity at least
/// `alpha_threshold`. Each trial draws its own subspace and operator seed
/// from a dedicated stream, so the scan is reproducible per seed and cells
/// are independent.
#[allow(clippy::too_many_arguments)]
pub fn osi_scan(
    kind: FamilyKind,
    n: usize,
    r: usize,
    k_grid: &[usize],
    zeta_grid: &[usize],
    alpha_threshold: f64,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<OsiScan> {
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {r} out of range for ambient {n}"
        )));
    }
    if trials == 0 || k_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "scan needs at least one trial and one sketch size".into(),
        ));
    }
    let grid: Vec<(usize, usize)> = if kind == FamilyKind::SparseStack {
        if zeta_grid.is_empty() {
            return Err(Error::InvalidArgument(
                "sparse-stack scan needs a zeta grid".into(),
            ));
        }
        k_grid
            .iter()
            .flat_map(|&k| zeta_grid.iter().map(move |&z| (k, z)))
            .collect()
    } else {
        k_grid.iter().map(|&k| (k, 0)).collect()
    };
    let mut cells = Vec::with_capacity(grid.len());
    for (ci, &(k, zeta)) in grid.iter().enumerate() {
        let mut failures = 0;
        for t in 0..trials {
            let mut rng = trial_rng(seed, (ci * trials + t) as u64);
            let q = haar_subspace(&mut rng, n, r);
            let op = make_sketch(kind, n, k, zeta, rng.gen::<u64>())?;
            if measure_embedding(&op, &q)?.alpha < alpha_threshold {
                failures += 1;
            }
        }
        cells.push(OsiCell {
            family: kind.name().to_string(),
            n,
            r,
            k,
            zeta,
            threshold: alpha_threshold,
            trials,
            failures,
        });
    }
    Ok(OsiScan { cells, delta, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::normal_vec;

    #[test]
    fn identity_embedding_reports_unit_bounds() {
        let op = make_sketch(FamilyKind::Identity, 12, 12, 0, 0).unwrap();
        let mut rng = trial_rng(910, 0);
        let q = haar_subspace(&mut rng, 12, 4);
        let rep = measure_embedding(&op, &q).unwrap();
        assert!((rep.alpha - 1.0).abs() <= 1e-12);
        assert!((rep.beta - 1.0).abs() <= 1e-12);
        assert!(rep.alpha <= rep.beta);
    }

    #[test]
    fn aligned_and_complementary_subsampling_hit_the_extremes() {
        let n = 8;
        let span = [0usize, 2, 4];
        let q = DenseMatrix::from_fn(n, span.len(), |i, j| if i == span[j] { 1.0 } else { 0.0 });

        let aligned = SketchOperator::coordinates(n, &span).unwrap();
        let rep = measure_embedding(&aligned, &q).unwrap();
        assert!((rep.alpha - 1.0).abs() <= 1e-12);
        assert!((rep.beta - 1.0).abs() <= 1e-12);

        let complement: Vec<usize> = (0..n).filter(|i| !span.contains(i)).collect();
        let missing = SketchOperator::coordinates(n, &complement).unwrap();
        let rep = measure_embedding(&missing, &q).unwrap();
        assert!(rep.alpha.abs() <= 1e-24);
        assert!(rep.beta.abs() <= 1e-24);
    }

    #[test]
    fn sketch_smaller_than_subspace_has_zero_injectivity() {
        let q = DenseMatrix::from_fn(8, 3, |i, j| if i == j { 1.0 } else { 0.0 });
        let op = SketchOperator::coordinates(8, &[0, 1]).unwrap();
        let rep = measure_embedding(&op, &q).unwrap();
        assert_eq!(rep.alpha, 0.0);
        assert!(rep.beta > 0.0);
    }

    #[test]
    fn gaussian_injectivity_rarely_drops_below_a_quarter() {
        let (n, r, k) = (256, 8, 64);
        let mut rng = trial_rng(911, 0);
        let q = haar_subspace(&mut rng, n, r);
        let mut good = 0;
        for t in 0..100 {
            let op = make_sketch(FamilyKind::Gaussian, n, k, 0, 5_000 + t).unwrap();
            if measure_embedding(&op, &q).unwrap().alpha > 0.25 {
                good += 1;
            }
        }
        assert!(good >= 95, "alpha > 0.25 in only {good} of 100 trials");
    }

    #[test]
    fn sampled_rayleigh_quotients_stay_inside_the_reported_extremes() {
        let (n, r, k) = (64, 5, 16);
        let mut rng = trial_rng(912, 0);
        let q = haar_subspace(&mut rng, n, r);
        let op = make_sketch(FamilyKind::SparseStack, n, k, 4, 77).unwrap();
        let rep = measure_embedding(&op, &q).unwrap();
        for _ in 0..1000 {
            let c = normal_vec(&mut rng, r);
            let nc: f64 = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            let qc = q.matvec(&c);
            let x = DenseMatrix::from_column_major(n, 1, qc).unwrap();
            let quotient = (op.apply(&x).unwrap().frobenius_norm() / nc).powi(2);
            assert!(quotient <= rep.beta * (1.0 + 1e-10) + 1e-14);
            assert!(quotient >= rep.alpha * (1.0 - 1e-10) - 1e-14);
        }
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let op = make_sketch(FamilyKind::Gaussian, 8, 4, 0, 0).unwrap();
        let q = DenseMatrix::from_fn(8, 2, |i, j| if i == j { 2.0 } else { 0.0 });
        assert!(measure_embedding(&op, &q).is_err());
    }

    #[test]
    fn lossless_identity_scan_never_fails() {
        let scan = osi_scan(FamilyKind::Identity, 16, 4, &[16], &[], 0.9, 0.01, 25, 3).unwrap();
        assert_eq!(scan.cells.len(), 1);
        assert_eq!(scan.cells[0].failures, 0);
    }

    #[test]
    fn scan_output_is_reproducible_per_seed() {
        let run = |seed| {
            osi_scan(FamilyKind::SparseStack, 64, 8, &[16, 32], &[2, 4], 0.1, 0.01, 10, seed)
                .unwrap()
                .to_csv()
        };
        assert_eq!(run(5), run(5));
        let csv = run(5);
        assert!(csv.starts_with("family,n,r,k,zeta,threshold,trials,failures\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn srht_scan_counts_are_bounded_by_trials() {
        let scan = osi_scan(FamilyKind::Srht, 64, 8, &[8, 24], &[], 0.1, 0.01, 15, 9).unwrap();
        for cell in &scan.cells {
            assert!(cell.failures <= cell.trials);
            assert_eq!(cell.zeta, 0);
            assert!(cell.failure_fraction() >= 0.0 && cell.failure_fraction() <= 1.0);
        }
    }

    #[test]
    fn incompatible_sparse_grid_is_rejected() {
        assert!(osi_scan(FamilyKind::SparseStack, 16, 4, &[8], &[3], 0.1, 0.01, 5, 0).is_err());
        assert!(osi_scan(FamilyKind::SparseStack, 16, 4, &[8], &[], 0.1, 0.01, 5, 0).is_err());
    }
}
