//! Sketch operator construction and application.
//!
//! An operator is stored as an `n x k` map applied through its transpose:
//! `apply` sends an `n x m` matrix `X` to the `k x m` matrix `Ω^T X`. Each
//! family keeps the representation it can apply fastest: Gaussian operators
//! are dense, sparse-stack operators keep one (column, sign) pair per block
//! per row, and the Hadamard-based families keep sign vectors plus sampled
//! positions and apply the transform in `O(n log n)` per column.

use rand::Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::rng::{gaussian_matrix, root_rng};
use crate::sketch::fwht::fwht_in_place;

/// Structural family of a realized sketch operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SketchFamily {
    /// Dense iid `N(0, 1/k)` entries.
    Gaussian,
    /// `k = block * zeta` columns split into `zeta` blocks; every row carries
    /// exactly one `±1/sqrt(zeta)` entry in each block at a uniformly random
    /// offset.
    SparseStack { zeta: usize, block: usize },
    /// Sign flip, Walsh-Hadamard mix, then `k` sampled coordinates scaled by
    /// `sqrt(n/k)`.
    Srht,
    /// Two independent sign-flip/mix rounds before sampling.
    RerandSrht,
    /// Exact identity embedding (`k = n`).
    Identity,
    /// Fixed coordinate selection (deterministic test fixture).
    Coordinates,
}

impl SketchFamily {
    /// Stable lowercase name used in scan output.
    pub fn name(&self) -> &'static str {
        match self {
            SketchFamily::Gaussian => "gaussian",
            SketchFamily::SparseStack { .. } => "sparse_stack",
            SketchFamily::Srht => "srht",
            SketchFamily::RerandSrht => "rerand_srht",
            SketchFamily::Identity => "identity",
            SketchFamily::Coordinates => "coordinates",
        }
    }
}

/// Family selector for constructing operators, before block shapes and
/// random draws are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Gaussian,
    SparseStack,
    Srht,
    RerandSrht,
    Identity,
}

impl FamilyKind {
    /// Stable lowercase name used in scan output.
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Gaussian => "gaussian",
            FamilyKind::SparseStack => "sparse_stack",
            FamilyKind::Srht => "srht",
            FamilyKind::RerandSrht => "rerand_srht",
            FamilyKind::Identity => "identity",
        }
    }
}

/// How the Hadamard families pick their `k` output coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Uniform iid positions; keeps `E ||Ω^T x||^2 = ||x||^2` exact.
    WithReplacement,
    /// Uniform subset of distinct positions (requires `k <= n`).
    WithoutReplacement,
}

#[derive(Debug, Clone)]
enum Repr {
    /// `n x k` matrix, applied as `W^T X`.
    Dense(DenseMatrix),
    /// Row-major `(column, sign)` pairs, `zeta` per row.
    RowBlocks { cols: Vec<u32>, signs: Vec<f64> },
    /// Sign vectors applied in order (`first`, mix, optional `second`, mix),
    /// then `samples` gathered and scaled.
    Hadamard {
        signs_first: Vec<f64>,
        signs_second: Option<Vec<f64>>,
        samples: Vec<usize>,
        scale: f64,
    },
    Identity,
    Coordinates(Vec<usize>),
}

/// A realized random embedding from dimension `n` down to `k`.
#[derive(Debug, Clone)]
pub struct SketchOperator {
    family: SketchFamily,
    n: usize,
    k: usize,
    seed: u64,
    repr: Repr,
}

/// Builds a sketch operator with the default (with-replacement) subsampling.
pub fn make_sketch(
    kind: FamilyKind,
    n: usize,
    k: usize,
    zeta: usize,
    seed: u64,
) -> Result<SketchOperator> {
    SketchOperator::with_sampling(kind, n, k, zeta, seed, SamplingMode::WithReplacement)
}

/// Applies the operator: returns `Ω^T X` of shape `k x m`.
pub fn apply_sketch(op: &SketchOperator, x: &DenseMatrix) -> Result<DenseMatrix> {
    op.apply(x)
}

impl SketchOperator {
    /// Builds an operator, choosing how the Hadamard families subsample.
    pub fn with_sampling(
        kind: FamilyKind,
        n: usize,
        k: usize,
        zeta: usize,
        seed: u64,
        mode: SamplingMode,
    ) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "sketch dimensions must be positive, got n={n}, k={k}"
            )));
        }
        let mut rng = root_rng(seed);
        let (family, repr) = match kind {
            FamilyKind::Gaussian => {
                let w = gaussian_matrix(&mut rng, n, k).scale(1.0 / (k as f64).sqrt());
                (SketchFamily::Gaussian, Repr::Dense(w))
            }
            FamilyKind::SparseStack => {
                if zeta == 0 || k % zeta != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "sparse stack needs k = block * zeta with zeta >= 1; got k={k}, zeta={zeta}"
                    )));
                }
                let block = k / zeta;
                let inv = 1.0 / (zeta as f64).sqrt();
                let mut cols = Vec::with_capacity(n * zeta);
                let mut signs = Vec::with_capacity(n * zeta);
                for _ in 0..n {
                    for s in 0..zeta {
                        let offset = rng.gen_range(0..block);
                        cols.push((s * block + offset) as u32);
                        signs.push(if rng.gen::<bool>() { inv } else { -inv });
                    }
                }
                (
                    SketchFamily::SparseStack { zeta, block },
                    Repr::RowBlocks { cols, signs },
                )
            }
            FamilyKind::Srht | FamilyKind::RerandSrht => {
                if !n.is_power_of_two() {
                    return Err(Error::InvalidArgument(format!(
                        "hadamard-based sketches need n to be a power of 2, got {n}"
                    )));
                }
                let signs_first = rademacher(&mut rng, n);
                let signs_second = if kind == FamilyKind::RerandSrht {
                    Some(rademacher(&mut rng, n))
                } else {
                    None
                };
                let samples = sample_positions(&mut rng, n, k, mode)?;
                let family = if kind == FamilyKind::RerandSrht {
                    SketchFamily::RerandSrht
                } else {
                    SketchFamily::Srht
                };
                (
                    family,
                    Repr::Hadamard {
                        signs_first,
                        signs_second,
                        samples,
                        scale: (n as f64 / k as f64).sqrt(),
                    },
                )
            }
            FamilyKind::Identity => {
                if k != n {
                    return Err(Error::InvalidArgument(format!(
                        "identity embedding needs k = n, got k={k}, n={n}"
                    )));
                }
                (SketchFamily::Identity, Repr::Identity)
            }
        };
        Ok(Self { family, n, k, seed, repr })
    }

    /// Deterministic operator that selects the given coordinates in order.
    pub fn coordinates(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("empty coordinate set".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {bad} out of range for dimension {n}"
            )));
        }
        Ok(Self {
            family: SketchFamily::Coordinates,
            n,
            k: indices.len(),
            seed: 0,
            repr: Repr::Coordinates(indices.to_vec()),
        })
    }

    pub fn family(&self) -> &SketchFamily {
        &self.family
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn sketch_dim(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `Ω^T X` for an `n x m` input.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.nrows() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "sketch expects {} rows, got {}",
                self.n,
                x.nrows()
            )));
        }
        let m = x.ncols();
        Ok(match &self.repr {
            Repr::Dense(w) => w.matmul_transa(x),
            Repr::RowBlocks { cols, signs } => {
                let zeta = match self.family {
                    SketchFamily::SparseStack { zeta, .. } => zeta,
                    _ => unreachable!("row-block representation is sparse-stack only"),
                };
                let mut out = DenseMatrix::zeros(self.k, m);
                for j in 0..m {
                    let xc = x.col(j).to_vec();
                    let oc = out.col_mut(j);
                    for (i, &xi) in xc.iter().enumerate() {
                        if xi != 0.0 {
                            for t in i * zeta..(i + 1) * zeta {
                                oc[cols[t] as usize] += signs[t] * xi;
                            }
                        }
                    }
                }
                out
            }
            Repr::Hadamard { signs_first, signs_second, samples, scale } => {
                let mut out = DenseMatrix::zeros(self.k, m);
                let mut v = vec![0.0; self.n];
                for j in 0..m {
                    v.copy_from_slice(x.col(j));
                    for (vi, s) in v.iter_mut().zip(signs_first) {
                        *vi *= s;
                    }
                    fwht_in_place(&mut v).expect("power-of-2 length checked at construction");
                    if let Some(d2) = signs_second {
                        for (vi, s) in v.iter_mut().zip(d2) {
                            *vi *= s;
                        }
                        fwht_in_place(&mut v).expect("power-of-2 length checked at construction");
                    }
                    let oc = out.col_mut(j);
                    for (q, &pos) in samples.iter().enumerate() {
                        oc[q] = scale * v[pos];
                    }
                }
                out
            }
            Repr::Identity => x.clone(),
            Repr::Coordinates(idx) => x.select_rows(idx),
        })
    }

    /// Dense realization of `Ω^T` (shape `k x n`), for oracles and small
    /// problems.
    pub fn transpose_dense(&self) -> DenseMatrix {
        match &self.repr {
            Repr::Dense(w) => w.transpose(),
            _ => self
                .apply(&DenseMatrix::identity(self.n))
                .expect("identity input always matches the ambient dimension"),
        }
    }
}

fn rademacher(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect()
}

fn sample_positions(
    rng: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    k: usize,
    mode: SamplingMode,
) -> Result<Vec<usize>> {
    match mode {
        SamplingMode::WithReplacement => Ok((0..k).map(|_| rng.gen_range(0..n)).collect()),
        SamplingMode::WithoutReplacement => {
            if k > n {
                return Err(Error::InvalidArgument(format!(
                    "cannot sample {k} distinct positions from {n}"
                )));
            }
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = rng.gen_range(i..n);
                pool.swap(i, j);
            }
            pool.truncate(k);
            Ok(pool)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{normal_vec, trial_rng};

    fn norm2(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Columns of `Ω^T` are the rows of `Ω`; returns the nonzero
    /// (position, value) pairs of row `i`.
    fn row_entries(wt: &DenseMatrix, i: usize) -> Vec<(usize, f64)> {
        (0..wt.nrows())
            .filter_map(|q| {
                let v = wt.get(q, i);
                (v != 0.0).then_some((q, v))
            })
            .collect()
    }

    #[test]
    fn single_block_stack_has_one_unit_entry_per_row() {
        let op = make_sketch(FamilyKind::SparseStack, 20, 8, 1, 5).unwrap();
        let wt = op.transpose_dense();
        for i in 0..20 {
            let entries = row_entries(&wt, i);
            assert_eq!(entries.len(), 1);
            assert_eq!(entries[0].1.abs(), 1.0);
        }
    }

    #[test]
    fn fully_dense_stack_has_all_rows_dense() {
        let k = 6;
        let op = make_sketch(FamilyKind::SparseStack, 10, k, k, 5).unwrap();
        let wt = op.transpose_dense();
        let expect = 1.0 / (k as f64).sqrt();
        for i in 0..10 {
            let entries = row_entries(&wt, i);
            assert_eq!(entries.len(), k);
            for (_, v) in entries {
                assert_eq!(v.abs(), expect);
            }
        }
    }

    #[test]
    fn stack_entries_stay_inside_their_blocks() {
        let (n, k, zeta) = (12, 6, 2);
        let block = k / zeta;
        let op = make_sketch(FamilyKind::SparseStack, n, k, zeta, 42).unwrap();
        let wt = op.transpose_dense();
        let expect = 1.0 / (zeta as f64).sqrt();
        for i in 0..n {
            let entries = row_entries(&wt, i);
            assert_eq!(entries.len(), zeta);
            for (s, &(pos, v)) in entries.iter().enumerate() {
                assert!(pos >= s * block && pos < (s + 1) * block);
                assert_eq!(v.abs(), expect);
            }
        }
    }

    #[test]
    fn stack_rejects_incompatible_block_count() {
        assert!(make_sketch(FamilyKind::SparseStack, 8, 7, 2, 0).is_err());
        assert!(make_sketch(FamilyKind::SparseStack, 8, 4, 0, 0).is_err());
    }

    #[test]
    fn stack_mean_squared_norm_matches_input_norm() {
        let (n, k, zeta, trials) = (256, 32, 4, 10_000);
        let mut rng = trial_rng(900, 0);
        let x = DenseMatrix::from_column_major(n, 1, normal_vec(&mut rng, n)).unwrap();
        let target = x.frobenius_norm().powi(2);
        let mut samples = Vec::with_capacity(trials);
        for t in 0..trials {
            let op = make_sketch(FamilyKind::SparseStack, n, k, zeta, t as u64).unwrap();
            samples.push(op.apply(&x).unwrap().frobenius_norm().powi(2));
        }
        assert_within_three_sigma(&samples, target);
    }

    fn assert_within_three_sigma(samples: &[f64], target: f64) {
        let t = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / t;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (t - 1.0);
        let sigma_mean = (var / t).sqrt();
        assert!(
            (mean - target).abs() <= 3.0 * sigma_mean,
            "mean {mean} vs target {target} (3 sigma = {})",
            3.0 * sigma_mean
        );
    }

    #[test]
    fn every_random_family_is_isotropic_in_the_mean() {
        let (n, k, trials) = (256, 32, 2500);
        let mut rng = trial_rng(901, 0);
        let x = DenseMatrix::from_column_major(n, 1, normal_vec(&mut rng, n)).unwrap();
        let target = x.frobenius_norm().powi(2);
        for kind in [
            FamilyKind::Gaussian,
            FamilyKind::SparseStack,
            FamilyKind::Srht,
            FamilyKind::RerandSrht,
        ] {
            let mut samples = Vec::with_capacity(trials);
            for t in 0..trials {
                let op = make_sketch(kind, n, k, 4, 7_000 + t as u64).unwrap();
                samples.push(op.apply(&x).unwrap().frobenius_norm().powi(2));
            }
            assert_within_three_sigma(&samples, target);
        }
    }

    #[test]
    fn fast_paths_agree_with_dense_realization() {
        let n = 64;
        let mut rng = trial_rng(902, 0);
        let x = crate::rng::gaussian_matrix(&mut rng, n, 5);
        for kind in [
            FamilyKind::Gaussian,
            FamilyKind::SparseStack,
            FamilyKind::Srht,
            FamilyKind::RerandSrht,
        ] {
            let op = make_sketch(kind, n, 16, 4, 31).unwrap();
            let fast = op.apply(&x).unwrap();
            let dense = op.transpose_dense().matmul(&x);
            let diff = fast.add_scaled(-1.0, &dense).max_abs();
            assert!(diff <= 1e-12, "{}: {diff}", op.family().name());
        }
    }

    #[test]
    fn zero_input_maps_to_zero() {
        let op = make_sketch(FamilyKind::Srht, 32, 8, 0, 3).unwrap();
        let out = op.apply(&DenseMatrix::zeros(32, 3)).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let op = make_sketch(FamilyKind::Gaussian, 16, 4, 0, 3).unwrap();
        assert!(op.apply(&DenseMatrix::zeros(17, 2)).is_err());
    }

    #[test]
    fn hadamard_families_need_power_of_two_dimension() {
        assert!(make_sketch(FamilyKind::Srht, 48, 8, 0, 0).is_err());
        assert!(make_sketch(FamilyKind::RerandSrht, 48, 8, 0, 0).is_err());
        assert!(make_sketch(FamilyKind::Gaussian, 48, 8, 0, 0).is_ok());
    }

    #[test]
    fn identity_family_requires_matching_dimensions() {
        assert!(make_sketch(FamilyKind::Identity, 8, 6, 0, 0).is_err());
        let op = make_sketch(FamilyKind::Identity, 8, 8, 0, 0).unwrap();
        let x = DenseMatrix::from_fn(8, 2, |i, j| (i + 3 * j) as f64);
        let out = op.apply(&x).unwrap();
        assert_eq!(out.add_scaled(-1.0, &x).max_abs(), 0.0);
    }

    #[test]
    fn construction_is_deterministic_per_seed() {
        for kind in [
            FamilyKind::Gaussian,
            FamilyKind::SparseStack,
            FamilyKind::Srht,
            FamilyKind::RerandSrht,
        ] {
            let a = make_sketch(kind, 32, 8, 2, 11).unwrap().transpose_dense();
            let b = make_sketch(kind, 32, 8, 2, 11).unwrap().transpose_dense();
            let c = make_sketch(kind, 32, 8, 2, 12).unwrap().transpose_dense();
            assert_eq!(a.data(), b.data());
            assert!(a.add_scaled(-1.0, &c).max_abs() > 0.0);
        }
    }

    #[test]
    fn sign_and_mix_rounds_preserve_the_norm_before_sampling() {
        let n = 128;
        let mut rng = trial_rng(903, 0);
        let x = normal_vec(&mut rng, n);
        let d1 = rademacher(&mut rng, n);
        let d2 = rademacher(&mut rng, n);
        let mut once: Vec<f64> = x.iter().zip(&d1).map(|(v, s)| v * s).collect();
        fwht_in_place(&mut once).unwrap();
        let mut twice: Vec<f64> = once.iter().zip(&d2).map(|(v, s)| v * s).collect();
        fwht_in_place(&mut twice).unwrap();
        let nx = norm2(&x);
        assert!((norm2(&once) - nx).abs() <= 1e-14 * nx);
        assert!((norm2(&twice) - nx).abs() <= 1e-14 * nx);
    }

    #[test]
    fn full_without_replacement_sampling_is_an_isometry() {
        let n = 64;
        let op = SketchOperator::with_sampling(
            FamilyKind::Srht,
            n,
            n,
            0,
            17,
            SamplingMode::WithoutReplacement,
        )
        .unwrap();
        let mut rng = trial_rng(904, 0);
        let x = DenseMatrix::from_column_major(n, 1, normal_vec(&mut rng, n)).unwrap();
        let out = op.apply(&x).unwrap();
        let nx = x.frobenius_norm();
        assert!((out.frobenius_norm() - nx).abs() <= 1e-14 * nx);
    }

    #[test]
    fn coordinate_fixture_selects_rows() {
        let op = SketchOperator::coordinates(6, &[4, 1]).unwrap();
        let x = DenseMatrix::from_fn(6, 2, |i, j| (10 * i + j) as f64);
        let out = op.apply(&x).unwrap();
        assert_eq!(out.get(0, 0), 40.0);
        assert_eq!(out.get(1, 1), 11.0);
        assert!(SketchOperator::coordinates(6, &[6]).is_err());
    }
}
