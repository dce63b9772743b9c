//! SVD-based tensor-train decomposition and exact reconstruction.

use super::tensor::DenseTensor;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::svd::dense_svd;

/// One tensor-train core with shape `(rl, d, rr)`, stored with `rl` fastest.
#[derive(Debug, Clone)]
pub struct TtCore {
    pub rl: usize,
    pub d: usize,
    pub rr: usize,
    values: Vec<f64>,
}

impl TtCore {
    pub fn from_values(rl: usize, d: usize, rr: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rl * d * rr {
            return Err(Error::DimensionMismatch(format!(
                "core ({rl}, {d}, {rr}) needs {} values, got {}",
                rl * d * rr,
                values.len()
            )));
        }
        Ok(Self { rl, d, rr, values })
    }

    pub fn get(&self, a: usize, i: usize, b: usize) -> f64 {
        self.values[a + self.rl * (i + self.d * b)]
    }

    /// `(rl * d) x rr` unfolding (a reshape of the stored values).
    pub fn left_unfold(&self) -> DenseMatrix {
        DenseMatrix::from_column_major(self.rl * self.d, self.rr, self.values.clone()).unwrap()
    }

    /// `rl x (d * rr)` unfolding (also a reshape).
    pub fn right_unfold(&self) -> DenseMatrix {
        DenseMatrix::from_column_major(self.rl, self.d * self.rr, self.values.clone()).unwrap()
    }

    pub fn from_left_unfold(rl: usize, d: usize, m: &DenseMatrix) -> Result<Self> {
        if m.nrows() != rl * d {
            return Err(Error::DimensionMismatch("left unfold shape".into()));
        }
        Self::from_values(rl, d, m.ncols(), m.data().to_vec())
    }

    pub fn from_right_unfold(d: usize, rr: usize, m: &DenseMatrix) -> Result<Self> {
        if m.ncols() != d * rr {
            return Err(Error::DimensionMismatch("right unfold shape".into()));
        }
        Self::from_values(m.nrows(), d, rr, m.data().to_vec())
    }
}

/// Chain of tensor-train cores with boundary ranks 1.
#[derive(Debug, Clone)]
pub struct TtCores {
    cores: Vec<TtCore>,
}

impl TtCores {
    pub fn new(cores: Vec<TtCore>) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::InvalidArgument("no cores".into()));
        }
        if cores[0].rl != 1 || cores.last().unwrap().rr != 1 {
            return Err(Error::InvalidArgument("boundary ranks must be 1".into()));
        }
        for w in cores.windows(2) {
            if w[0].rr != w[1].rl {
                return Err(Error::DimensionMismatch(format!(
                    "adjacent core ranks {} vs {}",
                    w[0].rr, w[1].rl
                )));
            }
        }
        Ok(Self { cores })
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn cores(&self) -> &[TtCore] {
        &self.cores
    }

    pub fn cores_mut(&mut self) -> &mut [TtCore] {
        &mut self.cores
    }

    pub fn dims(&self) -> Vec<usize> {
        self.cores.iter().map(|c| c.d).collect()
    }

    /// Internal ranks `(r_1, ..., r_{m-1})`.
    pub fn ranks(&self) -> Vec<usize> {
        self.cores[..self.cores.len() - 1]
            .iter()
            .map(|c| c.rr)
            .collect()
    }
}

/// Truncation rule for the sweep.
#[derive(Debug, Clone)]
pub enum TtSvdOptions {
    /// Prescribed internal ranks, one per edge (clipped to the unfolding
    /// dimensions when too large, flagged in the result).
    Ranks(Vec<usize>),
    /// Keep the smallest rank whose discarded tail energy (sum of squared
    /// singular values) is at most this value, applied at every edge.
    Tolerance(f64),
}

/// Output of [`tt_svd`]: the cores, the discarded tail energy at each edge
/// during the sweep, and whether any requested rank had to be clipped.
#[derive(Debug, Clone)]
pub struct TtDecomposition {
    pub cores: TtCores,
    /// `edge_tails[e]` is the sum of squared discarded singular values at
    /// edge `e` of the sweep.
    pub edge_tails: Vec<f64>,
    pub rank_clipped: bool,
}

/// Left-to-right SVD sweep. All cores except the last come out
/// left-orthogonal (their left unfoldings have orthonormal columns).
pub fn tt_svd(x: &DenseTensor, options: &TtSvdOptions) -> Result<TtDecomposition> {
    let dims = x.dims().to_vec();
    let m = dims.len();
    if m < 2 {
        return Err(Error::InvalidArgument(
            "tensor-train needs order >= 2".into(),
        ));
    }
    if let TtSvdOptions::Ranks(r) = options {
        if r.len() != m - 1 {
            return Err(Error::InvalidArgument(format!(
                "{} ranks for {} edges",
                r.len(),
                m - 1
            )));
        }
        if r.iter().any(|&x| x == 0) {
            return Err(Error::InvalidArgument("ranks must be positive".into()));
        }
    }

    let mut cores = Vec::with_capacity(m);
    let mut edge_tails = Vec::with_capacity(m - 1);
    let mut rank_clipped = false;
    let mut rl = 1usize;
    // Current remainder, shaped (rl * d_e) x (product of later dims).
    let mut c = DenseMatrix::from_column_major(dims[0], x.len() / dims[0], x.values().to_vec())?;

    for e in 0..(m - 1) {
        let f = dense_svd(&c)?;
        let p = f.sigma.len();
        let chi = match options {
            TtSvdOptions::Ranks(r) => {
                if r[e] > p {
                    rank_clipped = true;
                }
                r[e].min(p)
            }
            TtSvdOptions::Tolerance(tol) => {
                // Smallest rank whose tail is within the budget.
                let mut chi = p;
                let mut tail = 0.0;
                for k in (0..p).rev() {
                    let t = tail + f.sigma[k] * f.sigma[k];
                    if t <= *tol {
                        tail = t;
                        chi = k;
                    } else {
                        break;
                    }
                }
                chi.max(1)
            }
        };
        let tail: f64 = f.sigma[chi..].iter().map(|s| s * s).sum();
        edge_tails.push(tail);

        let u = DenseMatrix::from_fn(c.nrows(), chi, |i, j| f.u.get(i, j));
        cores.push(TtCore::from_left_unfold(rl, dims[e], &u)?);

        // Remainder = diag(sigma) V^T, reshaped for the next edge.
        let next_d = dims[e + 1];
        let rest: usize = dims[e + 1..].iter().product();
        let sv = DenseMatrix::from_fn(chi, rest / next_d * next_d, |i, j| {
            f.sigma[i] * f.v.get(j, i)
        });
        c = DenseMatrix::from_column_major(chi * next_d, rest / next_d, sv.data().to_vec())?;
        rl = chi;
    }
    cores.push(TtCore::from_values(
        rl,
        dims[m - 1],
        1,
        c.data().to_vec(),
    )?);

    Ok(TtDecomposition {
        cores: TtCores::new(cores)?,
        edge_tails,
        rank_clipped,
    })
}

/// Exact contraction of a tensor-train back to a dense tensor.
pub fn tt_reconstruct(tt: &TtCores) -> Result<DenseTensor> {
    let dims = tt.dims();
    let mut acc: DenseMatrix = tt.cores()[0].left_unfold(); // (d_0) x r_0 since rl = 1
    for core in &tt.cores()[1..] {
        // acc: (N x rl); multiply by the rl x (d * rr) unfolding.
        let prod = acc.matmul(&core.right_unfold()); // N x (d * rr)
        let n_next = acc.nrows() * core.d;
        acc = DenseMatrix::from_column_major(n_next, core.rr, prod.data().to_vec())?;
    }
    DenseTensor::from_values(dims, acc.data().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn random_tensor(seed: u64, dims: &[usize]) -> DenseTensor {
        let mut r = rng::trial_rng(6400, seed);
        let len: usize = dims.iter().product();
        DenseTensor::from_values(dims.to_vec(), rng::normal_vec(&mut r, len)).unwrap()
    }

    #[test]
    fn full_rank_sweep_reconstructs_exactly() {
        let x = random_tensor(1, &[3, 4, 2, 3]);
        // Full ranks: no truncation anywhere.
        let dec = tt_svd(&x, &TtSvdOptions::Tolerance(0.0)).unwrap();
        let y = tt_reconstruct(&dec.cores).unwrap();
        let err: f64 = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-12 * x.frobenius_norm());
        assert!(dec.edge_tails.iter().all(|&t| t == 0.0));
    }

    #[test]
    fn cores_are_left_orthogonal() {
        let x = random_tensor(2, &[4, 3, 3, 4]);
        let dec = tt_svd(&x, &TtSvdOptions::Ranks(vec![2, 3, 2])).unwrap();
        for core in &dec.cores.cores()[..3] {
            assert!(core.left_unfold().orthonormality_defect() < 1e-12);
        }
    }

    #[test]
    fn truncation_error_bounded_by_sum_of_edge_tails() {
        for seed in 0..20u64 {
            let x = random_tensor(100 + seed, &[3, 3, 3, 3]);
            let dec = tt_svd(&x, &TtSvdOptions::Ranks(vec![2, 2, 2])).unwrap();
            let y = tt_reconstruct(&dec.cores).unwrap();
            let err_sq: f64 = x
                .values()
                .iter()
                .zip(y.values())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let budget: f64 = dec.edge_tails.iter().sum();
            assert!(
                err_sq <= budget * (1.0 + 1e-10) + 1e-14,
                "seed {seed}: {err_sq} vs {budget}"
            );
        }
    }

    #[test]
    fn two_core_chain_is_a_matrix_factorization() {
        let x = random_tensor(3, &[5, 4]);
        let dec = tt_svd(&x, &TtSvdOptions::Tolerance(0.0)).unwrap();
        assert_eq!(dec.cores.order(), 2);
        let y = tt_reconstruct(&dec.cores).unwrap();
        let err: f64 = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-12 * x.frobenius_norm());
    }

    #[test]
    fn oversized_rank_request_is_clipped_with_notice() {
        let x = random_tensor(4, &[2, 2, 2]);
        let dec = tt_svd(&x, &TtSvdOptions::Ranks(vec![10, 10])).unwrap();
        assert!(dec.rank_clipped);
        assert_eq!(dec.cores.ranks(), vec![2, 2]);
    }

    #[test]
    fn low_rank_tensor_is_recovered_at_its_rank() {
        // Rank-1 tensor: outer product of three vectors.
        let u = [1.0, -2.0, 0.5];
        let v = [2.0, 1.0];
        let w = [1.0, 3.0, -1.0, 0.25];
        let x = DenseTensor::from_fn(&[3, 2, 4], |idx| u[idx[0]] * v[idx[1]] * w[idx[2]]);
        let dec = tt_svd(&x, &TtSvdOptions::Ranks(vec![1, 1])).unwrap();
        let y = tt_reconstruct(&dec.cores).unwrap();
        let err: f64 = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-12 * x.frobenius_norm());
    }
}
