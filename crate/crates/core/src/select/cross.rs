//! Cross approximation by greedy complete pivoting, and the fermionic
//! integration kernel it is most often pointed at.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Fermionic kernel `e^{-t w} / (1 + e^{-w})`, evaluated in a form that
/// never exponentiates a large positive argument: for `w < 0` the numerator
/// and denominator are both multiplied by `e^w`.
pub fn fermionic_kernel(t: f64, omega: f64) -> f64 {
    if omega >= 0.0 {
        (-t * omega).exp() / (1.0 + (-omega).exp())
    } else {
        (omega * (1.0 - t)).exp() / (1.0 + omega.exp())
    }
}

/// Discretization of a kernel `K(t, w)` on `[0, 1] x [-L, L]`: Chebyshev
/// nodes in `t` (rows), uniform nodes in `w` (columns).
#[derive(Debug, Clone)]
pub struct KernelGrid {
    /// Sorted `t` nodes in `[0, 1]`.
    pub t_nodes: Vec<f64>,
    /// Sorted frequency nodes in `[-cutoff, cutoff]`.
    pub omega_nodes: Vec<f64>,
    /// Frequency cutoff.
    pub cutoff: f64,
    /// Evaluated kernel, `matrix[i][j] = K(t_i, w_j)`.
    pub matrix: DenseMatrix,
}

impl KernelGrid {
    /// Evaluates the fermionic kernel on an `nt x nw` grid.
    pub fn fermionic(cutoff: f64, nt: usize, nw: usize) -> Result<Self> {
        Self::build(cutoff, nt, nw, fermionic_kernel)
    }

    /// Fermionic grid at the default density of 4 nodes per unit of
    /// `ln(cutoff)` in each direction (at least 16 nodes).
    pub fn fermionic_default(cutoff: f64) -> Result<Self> {
        let n = ((4.0 * cutoff.ln()).ceil() as usize).max(16);
        Self::fermionic(cutoff, n, n)
    }

    fn build(cutoff: f64, nt: usize, nw: usize, kernel: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !(cutoff > 0.0) || nt < 2 || nw < 2 {
            return Err(Error::InvalidArgument(format!(
                "kernel grid needs a positive cutoff and at least 2x2 nodes, \
                 got cutoff={cutoff}, {nt}x{nw}"
            )));
        }
        // Chebyshev nodes mapped to [0, 1], ascending.
        let t_nodes: Vec<f64> = (0..nt)
            .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * nt) as f64).cos()))
            .collect();
        let omega_nodes: Vec<f64> = (0..nw)
            .map(|j| -cutoff + 2.0 * cutoff * j as f64 / (nw - 1) as f64)
            .collect();
        let matrix = DenseMatrix::from_fn(nt, nw, |i, j| kernel(t_nodes[i], omega_nodes[j]));
        if matrix.data().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "kernel evaluation produced a non-finite value".into(),
            ));
        }
        Ok(Self {
            t_nodes,
            omega_nodes,
            cutoff,
            matrix,
        })
    }
}

/// Square LU factorization with partial pivoting, for the cross core.
#[derive(Debug, Clone)]
struct CoreLu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl CoreLu {
    fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.nrows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(1e-300);
        for col in 0..n {
            let mut best = col;
            for i in col + 1..n {
                if lu.get(i, col).abs() > lu.get(best, col).abs() {
                    best = i;
                }
            }
            if lu.get(best, col).abs() <= 1e-14 * scale {
                return Err(Error::Singular(format!(
                    "cross core is singular at elimination step {col}"
                )));
            }
            if best != col {
                perm.swap(col, best);
                for j in 0..n {
                    let t = lu.get(col, j);
                    lu.set(col, j, lu.get(best, j));
                    lu.set(best, j, t);
                }
            }
            let piv = lu.get(col, col);
            for i in col + 1..n {
                let m = lu.get(i, col) / piv;
                lu.set(i, col, m);
                for j in col + 1..n {
                    lu.set(i, j, lu.get(i, j) - m * lu.get(col, j));
                }
            }
        }
        Ok(Self { lu, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu.get(i, j) * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu.get(i, j) * x[j];
            }
            x[i] /= self.lu.get(i, i);
        }
        x
    }
}

/// Cross approximation in factored form: selected rows and columns of the
/// original matrix plus an LU factorization of the core `M[I, J]`. The
/// approximant `M[:, J] M[I, J]^{-1} M[I, :]` is only materialized on
/// request.
#[derive(Debug, Clone)]
pub struct CrossApproximation {
    /// Selected row indices, in pivot order.
    pub row_indices: Vec<usize>,
    /// Selected column indices, in pivot order.
    pub col_indices: Vec<usize>,
    cols: DenseMatrix,
    rows: DenseMatrix,
    core: CoreLu,
    /// `max |M - approx|` over all entries.
    pub max_residual: f64,
    /// Number of pivots actually taken (less than requested if the greedy
    /// pivot underflowed).
    pub achieved_rank: usize,
}

impl CrossApproximation {
    /// Single entry of the approximant.
    pub fn evaluate(&self, i: usize, j: usize) -> f64 {
        let rhs: Vec<f64> = (0..self.achieved_rank).map(|t| self.rows.get(t, j)).collect();
        let y = self.core.solve(&rhs);
        (0..self.achieved_rank).map(|t| self.cols.get(i, t) * y[t]).sum()
    }

    /// Dense realization of the approximant (for error measurement at small
    /// sizes).
    pub fn dense(&self) -> DenseMatrix {
        let k = self.achieved_rank;
        let n = self.rows.ncols();
        let mut y = DenseMatrix::zeros(k, n);
        for j in 0..n {
            let rhs: Vec<f64> = (0..k).map(|t| self.rows.get(t, j)).collect();
            y.set_col(j, &self.core.solve(&rhs));
        }
        self.cols.matmul(&y)
    }
}

/// Greedy complete-pivoting cross approximation: at each step the entry of
/// largest residual magnitude (ties toward the lowest column-major index)
/// becomes the next cross center. Stops early if the best remaining pivot
/// falls to roundoff level relative to `max |M|`.
pub fn gecp_cross(m: &DenseMatrix, k: usize) -> Result<CrossApproximation> {
    let (nr, nc) = (m.nrows(), m.ncols());
    if k == 0 || k > nr.min(nc) {
        return Err(Error::InvalidArgument(format!(
            "cross rank {k} out of range for a {nr}x{nc} matrix"
        )));
    }
    let scale = m.max_abs();
    let cutoff = 1e-14 * scale;
    let mut resid = m.clone();
    let mut row_indices = Vec::with_capacity(k);
    let mut col_indices = Vec::with_capacity(k);
    for _ in 0..k {
        let mut bi = 0;
        let mut bj = 0;
        let mut best = -1.0;
        for j in 0..nc {
            let col = resid.col(j);
            for (i, &v) in col.iter().enumerate() {
                if v.abs() > best {
                    best = v.abs();
                    bi = i;
                    bj = j;
                }
            }
        }
        if best <= cutoff {
            break;
        }
        let piv = resid.get(bi, bj);
        row_indices.push(bi);
        col_indices.push(bj);
        let u: Vec<f64> = resid.col(bj).to_vec();
        let v: Vec<f64> = (0..nc).map(|j| resid.get(bi, j)).collect();
        for j in 0..nc {
            let vj = v[j] / piv;
            if vj != 0.0 {
                let col = resid.col_mut(j);
                for i in 0..nr {
                    col[i] -= u[i] * vj;
                }
            }
        }
    }
    if row_indices.is_empty() {
        return Err(Error::InvalidArgument(
            "matrix is numerically zero; no cross pivot available".into(),
        ));
    }
    let achieved_rank = row_indices.len();
    let cols = m.select_columns(&col_indices);
    let rows = m.select_rows(&row_indices);
    let core = CoreLu::factor(&rows.select_columns(&col_indices))
        .map_err(|_| Error::Singular("cross core became singular".into()))?;
    Ok(CrossApproximation {
        row_indices,
        col_indices,
        cols,
        rows,
        core,
        max_residual: resid.max_abs(),
        achieved_rank,
    })
}
