//! Two-grid error-propagation measurement: forms the post-smoothed
//! coarse-grid-corrected operator `Q = (A^{-1} - P A_H^{-1} R)(A S^nu)`
//! densely and reports its 2-norm together with the smoothing and
//! approximation quantities whose product bounds it.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::qr;
use crate::sparse::SparseMatrix;
use crate::svd;

/// Pointwise smoother whose iteration matrix `S` drives the measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoother {
    /// `S = I - omega D^{-1} A`.
    Jacobi(f64),
    /// Forward sweep, `S = I - (D + L)^{-1} A`.
    GaussSeidel,
}

/// Fine operator, transfer pair, Galerkin coarse operator, smoother, and
/// smoothing-step count. The restriction is always the transpose of the
/// prolongation and the coarse matrix the Galerkin product `R A P`.
#[derive(Debug, Clone)]
pub struct TwoGridSetup {
    pub a: SparseMatrix<f64>,
    pub p: SparseMatrix<f64>,
    pub r: SparseMatrix<f64>,
    pub a_h: SparseMatrix<f64>,
    pub smoother: Smoother,
    pub nu: usize,
    pub h: f64,
}

/// Norm of the two-grid operator plus the two measured factors: the
/// smoothing quantity `||A S^nu||_2 h^2` and the approximation quantity
/// `||A^{-1} - P A_H^{-1} R||_2 / h^2`. Their product bounds `||Q||_2`,
/// and uniform bounds in `h` are exactly the classical convergence
/// requirement.
#[derive(Debug, Clone)]
pub struct TwoGridReport {
    pub q_norm: f64,
    pub smoothing_quantity: f64,
    pub approximation_quantity: f64,
    /// `||A_H - R A P||_F / ||A_H||_F`, should be roundoff.
    pub galerkin_defect: f64,
}

impl TwoGridSetup {
    /// Assemble from a fine matrix and prolongation: `R = P^T`,
    /// `A_H = R A P` (computed densely at desk scale).
    pub fn galerkin(
        a: SparseMatrix<f64>,
        p: SparseMatrix<f64>,
        smoother: Smoother,
        nu: usize,
        h: f64,
    ) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch("fine matrix must be square".into()));
        }
        if p.nrows() != a.nrows() || p.ncols() >= p.nrows() {
            return Err(Error::DimensionMismatch(
                "prolongation must map a strictly smaller coarse space to the fine space".into(),
            ));
        }
        let r = p.transpose();
        let ad = a.to_dense();
        let pd = p.to_dense();
        let a_h_dense = pd.matmul_transa(&ad.matmul(&pd)); // P^T (A P)
        let a_h = SparseMatrix::from_dense(&a_h_dense, 0.0);
        Ok(Self {
            a,
            p,
            r,
            a_h,
            smoother,
            nu,
            h,
        })
    }

    /// 1-D Dirichlet Poisson ladder: fine grid with `2 m + 1` interior
    /// points on the unit interval, linear-interpolation prolongation onto
    /// `m` coarse points.
    pub fn poisson_1d(m: usize, smoother: Smoother, nu: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("need at least one coarse point".into()));
        }
        let n = 2 * m + 1;
        let h = 1.0 / (n as f64 + 1.0);
        let inv_h2 = 1.0 / (h * h);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 * inv_h2));
            if i > 0 {
                t.push((i, i - 1, -inv_h2));
            }
            if i + 1 < n {
                t.push((i, i + 1, -inv_h2));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &t)?;
        let p = linear_interpolation_1d(m)?;
        Self::galerkin(a, p, smoother, nu, h)
    }

    /// 2-D version: `(2 m + 1)^2` fine points, bilinear prolongation as
    /// the tensor product of the 1-D interpolation.
    pub fn poisson_2d(m: usize, smoother: Smoother, nu: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("need at least one coarse point".into()));
        }
        let n1 = 2 * m + 1;
        let h = 1.0 / (n1 as f64 + 1.0);
        let grid = crate::pde::Grid2D::new(n1, n1, h)?;
        let a = crate::pde::gen_diffusion_2d(&grid, &crate::pde::CoefficientField::Constant(1.0))?;
        let p1 = linear_interpolation_1d(m)?;
        let p = kron_sparse(&p1, &p1)?;
        Self::galerkin(a, p, smoother, nu, h)
    }
}

/// Linear interpolation from `m` coarse points into `2 m + 1` fine points:
/// coarse point `j` lands on fine point `2 j + 1` with weight 1 and feeds
/// its fine neighbors with weight 1/2.
pub fn linear_interpolation_1d(m: usize) -> Result<SparseMatrix<f64>> {
    let n = 2 * m + 1;
    let mut t = Vec::new();
    for j in 0..m {
        let center = 2 * j + 1;
        t.push((center, j, 1.0));
        t.push((center - 1, j, 0.5));
        t.push((center + 1, j, 0.5));
    }
    SparseMatrix::from_triplets(n, m, &t)
}

/// Kronecker product of sparse matrices, row-major index convention
/// matching the grid ordering of the generators.
pub fn kron_sparse(a: &SparseMatrix<f64>, b: &SparseMatrix<f64>) -> Result<SparseMatrix<f64>> {
    let mut t = Vec::new();
    for ia in 0..a.nrows() {
        let (ca, va) = a.row(ia);
        for (&ja, &wa) in ca.iter().zip(va) {
            for ib in 0..b.nrows() {
                let (cb, vb) = b.row(ib);
                for (&jb, &wb) in cb.iter().zip(vb) {
                    t.push((ib + ia * b.nrows(), jb + ja * b.ncols(), wa * wb));
                }
            }
        }
    }
    SparseMatrix::from_triplets(a.nrows() * b.nrows(), a.ncols() * b.ncols(), &t)
}

fn smoother_matrix(a: &DenseMatrix, smoother: Smoother) -> Result<DenseMatrix> {
    let n = a.nrows();
    let mut s = DenseMatrix::identity(n);
    match smoother {
        Smoother::Jacobi(omega) => {
            for j in 0..n {
                for i in 0..n {
                    let d = a.get(i, i);
                    if d == 0.0 {
                        return Err(Error::Singular("zero diagonal in smoother".into()));
                    }
                    s.set(i, j, s.get(i, j) - omega * a.get(i, j) / d);
                }
            }
        }
        Smoother::GaussSeidel => {
            // Column-by-column forward substitution with M = D + L.
            for j in 0..n {
                let mut col = vec![0.0f64; n];
                for i in 0..n {
                    let mut v = a.get(i, j);
                    for k in 0..i {
                        v -= a.get(i, k) * col[k];
                    }
                    let d = a.get(i, i);
                    if d == 0.0 {
                        return Err(Error::Singular("zero diagonal in smoother".into()));
                    }
                    col[i] = v / d;
                }
                for i in 0..n {
                    s.set(i, j, s.get(i, j) - col[i]);
                }
            }
        }
    }
    Ok(s)
}

/// Measure the two-grid contraction operator densely. Errors if the coarse
/// matrix is singular.
pub fn two_grid_contraction(setup: &TwoGridSetup) -> Result<TwoGridReport> {
    let ad = setup.a.to_dense();
    let pd = setup.p.to_dense();
    let rd = setup.r.to_dense();
    let ahd = setup.a_h.to_dense();

    let a_inv = qr::inverse(&ad)?;
    let ah_inv = qr::inverse(&ahd)?;

    // Approximation term E = A^{-1} - P A_H^{-1} R.
    let e = {
        let t = pd.matmul(&ah_inv.matmul(&rd));
        a_inv.add_scaled(-1.0, &t)
    };

    // Smoothing term A S^nu.
    let s = smoother_matrix(&ad, setup.smoother)?;
    let mut s_pow = DenseMatrix::identity(ad.nrows());
    for _ in 0..setup.nu {
        s_pow = s_pow.matmul(&s);
    }
    let a_s_nu = ad.matmul(&s_pow);

    let q = e.matmul(&a_s_nu);
    let q_norm = svd::two_norm(&q)?;
    let smoothing_quantity = svd::two_norm(&a_s_nu)? * setup.h * setup.h;
    let approximation_quantity = svd::two_norm(&e)? / (setup.h * setup.h);

    let rap = rd.matmul(&ad.matmul(&pd));
    let galerkin_defect = {
        let d = ahd.add_scaled(-1.0, &rap);
        d.frobenius_norm() / ahd.frobenius_norm().max(1e-300)
    };

    Ok(TwoGridReport {
        q_norm,
        smoothing_quantity,
        approximation_quantity,
        galerkin_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_1d_weighted_jacobi_contracts() {
        // 7 fine points onto 3 coarse, omega = 2/3, two smoothing steps.
        let setup = TwoGridSetup::poisson_1d(3, Smoother::Jacobi(2.0 / 3.0), 2).unwrap();
        assert_eq!(setup.a.nrows(), 7);
        assert_eq!(setup.a_h.nrows(), 3);
        let report = two_grid_contraction(&setup).unwrap();
        assert!(report.q_norm < 1.0, "two-grid norm {}", report.q_norm);
        assert!(report.galerkin_defect <= 1e-12);
    }

    #[test]
    fn no_smoothing_gives_the_plain_correction_operator() {
        // nu = 0: Q = (A^{-1} - P A_H^{-1} R) A = I - P A_H^{-1} R A.
        let setup = TwoGridSetup::poisson_1d(3, Smoother::Jacobi(2.0 / 3.0), 0).unwrap();
        let report = two_grid_contraction(&setup).unwrap();
        let ad = setup.a.to_dense();
        let pd = setup.p.to_dense();
        let rd = setup.r.to_dense();
        let ah_inv = qr::inverse(&setup.a_h.to_dense()).unwrap();
        let direct = DenseMatrix::identity(7)
            .add_scaled(-1.0, &pd.matmul(&ah_inv.matmul(&rd.matmul(&ad))));
        let direct_norm = svd::two_norm(&direct).unwrap();
        assert!((report.q_norm - direct_norm).abs() <= 1e-10 * direct_norm.max(1.0));
        assert!(report.q_norm.is_finite());
    }

    #[test]
    fn contraction_is_uniform_across_mesh_refinement() {
        // h = 1/8, 1/16, 1/32: the contraction norm stays bounded by a
        // fixed constant below one instead of degrading with h.
        let mut worst: f64 = 0.0;
        for m in [3usize, 7, 15] {
            let setup = TwoGridSetup::poisson_1d(m, Smoother::Jacobi(2.0 / 3.0), 2).unwrap();
            let report = two_grid_contraction(&setup).unwrap();
            worst = worst.max(report.q_norm);
        }
        assert!(worst < 0.9, "worst contraction {worst}");
    }

    #[test]
    fn factor_quantities_bound_the_product() {
        for m in [3usize, 7] {
            let setup = TwoGridSetup::poisson_1d(m, Smoother::Jacobi(2.0 / 3.0), 2).unwrap();
            let r = two_grid_contraction(&setup).unwrap();
            let product = r.smoothing_quantity * r.approximation_quantity;
            assert!(
                r.q_norm <= product * (1.0 + 1e-10),
                "norm {} vs factor product {}",
                r.q_norm,
                product
            );
        }
    }

    #[test]
    fn gauss_seidel_also_contracts() {
        let setup = TwoGridSetup::poisson_1d(7, Smoother::GaussSeidel, 1).unwrap();
        let report = two_grid_contraction(&setup).unwrap();
        assert!(report.q_norm < 1.0);
    }

    #[test]
    fn two_dimensional_bilinear_ladder_contracts() {
        let setup = TwoGridSetup::poisson_2d(3, Smoother::Jacobi(2.0 / 3.0), 2).unwrap();
        assert_eq!(setup.a.nrows(), 49);
        assert_eq!(setup.a_h.nrows(), 9);
        let report = two_grid_contraction(&setup).unwrap();
        assert!(report.q_norm < 1.0, "2-D contraction {}", report.q_norm);
        assert!(report.galerkin_defect <= 1e-12);
    }

    #[test]
    fn singular_coarse_matrix_is_an_error() {
        let a = SparseMatrix::<f64>::from_diag(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let p = linear_interpolation_1d(3).unwrap();
        let setup = TwoGridSetup::galerkin(a, p, Smoother::GaussSeidel, 1, 0.125);
        // Either assembly or the contraction measurement must refuse.
        match setup {
            Ok(s) => assert!(two_grid_contraction(&s).is_err()),
            Err(_) => {}
        }
    }
}
