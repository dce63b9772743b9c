//! Conditioning of the eigenproblem: eigenvector-basis condition number
//! divided by the spectral gap.

use num_complex::Complex64;

use crate::cmatrix::ComplexMatrix;
use crate::dense::DenseMatrix;
use crate::eig::{complex_eig, symmetric_eig};
use crate::error::{Error, Result};
use crate::svd::{singular_values, two_norm};

/// Conditioning summary of one eigendecomposition.
///
/// `kappa_eig = kappa_v / gap`; it is reported as infinite (flagged) when
/// the spectrum is numerically multiple (`gap < 1e-14 ||A||`) or the
/// eigenvector basis is numerically singular.
#[derive(Debug, Clone, Copy)]
pub struct EigCondition {
    /// Condition number of the unit-column eigenvector matrix.
    pub kappa_v: f64,
    /// Smallest pairwise distance between eigenvalues.
    pub gap: f64,
    /// `kappa_v / gap`, infinite when flagged.
    pub kappa_eig: f64,
}

impl EigCondition {
    /// True when the conditioning did not resolve to a finite number.
    pub fn flagged(&self) -> bool {
        !self.kappa_eig.is_finite()
    }
}

fn min_pairwise_gap(values: &[Complex64]) -> f64 {
    let n = values.len();
    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

fn assemble(kappa_v: f64, gap: f64, norm_a: f64) -> EigCondition {
    let kappa_eig = if gap < 1e-14 * norm_a || !kappa_v.is_finite() {
        f64::INFINITY
    } else {
        kappa_v / gap
    };
    EigCondition {
        kappa_v,
        gap,
        kappa_eig,
    }
}

fn basis_condition(sv: &[f64]) -> f64 {
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smin <= 1e-14 * smax {
        f64::INFINITY
    } else {
        // The ratio is at least one mathematically; roundoff on an
        // orthonormal basis can land a hair below it.
        (smax / smin).max(1.0)
    }
}

/// Eigenproblem conditioning of a real square matrix.
///
/// Symmetric input goes through the symmetric solver, whose orthonormal
/// eigenvectors make `kappa_v` one up to roundoff; everything else goes
/// through the general complex path.
pub fn kappa_eig(a: &DenseMatrix) -> Result<EigCondition> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "conditioning needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let scale = a.max_abs();
    if a.is_symmetric(1e-10 * scale.max(1.0)) {
        let se = symmetric_eig(a)?;
        let kappa_v = basis_condition(&singular_values(&se.vectors)?);
        // Ascending real eigenvalues: the closest pair is adjacent.
        let gap = se
            .values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let norm_a = se
            .values
            .iter()
            .fold(0.0_f64, |m, &v| m.max(v.abs()));
        Ok(assemble(kappa_v, gap, norm_a))
    } else {
        kappa_eig_complex(&ComplexMatrix::from_real(a))
    }
}

/// Eigenproblem conditioning of a complex square matrix.
pub fn kappa_eig_complex(a: &ComplexMatrix) -> Result<EigCondition> {
    let e = complex_eig(a)?;
    let gap = min_pairwise_gap(&e.values);
    // Singular values of the real embedding are those of the complex
    // matrix, each with multiplicity two, so ratios carry over.
    let kappa_v = basis_condition(&singular_values(&e.vectors.real_embedding())?);
    let norm_a = two_norm(&a.real_embedding())?;
    Ok(assemble(kappa_v, gap, norm_a))
}
