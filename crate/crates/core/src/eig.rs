//! Dense eigendecomposition.
//!
//! Symmetric matrices go through Householder tridiagonalization followed by
//! the implicit-shift QL iteration; general (real or complex) matrices go
//! through Householder reduction to Hessenberg form followed by shifted QR,
//! producing a Schur form whose triangular factor is back-substituted for
//! eigenvectors. Real general input is promoted to the complex path, which
//! is exactly Hessenberg + shifted QR over the complex field.

use crate::cmatrix::ComplexMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigendecomposition with complex eigenvalues and unit-norm eigenvector
/// columns (`vectors.col(j)` pairs with `values[j]`).
#[derive(Debug, Clone)]
pub struct EigResult {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
}

impl EigResult {
    /// Largest eigenpair residual `||A v - lambda v||_2` over all pairs.
    pub fn max_residual(&self, a: &ComplexMatrix) -> f64 {
        let n = a.nrows();
        let mut worst: f64 = 0.0;
        for j in 0..self.values.len() {
            let v: Vec<Complex64> = (0..n).map(|i| self.vectors.get(i, j)).collect();
            let av = a.matvec(&v);
            let mut r2 = 0.0;
            for i in 0..n {
                r2 += (av[i] - self.values[j] * v[i]).norm_sqr();
            }
            worst = worst.max(r2.sqrt());
        }
        worst
    }
}

/// Real symmetric eigendecomposition with eigenvalues in ascending order and
/// orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SymmetricEig {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// Eigendecomposition of a dense real matrix.
///
/// With `symmetric` set the input must actually be symmetric (checked); the
/// result then has real eigenvalues in ascending order. Otherwise the
/// general path runs and eigenvalues appear in Schur order.
pub fn dense_eig(a: &DenseMatrix, symmetric: bool) -> Result<EigResult> {
    if symmetric {
        let se = symmetric_eig(a)?;
        let n = a.nrows();
        let values = se.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(se.vectors.get(i, j), 0.0)
        });
        Ok(EigResult { values, vectors })
    } else {
        complex_eig(&ComplexMatrix::from_real(a))
    }
}

/// Symmetric path: tridiagonalize, then implicit-shift QL.
pub fn symmetric_eig(a: &DenseMatrix) -> Result<SymmetricEig> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch("eig of non-square matrix".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let scale = a.max_abs();
    if !a.is_symmetric(1e-8 * scale.max(1.0)) {
        return Err(Error::InvalidArgument(
            "symmetric path requested for a non-symmetric matrix".into(),
        ));
    }

    // Work in a row-indexed copy for the classical in-place formulation.
    let mut z: Vec<Vec<f64>> = (0..n).map(|i| a.row_vec(i)).collect();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];

    // Householder reduction to tridiagonal form, accumulating the
    // transformation in z.
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut sc = 0.0;
            for k in 0..=l {
                sc += z[i][k].abs();
            }
            if sc == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..=l {
                    z[i][k] /= sc;
                    h += z[i][k] * z[i][k];
                }
                let mut f = z[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = sc * g;
                h -= f * g;
                z[i][l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    z[j][i] = z[i][j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j][k] * z[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += z[k][j] * z[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * z[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = z[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j][k] -= f * e[k] + g * z[i][k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i][k] * z[k][j];
                }
                for k in 0..i {
                    z[k][j] -= g * z[k][i];
                }
            }
        }
        d[i] = z[i][i];
        z[i][i] = 1.0;
        for j in 0..i {
            z[j][i] = 0.0;
            z[i][j] = 0.0;
        }
    }

    // Implicit-shift QL iteration on the tridiagonal (d, e).
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence(format!(
                    "QL iteration stalled at eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut().take(n) {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, j| z[i][order[j]]);
    Ok(SymmetricEig { values, vectors })
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` (with real `c`)
/// such that `G [x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let xn = x.norm();
    let yn = y.norm();
    if yn == 0.0 {
        return (1.0, C_ZERO);
    }
    if xn == 0.0 {
        return (0.0, C_ONE);
    }
    let r = xn.hypot(yn);
    let c = xn / r;
    let s = (x / xn) * y.conj() / r;
    (c, s)
}

/// Householder reduction of a square complex matrix to upper Hessenberg
/// form, returning `(H, Q)` with `A = Q H Q^H`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..(n - 2) {
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| h.get(i, k)).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            C_ONE
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- P H with P = I - 2 v v^H acting on rows k+1..n.
        for j in k..n {
            let mut dot = C_ZERO;
            for i in (k + 1)..n {
                dot += v[i - k - 1].conj() * h.get(i, j);
            }
            let two_dot = dot * 2.0;
            for i in (k + 1)..n {
                let val = h.get(i, j) - two_dot * v[i - k - 1];
                h.set(i, j, val);
            }
        }
        // H <- H P on columns k+1..n.
        for i in 0..n {
            let mut dot = C_ZERO;
            for j in (k + 1)..n {
                dot += h.get(i, j) * v[j - k - 1];
            }
            let two_dot = dot * 2.0;
            for j in (k + 1)..n {
                let val = h.get(i, j) - two_dot * v[j - k - 1].conj();
                h.set(i, j, val);
            }
        }
        // Q <- Q P.
        for i in 0..n {
            let mut dot = C_ZERO;
            for j in (k + 1)..n {
                dot += q.get(i, j) * v[j - k - 1];
            }
            let two_dot = dot * 2.0;
            for j in (k + 1)..n {
                let val = q.get(i, j) - two_dot * v[j - k - 1].conj();
                q.set(i, j, val);
            }
        }
    }
    // Clean entries below the first subdiagonal.
    for j in 0..n {
        for i in (j + 2)..n {
            h.set(i, j, C_ZERO);
        }
    }
    (h, q)
}

/// Wilkinson shift: the eigenvalue of the trailing 2x2 block closest to the
/// bottom-right entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h.get(hi - 1, hi - 1);
    let b = h.get(hi - 1, hi);
    let c = h.get(hi, hi - 1);
    let d = h.get(hi, hi);
    let tr = a + d;
    let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// In-place Schur decomposition of an upper Hessenberg matrix: on return `h`
/// is upper triangular and `q` has accumulated the similarity, so that the
/// original matrix equals `q h q^H`.
fn schur_in_place(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut local_iter = 0usize;
    let mut total_iter = 0usize;
    let max_total = 60 * n;
    loop {
        // Deflate converged trailing eigenvalues.
        while hi > 0 {
            let s = h.get(hi - 1, hi - 1).norm() + h.get(hi, hi).norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h.get(hi, hi - 1).norm() <= eps * s {
                h.set(hi, hi - 1, C_ZERO);
                hi -= 1;
                local_iter = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            return Ok(());
        }
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let s = h.get(lo - 1, lo - 1).norm() + h.get(lo, lo).norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h.get(lo, lo - 1).norm() <= eps * s {
                h.set(lo, lo - 1, C_ZERO);
                break;
            }
            lo -= 1;
        }
        total_iter += 1;
        local_iter += 1;
        if total_iter > max_total {
            return Err(Error::NoConvergence(
                "shifted QR exceeded its iteration budget".into(),
            ));
        }
        let shift = if local_iter % 12 == 0 {
            // Exceptional shift to break rare symmetric stalls.
            let t = h.get(hi, hi - 1).norm()
                + if hi >= 2 { h.get(hi - 1, hi - 2).norm() } else { 0.0 };
            Complex64::new(t, 0.0) + h.get(hi, hi)
        } else {
            wilkinson_shift(h, hi)
        };

        // Implicit single-shift bulge chase on rows lo..=hi.
        let mut x = h.get(lo, lo) - shift;
        let mut y = h.get(lo + 1, lo);
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let sc = s.conj();
            // Left rotation on rows k, k+1.
            let col_start = if k == lo { lo } else { k - 1 };
            for j in col_start..n {
                let hkj = h.get(k, j);
                let hk1j = h.get(k + 1, j);
                h.set(k, j, hkj * c + hk1j * s);
                h.set(k + 1, j, hk1j * c - hkj * sc);
            }
            // Right rotation on columns k, k+1.
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let hik = h.get(i, k);
                let hik1 = h.get(i, k + 1);
                h.set(i, k, hik * c + hik1 * sc);
                h.set(i, k + 1, hik1 * c - hik * s);
            }
            // Accumulate into Q.
            for i in 0..n {
                let qik = q.get(i, k);
                let qik1 = q.get(i, k + 1);
                q.set(i, k, qik * c + qik1 * sc);
                q.set(i, k + 1, qik1 * c - qik * s);
            }
            if k + 1 < hi {
                x = h.get(k + 1, k);
                y = h.get(k + 2, k);
            }
        }
    }
}

/// Eigendecomposition of a dense complex matrix via Schur form.
pub fn complex_eig(a: &ComplexMatrix) -> Result<EigResult> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch("eig of non-square matrix".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let (mut t, mut q) = hessenberg(a);
    schur_in_place(&mut t, &mut q)?;
    let values: Vec<Complex64> = (0..n).map(|i| t.get(i, i)).collect();

    // Back-substitute eigenvectors of the triangular factor, then rotate
    // back through Q. Near-equal diagonal entries get a guarded denominator,
    // which keeps the residual bounded even for defective input.
    let tnorm = t.frobenius_norm().max(f64::MIN_POSITIVE);
    let guard = f64::EPSILON * tnorm;
    let mut vectors = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut y = vec![C_ZERO; n];
        y[j] = C_ONE;
        for i in (0..j).rev() {
            let mut num = C_ZERO;
            for l in (i + 1)..=j {
                num += t.get(i, l) * y[l];
            }
            let mut den = t.get(i, i) - values[j];
            if den.norm() < guard {
                den = Complex64::new(guard, 0.0);
            }
            y[i] = -num / den;
            // Rescale to avoid overflow cascades from tiny denominators.
            let yn = y[i].norm();
            if yn > 1e120 {
                for item in y.iter_mut().take(j + 1).skip(i) {
                    *item /= yn;
                }
            }
        }
        let v = q.matvec(&y);
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            vectors.set(i, j, v[i] / vnorm);
        }
    }
    Ok(EigResult { values, vectors })
}
