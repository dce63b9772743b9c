//! Fast Walsh-Hadamard transform, orthonormal normalization.

use crate::error::{Error, Result};

/// In-place orthonormal Walsh-Hadamard transform of a length-`2^m` slice.
///
/// Uses the natural (Sylvester) ordering: the transform matrix is
/// `H_{2n} = [[H_n, H_n], [H_n, -H_n]] / sqrt(2)`, so applying the transform
/// twice is the identity up to roundoff.
pub fn fwht_in_place(x: &mut [f64]) -> Result<()> {
    let n = x.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "walsh-hadamard transform needs a power-of-2 length, got {n}"
        )));
    }
    let mut h = 1;
    while h < n {
        let mut base = 0;
        while base < n {
            for i in base..base + h {
                let a = x[i];
                let b = x[i + h];
                x[i] = a + b;
                x[i + h] = a - b;
            }
            base += 2 * h;
        }
        h *= 2;
    }
    let s = 1.0 / (n as f64).sqrt();
    for v in x.iter_mut() {
        *v *= s;
    }
    Ok(())
}

/// Orthonormal Walsh-Hadamard transform of a vector.
pub fn fwht(x: &[f64]) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    fwht_in_place(&mut y)?;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;
    use crate::rng::{normal_vec, root_rng};

    #[test]
    fn smallest_case_splits_mass_evenly() {
        let y = fwht(&[1.0, 0.0]).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((y[0] - inv_sqrt2).abs() < 1e-15);
        assert!((y[1] - inv_sqrt2).abs() < 1e-15);
    }

    #[test]
    fn applying_twice_returns_the_input() {
        let mut rng = root_rng(7);
        let x = normal_vec(&mut rng, 256);
        let y = fwht(&fwht(&x).unwrap()).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn order_four_matches_the_dense_hadamard_matrix() {
        // Sylvester-ordered Hadamard entry: (-1)^{popcount(i & j)} / sqrt(n).
        let h = DenseMatrix::from_fn(4, 4, |i, j| {
            let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            sign / 2.0
        });
        let x = [0.3, -1.2, 0.7, 2.5];
        let dense = h.matvec(&x);
        let fast = fwht(&x).unwrap();
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn transform_preserves_the_two_norm() {
        let mut rng = root_rng(11);
        let x = normal_vec(&mut rng, 128);
        let y = fwht(&x).unwrap();
        let nx: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ny: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((nx - ny).abs() <= 1e-14 * nx);
    }

    #[test]
    fn non_power_of_two_length_is_rejected() {
        assert!(fwht(&[1.0, 2.0, 3.0]).is_err());
        assert!(fwht(&[]).is_err());
    }
}
