//! Minimal scalar abstraction shared by the real and complex code paths.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Field element for vectors and matrices: either `f64` or [`Complex64`].
///
/// Inner products use the conjugate-linear convention
/// `dot(x, y) = sum_i conj(x_i) * y_i`, which reduces to the ordinary dot
/// product for real scalars.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const ZERO: Self;
    const ONE: Self;

    fn conj(self) -> Self;
    /// Real part.
    fn re(self) -> f64;
    /// Modulus.
    fn abs(self) -> f64;
    fn from_f64(x: f64) -> Self;
    /// Multiply by a real scalar.
    fn scale(self, s: f64) -> Self;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);

    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// Conjugate-linear inner product `sum_i conj(x_i) * y_i`.
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    assert_eq!(x.len(), y.len());
    let mut acc = T::ZERO;
    for (a, b) in x.iter().zip(y) {
        acc += a.conj() * *b;
    }
    acc
}

/// Euclidean norm.
pub fn norm2<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|a| a.abs() * a.abs()).sum::<f64>().sqrt()
}

/// `y += alpha * x`.
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_dot_conjugates_left_argument() {
        let x = [Complex64::new(0.0, 1.0)];
        let y = [Complex64::new(0.0, 1.0)];
        let d = dot(&x, &y);
        assert_eq!(d, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn real_norm_matches_hand_value() {
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
    }
}
