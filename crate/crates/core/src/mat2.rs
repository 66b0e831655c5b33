//! 2×2 complex matrices.
//!
//! Everything in the flux pipeline lives in sl(2,C) or SL(2,C), so a small
//! dedicated type beats pulling in a general linear-algebra crate.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2::new(z, z, z, z)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2::new(a, z, z, d)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Inverse; `None` when the determinant is numerically zero.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.norm() < 1e-300 {
            return None;
        }
        Some(Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Entrywise max modulus.
    pub fn max_norm(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    pub fn approx_eq(&self, other: &Mat2, tol: f64) -> bool {
        (*self - *other).max_norm() <= tol
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match (row, col) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            (1, 1) => self.d,
            _ => panic!("Mat2 index out of range: ({row}, {col})"),
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(-1.0, 1.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv).approx_eq(&Mat2::identity(), 1e-14));
        assert!((inv * m).approx_eq(&Mat2::identity(), 1e-14));
    }

    #[test]
    fn adjoint_of_product() {
        let m = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(-1.0, 1.0));
        let n = Mat2::new(c(0.0, 1.0), c(2.0, 0.0), c(1.0, 1.0), c(0.0, -2.0));
        assert!((m * n).adjoint().approx_eq(&(n.adjoint() * m.adjoint()), 1e-14));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Mat2::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0));
        assert!(m.inverse().is_none());
    }
}
