//! Dense complex polynomials in one variable, ascending coefficient order.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::EPS_ZERO;

/// A polynomial over ℂ. The zero polynomial has an empty coefficient vector;
/// otherwise the leading coefficient is nonzero relative to the coefficient
/// scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c · z^degree`.
    pub fn monomial(degree: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = c;
        Polynomial::new(coeffs)
    }

    /// The identity function z.
    pub fn variable() -> Self {
        Polynomial::monomial(1, Complex64::new(1.0, 0.0))
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    fn trim(&mut self) {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= EPS_ZERO * scale {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.coeffs.clear();
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ |c_i| |z|^i`, the natural scale for vanishing tests at `z`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Coefficients of `p(u + a)` (chart shift to a local coordinate at `a`).
    pub fn taylor_shift(&self, a: Complex64) -> Polynomial {
        if a.norm() == 0.0 {
            return self.clone();
        }
        let mut out: Vec<Complex64> = Vec::with_capacity(self.coeffs.len());
        for &c in self.coeffs.iter().rev() {
            // out := out·(u + a) + c
            let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
            for (j, &q) in out.iter().enumerate() {
                next[j + 1] += q;
                next[j] += q * a;
            }
            if next.is_empty() {
                next.push(c);
            } else {
                next[0] += c;
            }
            out = next;
        }
        Polynomial::new(out)
    }

    /// Coefficient reversal over the polynomial's own degree:
    /// `rev(p)(w) = w^deg · p(1/w)`.
    pub fn reversed(&self) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Polynomial::new(coeffs)
    }

    /// Synthetic division by `(z − root)`; the remainder is dropped.
    pub fn deflate(&self, root: Complex64) -> Polynomial {
        let n = self.coeffs.len();
        if n <= 1 {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = self.coeffs[n - 1];
        for i in (0..n - 1).rev() {
            out[i] = carry;
            carry = self.coeffs[i] + carry * root;
        }
        Polynomial::new(out)
    }

    /// Long division: `self = q·den + r` with `deg r < deg den`.
    /// Panics on a zero divisor (internal use only).
    pub fn divrem(&self, den: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let dd = den.degree().unwrap();
        if self.degree().map_or(true, |dn| dn < dd) {
            return (Polynomial::zero(), self.clone());
        }
        let dn = self.degree().unwrap();
        let lead = den.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for j in 0..=dd {
                rem[k + j] -= q * den.coeffs[j];
            }
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Number of leading (low-order) coefficients that vanish relative to the
    /// coefficient scale: the vanishing order at 0. Returns `None` for zero.
    pub fn order_at_zero(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let scale = self.max_coeff_norm();
        self.coeffs.iter().position(|c| c.norm() > EPS_ZERO * scale)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Polynomial::new(out)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Polynomial::new(out)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn trim_drops_relative_dust() {
        let p = Polynomial::new(vec![c(1.0), c(2.0), Complex64::new(1e-13, 0.0)]);
        assert_eq!(p.degree(), Some(1));
    }

    #[test]
    fn divrem_reconstructs() {
        let p = Polynomial::from_real(&[1.0, -3.0, 0.0, 2.0, 1.0]);
        let d = Polynomial::from_real(&[2.0, 1.0, 1.0]);
        let (q, r) = p.divrem(&d);
        let back = &(&q * &d) + &r;
        for k in 0..5 {
            assert!((back.coeff(k) - p.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = Polynomial::from_real(&[1.0, -2.0, 3.0, 0.5]);
        let a = Complex64::new(0.7, -0.3);
        let shifted = p.taylor_shift(a);
        let u = Complex64::new(0.11, 0.23);
        assert!((shifted.eval(u) - p.eval(u + a)).norm() < 1e-12);
    }

    #[test]
    fn deflate_inverts_multiplication_by_root_factor() {
        let r = Complex64::new(1.5, -0.5);
        let factor = Polynomial::new(vec![-r, c(1.0)]);
        let q = Polynomial::from_real(&[2.0, 0.0, 1.0]);
        let p = &q * &factor;
        let back = p.deflate(r);
        for k in 0..3 {
            assert!((back.coeff(k) - q.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn order_at_zero() {
        let p = Polynomial::from_real(&[0.0, 0.0, 3.0, 1.0]);
        assert_eq!(p.order_at_zero(), Some(2));
        assert_eq!(Polynomial::zero().order_at_zero(), None);
    }
}
