//! Rational-function and truncated-Laurent-series arithmetic over ℂ on the
//! Riemann sphere: residues, vanishing orders, chart changes at ∞, and the
//! Schwarzian derivative.
//!
//! Coefficients are double-precision complex numbers. Zero tests are relative:
//! a coefficient counts as zero when its modulus is below [`EPS_ZERO`] times
//! the max coefficient modulus of the expression it belongs to.

mod laurent;
mod poly;
mod rational;
pub(crate) mod roots;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use laurent::LaurentExpansion;
pub use poly::Polynomial;
pub use rational::{field_ops, FieldOp, PowerMonomial, Rational};

/// Relative tolerance for treating a coefficient as zero.
pub const EPS_ZERO: f64 = 1e-9;

/// Tensor weight of a rational expression: a function, the coefficient of a
/// 1-form `f dz`, or the coefficient of a 2-form `f dz²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Function,
    OneForm,
    TwoForm,
}

impl Weight {
    pub fn value(self) -> u8 {
        match self {
            Weight::Function => 0,
            Weight::OneForm => 1,
            Weight::TwoForm => 2,
        }
    }

    pub fn from_value(v: u8) -> Option<Weight> {
        match v {
            0 => Some(Weight::Function),
            1 => Some(Weight::OneForm),
            2 => Some(Weight::TwoForm),
            _ => None,
        }
    }

    /// Weight of a product; `None` when it leaves {0, 1, 2}.
    pub fn mul(self, other: Weight) -> Option<Weight> {
        Weight::from_value(self.value() + other.value())
    }

    /// Weight of a quotient; `None` when it leaves {0, 1, 2}.
    pub fn div(self, other: Weight) -> Option<Weight> {
        self.value().checked_sub(other.value()).and_then(Weight::from_value)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A point of the Riemann sphere ℂ ∪ {∞}.
#[derive(Clone, Copy, Debug)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else {
                    write!(f, "{}{}{}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
                }
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("tensor weight mismatch: {lhs} vs {rhs} in {op}")]
    WeightMismatch { op: &'static str, lhs: u8, rhs: u8 },
    #[error("division by the identically zero function")]
    DivisionByZeroFunction,
    #[error("operation undefined for the identically zero function")]
    ZeroFunction,
    #[error("operation undefined for a constant function")]
    ConstantFunction,
}
