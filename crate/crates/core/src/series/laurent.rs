//! Windowed Laurent expansions in a local chart.

use num_complex::Complex64;

use super::{SpherePoint, Weight};

/// Laurent coefficients `c_n` for `n ∈ [n_min, n_max]` of an expression in
/// the local coordinate at `center` (z − p at finite points, w = 1/z at ∞,
/// with form factors applied). `truncated` records whether the expanded
/// expression has nonzero terms above `n_max`.
#[derive(Clone, Debug)]
pub struct LaurentExpansion {
    center: SpherePoint,
    n_min: i64,
    coeffs: Vec<Complex64>,
    weight: Weight,
    truncated: bool,
}

impl LaurentExpansion {
    pub fn new(
        center: SpherePoint,
        n_min: i64,
        coeffs: Vec<Complex64>,
        weight: Weight,
        truncated: bool,
    ) -> Self {
        assert!(!coeffs.is_empty(), "empty Laurent window");
        LaurentExpansion { center, n_min, coeffs, weight, truncated }
    }

    pub fn center(&self) -> SpherePoint {
        self.center
    }

    pub fn window(&self) -> (i64, i64) {
        (self.n_min, self.n_min + self.coeffs.len() as i64 - 1)
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Coefficient of the n-th power; zero outside the window.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n - self.n_min;
        if idx >= 0 && (idx as usize) < self.coeffs.len() {
            self.coeffs[idx as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Max coefficient modulus over the window; the scale for relative zero
    /// tests on these coefficients.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// First windowed index whose coefficient is nonzero relative to the
    /// window scale.
    pub fn leading_index(&self) -> Option<i64> {
        let scale = self.scale();
        if scale == 0.0 {
            return None;
        }
        self.coeffs
            .iter()
            .position(|c| c.norm() > super::EPS_ZERO * scale)
            .map(|i| self.n_min + i as i64)
    }
}
