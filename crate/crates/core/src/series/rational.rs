//! Rational functions over ℂ with a tensor weight, reduced via approximate
//! common-root deflation.

use num_complex::Complex64;

use super::laurent::LaurentExpansion;
use super::poly::Polynomial;
use super::roots::roots_with_multiplicity;
use super::{SeriesError, SpherePoint, Weight, EPS_ZERO};

/// A reduced rational expression `num/den` with a tensor weight: a function
/// (weight 0), the coefficient of `dz` (weight 1), or of `dz²` (weight 2).
#[derive(Clone, Debug)]
pub struct Rational {
    num: Polynomial,
    den: Polynomial,
    weight: Weight,
}

/// The four field operations, for callers that dispatch dynamically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Dispatching wrapper over the checked arithmetic on [`Rational`].
pub fn field_ops(a: &Rational, b: &Rational, op: FieldOp) -> Result<Rational, SeriesError> {
    match op {
        FieldOp::Add => a.try_add(b),
        FieldOp::Sub => a.try_sub(b),
        FieldOp::Mul => a.try_mul(b),
        FieldOp::Div => a.try_div(b),
    }
}

impl Rational {
    pub fn new(num: Polynomial, den: Polynomial, weight: Weight) -> Result<Self, SeriesError> {
        if den.is_zero() {
            return Err(SeriesError::DivisionByZeroFunction);
        }
        Ok(reduce(num, den, weight))
    }

    pub fn from_poly(p: Polynomial, weight: Weight) -> Self {
        Rational { num: p, den: Polynomial::one(), weight }
    }

    pub fn constant(c: Complex64) -> Self {
        Rational::from_poly(Polynomial::constant(c), Weight::Function)
    }

    pub fn zero(weight: Weight) -> Self {
        Rational { num: Polynomial::zero(), den: Polynomial::one(), weight }
    }

    /// The coordinate function z (weight 0).
    pub fn variable() -> Self {
        Rational::from_poly(Polynomial::variable(), Weight::Function)
    }

    /// `z^k` for any integer k, as a weight-0 function.
    pub fn monomial_pow(k: i64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        if k >= 0 {
            Rational::from_poly(Polynomial::monomial(k as usize, one), Weight::Function)
        } else {
            Rational {
                num: Polynomial::one(),
                den: Polynomial::monomial((-k) as usize, one),
                weight: Weight::Function,
            }
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Same num/den with a different weight tag (chart rules are the caller's
    /// responsibility).
    pub fn with_weight(&self, weight: Weight) -> Self {
        Rational { num: self.num.clone(), den: self.den.clone(), weight }
    }

    pub fn try_add(&self, rhs: &Rational) -> Result<Rational, SeriesError> {
        if self.weight != rhs.weight {
            return Err(SeriesError::WeightMismatch {
                op: "add",
                lhs: self.weight.value(),
                rhs: rhs.weight.value(),
            });
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Rational::new(num, &self.den * &rhs.den, self.weight)
    }

    pub fn try_sub(&self, rhs: &Rational) -> Result<Rational, SeriesError> {
        if self.weight != rhs.weight {
            return Err(SeriesError::WeightMismatch {
                op: "sub",
                lhs: self.weight.value(),
                rhs: rhs.weight.value(),
            });
        }
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        Rational::new(num, &self.den * &rhs.den, self.weight)
    }

    pub fn try_mul(&self, rhs: &Rational) -> Result<Rational, SeriesError> {
        let weight = self.weight.mul(rhs.weight).ok_or(SeriesError::WeightMismatch {
            op: "mul",
            lhs: self.weight.value(),
            rhs: rhs.weight.value(),
        })?;
        Rational::new(&self.num * &rhs.num, &self.den * &rhs.den, weight)
    }

    pub fn try_div(&self, rhs: &Rational) -> Result<Rational, SeriesError> {
        if rhs.is_zero() {
            return Err(SeriesError::DivisionByZeroFunction);
        }
        let weight = self.weight.div(rhs.weight).ok_or(SeriesError::WeightMismatch {
            op: "div",
            lhs: self.weight.value(),
            rhs: rhs.weight.value(),
        })?;
        Rational::new(&self.num * &rhs.den, &self.den * &rhs.num, weight)
    }

    pub fn neg(&self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone(), weight: self.weight }
    }

    pub fn scale(&self, s: Complex64) -> Rational {
        Rational { num: self.num.scale(s), den: self.den.clone(), weight: self.weight }
    }

    /// d/dz of a function, promoted to a 1-form coefficient.
    pub fn derivative(&self) -> Result<Rational, SeriesError> {
        if self.weight != Weight::Function {
            return Err(SeriesError::WeightMismatch {
                op: "derivative",
                lhs: self.weight.value(),
                rhs: 0,
            });
        }
        Ok(self.deriv_raw().with_weight(Weight::OneForm))
    }

    /// Coefficientwise d/dz without touching the weight tag.
    pub(crate) fn deriv_raw(&self) -> Rational {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        reduce(num, &self.den * &self.den, self.weight)
    }

    /// Schwarzian derivative `S(f) = (f″/f′)′ − ½(f″/f′)²` as a 2-form
    /// coefficient.
    pub fn schwarzian(&self) -> Result<Rational, SeriesError> {
        if self.weight != Weight::Function {
            return Err(SeriesError::WeightMismatch {
                op: "schwarzian",
                lhs: self.weight.value(),
                rhs: 0,
            });
        }
        let fp = self.deriv_raw();
        if fp.is_zero() {
            return Err(SeriesError::ConstantFunction);
        }
        let log_deriv = {
            let fpp = fp.deriv_raw();
            reduce(&fpp.num * &fp.den, &fpp.den * &fp.num, Weight::Function)
        };
        let ld_sq = reduce(&log_deriv.num * &log_deriv.num, &log_deriv.den * &log_deriv.den, Weight::Function);
        let diff_num = &(&log_deriv.deriv_raw().num * &ld_sq.den).scale(Complex64::new(2.0, 0.0))
            - &(&ld_sq.num * &log_deriv.deriv_raw().den);
        let s = reduce(
            diff_num,
            (&log_deriv.deriv_raw().den * &ld_sq.den).scale(Complex64::new(2.0, 0.0)),
            Weight::TwoForm,
        );
        Ok(s)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Pull back along z = u + a (domain translation to a local coordinate).
    pub fn shifted(&self, a: Complex64) -> Rational {
        Rational {
            num: self.num.taylor_shift(a),
            den: self.den.taylor_shift(a),
            weight: self.weight,
        }
    }

    /// Pull back along z = 1/w, including the chart factor for the weight:
    /// functions transform as f(1/w), 1-forms pick up −1/w², 2-forms 1/w⁴.
    pub fn transform_infinity(&self) -> Rational {
        let a = self.num.degree().unwrap_or(0) as i64;
        let b = self.den.degree().unwrap_or(0) as i64;
        let k = self.weight.value() as i64;
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        if self.weight == Weight::OneForm {
            num = num.scale(Complex64::new(-1.0, 0.0));
        }
        // Net power of w: w^(b−a) from the reversal, w^(−2k) from the chart factor.
        let e = b - a - 2 * k;
        let one = Complex64::new(1.0, 0.0);
        if e >= 0 {
            num = &num * &Polynomial::monomial(e as usize, one);
        } else {
            den = &den * &Polynomial::monomial((-e) as usize, one);
        }
        reduce(num, den, self.weight)
    }

    /// Pull back to the local chart at `p`: u = z − p at finite points, the
    /// w = 1/z chart (with weight factors) at ∞.
    pub fn localized(&self, p: SpherePoint) -> Rational {
        match p {
            SpherePoint::Finite(a) => self.shifted(a),
            SpherePoint::Infinity => self.transform_infinity(),
        }
    }

    /// Vanishing order at `p` in the local chart, negative for poles;
    /// weight-adjusted at ∞.
    pub fn order_at(&self, p: SpherePoint) -> Result<i64, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroFunction);
        }
        let local = self.localized(p);
        let sn = local.num.order_at_zero().expect("nonzero numerator") as i64;
        let sd = local.den.order_at_zero().expect("nonzero denominator") as i64;
        Ok(sn - sd)
    }

    /// Laurent coefficients over `window = (n_min, n_max)` in the local chart
    /// at `p`. The zero function yields all-zero coefficients.
    pub fn expand_at(&self, p: SpherePoint, window: (i64, i64)) -> LaurentExpansion {
        let (n_min, n_max) = window;
        assert!(n_min <= n_max, "empty Laurent window");
        let len = (n_max - n_min + 1) as usize;
        if self.is_zero() {
            return LaurentExpansion::new(p, n_min, vec![Complex64::new(0.0, 0.0); len], self.weight, false);
        }
        let local = self.localized(p);
        let sn = local.num.order_at_zero().unwrap();
        let sd = local.den.order_at_zero().unwrap();
        let ord = sn as i64 - sd as i64;

        // Strip the pure powers of u so both parts are units at 0.
        let nhat = strip_low_zeros(&local.num, sn);
        let dhat = strip_low_zeros(&local.den, sd);

        // Power-series long division of n̂ by d̂ out to the window top.
        let terms = if n_max >= ord { (n_max - ord + 1) as usize } else { 0 };
        let mut series = vec![Complex64::new(0.0, 0.0); terms];
        let d0 = dhat.coeff(0);
        for i in 0..terms {
            let mut acc = nhat.coeff(i);
            for j in 0..i {
                acc -= series[j] * dhat.coeff(i - j);
            }
            series[i] = acc / d0;
        }

        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (idx, n) in (n_min..=n_max).enumerate() {
            if n >= ord {
                let k = (n - ord) as usize;
                if k < terms {
                    coeffs[idx] = series[k];
                }
            }
        }

        // The expansion terminates iff d̂ divides n̂ exactly.
        let truncated = {
            let (q, r) = nhat.divrem(&dhat);
            let exact = r.is_zero()
                || r.max_coeff_norm() <= EPS_ZERO * nhat.max_coeff_norm().max(q.max_coeff_norm() * dhat.max_coeff_norm());
            if exact {
                let top = q.degree().unwrap_or(0) as i64 + ord;
                top > n_max
            } else {
                true
            }
        };

        LaurentExpansion::new(p, n_min, coeffs, self.weight, truncated)
    }

    /// Residue of a 1-form at `p`: the c₋₁ coefficient in the local chart.
    pub fn residue_at(&self, p: SpherePoint) -> Result<Complex64, SeriesError> {
        if self.weight != Weight::OneForm {
            return Err(SeriesError::WeightMismatch {
                op: "residue",
                lhs: self.weight.value(),
                rhs: 1,
            });
        }
        Ok(self.expand_at(p, (-1, -1)).coeff(-1))
    }

    /// Finite poles as (location, order) pairs.
    pub fn finite_poles(&self) -> Vec<(Complex64, usize)> {
        if self.is_zero() || self.den.is_constant() {
            return Vec::new();
        }
        roots_with_multiplicity(&self.den)
    }

    /// Whether the expression (with its chart factor) has a pole at ∞.
    pub fn has_pole_at_infinity(&self) -> bool {
        !self.is_zero() && self.order_at(SpherePoint::Infinity).map_or(false, |o| o < 0)
    }

    /// Max coefficient modulus across numerator and denominator; the scale
    /// for relative zero tests against this expression.
    pub fn coeff_scale(&self) -> f64 {
        self.num.max_coeff_norm().max(self.den.max_coeff_norm())
    }
}

fn strip_low_zeros(p: &Polynomial, count: usize) -> Polynomial {
    Polynomial::new(p.coeffs()[count..].to_vec())
}

/// Cancel common roots of num and den (approximate GCD by common-root
/// deflation) and normalize the denominator monic.
fn reduce(num: Polynomial, den: Polynomial, weight: Weight) -> Rational {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return Rational { num: Polynomial::zero(), den: Polynomial::one(), weight };
    }
    let mut num = num;
    let mut den = den;
    if !den.is_constant() {
        for (root, mult) in roots_with_multiplicity(&den) {
            for _ in 0..mult {
                if num.is_constant() {
                    break;
                }
                let scale = num.eval_scale(root).max(f64::MIN_POSITIVE);
                if num.eval(root).norm() <= EPS_ZERO * scale {
                    num = num.deflate(root);
                    den = den.deflate(root);
                } else {
                    break;
                }
            }
        }
    }
    let lead = den.leading().expect("nonzero denominator");
    Rational {
        num: num.scale(Complex64::new(1.0, 0.0) / lead),
        den: den.scale(Complex64::new(1.0, 0.0) / lead),
        weight,
    }
}

/// The secondary Gauss map family z^μ for real μ > 0, kept symbolic so the
/// core algebra stays rational. It is usable exactly where closed forms
/// exist: its Schwarzian and the products g·ω, g²·ω entering α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerMonomial {
    pub mu: f64,
}

impl PowerMonomial {
    pub fn new(mu: f64) -> Self {
        PowerMonomial { mu }
    }

    /// Whether μ is (numerically) an integer, in which case z^μ is rational.
    pub fn integer_exponent(&self) -> Option<i64> {
        let r = self.mu.round();
        if (self.mu - r).abs() <= 1e-9 {
            Some(r as i64)
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.integer_exponent().map(Rational::monomial_pow)
    }

    /// Closed form S(z^μ) = (1−μ²)/(2z²), weight 2.
    pub fn schwarzian(&self) -> Rational {
        let c = Complex64::new((1.0 - self.mu * self.mu) / 2.0, 0.0);
        Rational {
            num: Polynomial::constant(c),
            den: Polynomial::monomial(2, Complex64::new(1.0, 0.0)),
            weight: Weight::TwoForm,
        }
    }

    /// Principal-branch value z^μ (sector arg z ∈ (−π, π)).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        z.powf(self.mu)
    }
}
