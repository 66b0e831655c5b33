//! The CMC-1 surface data model: the hyperbolic Gauss map G, the secondary
//! Gauss map g, the Hopf differential Q and the declared ends, together with
//! the dual 1-form ω# = −Q/dG and the sl(2,C)-valued connection forms
//!
//! ```text
//!   α  = ((g, −g²), (1, −g))·ω      (primal, ω = Q/dg)
//!   α# = ((G, −G²), (1, −G))·ω#     (dual,  ω# = −Q/dG)
//! ```
//!
//! Both are trace-free with identically vanishing determinant form.

use num_complex::Complex64;
use thiserror::Error;

use crate::mat2::Mat2;
use crate::series::{
    PowerMonomial, Rational, SeriesError, SpherePoint, Weight, EPS_ZERO,
};

#[derive(Debug, Error)]
pub enum CmcError {
    #[error("the hyperbolic Gauss map must be nonconstant")]
    ConstantGaussMap,
    #[error("operation requires a nonconstant function")]
    ConstantFunction,
    #[error("entry z^{exponent}·(rational) is not single-valued")]
    MultivaluedEntry { exponent: f64 },
    #[error("surface data needs a Hopf differential or a secondary Gauss map to derive one")]
    MissingHopfData,
    #[error("{field} must have tensor weight {expected}")]
    WrongWeight { field: &'static str, expected: u8 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A Gauss map: either an honest rational function or the power family z^μ.
#[derive(Clone, Debug)]
pub enum GaussMap {
    Rational(Rational),
    Power(PowerMonomial),
}

impl GaussMap {
    pub fn rational(r: Rational) -> Self {
        GaussMap::Rational(r)
    }

    pub fn power(mu: f64) -> Self {
        GaussMap::Power(PowerMonomial::new(mu))
    }

    /// Exact rational representation, when one exists.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            GaussMap::Rational(r) => Some(r.clone()),
            GaussMap::Power(p) => p.as_rational(),
        }
    }

    pub fn schwarzian(&self) -> Result<Rational, CmcError> {
        match self {
            GaussMap::Rational(r) => {
                if r.is_constant() {
                    return Err(CmcError::ConstantFunction);
                }
                Ok(r.schwarzian()?)
            }
            GaussMap::Power(p) => Ok(p.schwarzian()),
        }
    }

    /// Principal-branch pointwise value.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            GaussMap::Rational(r) => r.eval(z),
            GaussMap::Power(p) => p.eval(z),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            GaussMap::Rational(r) => r.is_constant(),
            GaussMap::Power(p) => p.mu == 0.0,
        }
    }
}

/// `z^exponent · base`, the shape of every entry of the primal connection α
/// when the secondary Gauss map is a power monomial. The exponent is reduced
/// towards 0 by folding its integer part into the rational base; the entry is
/// single-valued exactly when the residual exponent is (numerically) zero.
#[derive(Clone, Debug)]
pub struct PowerForm {
    exponent: f64,
    base: Rational,
}

impl PowerForm {
    pub fn new(exponent: f64, base: Rational) -> Self {
        if base.is_zero() {
            return PowerForm { exponent: 0.0, base };
        }
        let k = exponent.round();
        let frac = exponent - k;
        let base = if k == 0.0 {
            base
        } else {
            let shift = Rational::monomial_pow(k as i64);
            base.try_mul(&shift).expect("weight-0 monomial multiplication")
        };
        PowerForm { exponent: frac, base }
    }

    pub fn rational(base: Rational) -> Self {
        PowerForm { exponent: 0.0, base }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn weight(&self) -> Weight {
        self.base.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn is_single_valued(&self) -> bool {
        self.exponent.abs() <= 1e-9
    }

    /// The rational value of a single-valued entry.
    pub fn as_rational(&self) -> Result<Rational, CmcError> {
        if self.is_single_valued() {
            Ok(self.base.clone())
        } else {
            Err(CmcError::MultivaluedEntry { exponent: self.exponent })
        }
    }

    pub fn residue_at(&self, p: SpherePoint) -> Result<Complex64, CmcError> {
        Ok(self.as_rational()?.residue_at(p)?)
    }

    /// Principal-branch pointwise value (sector arg z ∈ (−π, π)).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.exponent == 0.0 {
            self.base.eval(z)
        } else {
            z.powf(self.exponent) * self.base.eval(z)
        }
    }

    pub fn scale(&self, s: Complex64) -> PowerForm {
        PowerForm { exponent: self.exponent, base: self.base.scale(s) }
    }

    fn shifted_exponent(&self, delta: f64) -> PowerForm {
        PowerForm::new(self.exponent + delta, self.base.clone())
    }
}

/// A 2×2 matrix of rational 1-form coefficients, trace-free with identically
/// zero determinant form (the null condition).
#[derive(Clone, Debug)]
pub struct SL2CForm {
    entries: [[Rational; 2]; 2],
}

impl SL2CForm {
    /// ((m, −m²), (1, −m))·ω for a rational map m and rational 1-form ω.
    fn from_map_and_form(map: &Rational, omega: &Rational) -> Result<Self, CmcError> {
        let m_omega = map.try_mul(omega)?;
        let m2_omega = map.try_mul(&m_omega)?;
        Ok(SL2CForm {
            entries: [
                [m_omega.clone(), m2_omega.neg()],
                [omega.clone(), m_omega.neg()],
            ],
        })
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn eval(&self, z: Complex64) -> Mat2 {
        Mat2::new(
            self.entries[0][0].eval(z),
            self.entries[0][1].eval(z),
            self.entries[1][0].eval(z),
            self.entries[1][1].eval(z),
        )
    }

    /// Entrywise residue at `p`.
    pub fn residue_matrix(&self, p: SpherePoint) -> Result<Mat2, CmcError> {
        Ok(Mat2::new(
            self.entries[0][0].residue_at(p)?,
            self.entries[0][1].residue_at(p)?,
            self.entries[1][0].residue_at(p)?,
            self.entries[1][1].residue_at(p)?,
        ))
    }

    /// All poles of all four entries: finite ones deduplicated, plus ∞ when
    /// some entry's form has a pole there.
    pub fn poles(&self) -> Vec<SpherePoint> {
        let mut finite: Vec<Complex64> = Vec::new();
        let mut at_infinity = false;
        for row in &self.entries {
            for entry in row {
                for (z, _) in entry.finite_poles() {
                    if !finite.iter().any(|w| (w - z).norm() <= 1e-6 * (1.0 + z.norm())) {
                        finite.push(z);
                    }
                }
                if entry.has_pole_at_infinity() {
                    at_infinity = true;
                }
            }
        }
        let mut out: Vec<SpherePoint> = finite.into_iter().map(SpherePoint::Finite).collect();
        if at_infinity {
            out.push(SpherePoint::Infinity);
        }
        out
    }

    /// Numerator-level check that the determinant form vanishes identically.
    pub fn det_vanishes_identically(&self) -> bool {
        let ad = self.entries[0][0].try_mul(&self.entries[1][1]);
        let bc = self.entries[0][1].try_mul(&self.entries[1][0]);
        let (ad, bc) = match (ad, bc) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return false,
        };
        let cross1 = ad.num() * bc.den();
        let cross2 = bc.num() * ad.den();
        let diff = &cross1 - &cross2;
        let scale = cross1.max_coeff_norm().max(cross2.max_coeff_norm());
        scale == 0.0 || diff.max_coeff_norm() <= EPS_ZERO * scale
    }

    /// The trace form; identically zero by construction.
    pub fn trace_form(&self) -> Rational {
        self.entries[0][0]
            .try_add(&self.entries[1][1])
            .expect("diagonal entries share weight 1")
    }
}

/// The primal connection α = ((g, −g²), (1, −g))·ω, entrywise of the shape
/// z^σ·(rational): exact when g is rational, sectored when g = z^μ.
#[derive(Clone, Debug)]
pub struct Alpha {
    entries: [[PowerForm; 2]; 2],
}

impl Alpha {
    pub fn entry(&self, row: usize, col: usize) -> &PowerForm {
        &self.entries[row][col]
    }

    /// Exact rational matrix form; errors with the offending entry's exponent
    /// when some entry is multivalued.
    pub fn as_rational_form(&self) -> Result<SL2CForm, CmcError> {
        Ok(SL2CForm {
            entries: [
                [
                    self.entries[0][0].as_rational()?,
                    self.entries[0][1].as_rational()?,
                ],
                [
                    self.entries[1][0].as_rational()?,
                    self.entries[1][1].as_rational()?,
                ],
            ],
        })
    }

    /// Principal-branch pointwise value.
    pub fn eval(&self, z: Complex64) -> Mat2 {
        Mat2::new(
            self.entries[0][0].eval(z),
            self.entries[0][1].eval(z),
            self.entries[1][0].eval(z),
            self.entries[1][1].eval(z),
        )
    }
}

/// ω# := −Q/dG, the 1-form of the dual Weierstrass data (G, ω#).
pub fn dual_omega(hopf: &Rational, gauss: &Rational) -> Result<Rational, CmcError> {
    if gauss.is_constant() {
        return Err(CmcError::ConstantGaussMap);
    }
    if hopf.weight() != Weight::TwoForm {
        return Err(CmcError::WrongWeight { field: "Q", expected: 2 });
    }
    let dg = gauss.derivative()?;
    Ok(hopf.neg().try_div(&dg)?)
}

/// α# := ((G, −G²), (1, −G))·ω#.
pub fn alpha_sharp(gauss: &Rational, omega_sharp: &Rational) -> Result<SL2CForm, CmcError> {
    if omega_sharp.weight() != Weight::OneForm {
        return Err(CmcError::WrongWeight { field: "omega_sharp", expected: 1 });
    }
    SL2CForm::from_map_and_form(gauss, omega_sharp)
}

/// ω := Q/dg, the primal Weierstrass 1-form. For g = z^μ the result carries
/// the branch factor z^{1−μ} in its exponent.
pub fn primal_omega(hopf: &Rational, g: &GaussMap) -> Result<PowerForm, CmcError> {
    if hopf.weight() != Weight::TwoForm {
        return Err(CmcError::WrongWeight { field: "Q", expected: 2 });
    }
    match g {
        GaussMap::Rational(r) => {
            if r.is_constant() {
                return Err(CmcError::ConstantFunction);
            }
            let dg = r.derivative()?;
            Ok(PowerForm::rational(hopf.try_div(&dg)?))
        }
        GaussMap::Power(p) => {
            if p.mu == 0.0 {
                return Err(CmcError::ConstantFunction);
            }
            // dg = μ z^{μ−1} dz, so ω = (Q/(μ z))·z^{2−μ} as a 1-form.
            let z_form = Rational::variable().with_weight(Weight::OneForm);
            let base = hopf
                .try_div(&z_form)?
                .scale(Complex64::new(1.0 / p.mu, 0.0));
            Ok(PowerForm::new(2.0 - p.mu, base))
        }
    }
}

/// α := ((g, −g²), (1, −g))·ω.
pub fn alpha(g: &GaussMap, omega: &PowerForm) -> Result<Alpha, CmcError> {
    if omega.weight() != Weight::OneForm {
        return Err(CmcError::WrongWeight { field: "omega", expected: 1 });
    }
    let minus_one = Complex64::new(-1.0, 0.0);
    match g {
        GaussMap::Rational(r) => {
            let g_omega = PowerForm::new(omega.exponent(), r.try_mul(omega.base())?);
            let g2_omega =
                PowerForm::new(omega.exponent(), r.try_mul(r)?.try_mul(omega.base())?);
            Ok(Alpha {
                entries: [
                    [g_omega.clone(), g2_omega.scale(minus_one)],
                    [omega.clone(), g_omega.scale(minus_one)],
                ],
            })
        }
        GaussMap::Power(p) => {
            let g_omega = omega.shifted_exponent(p.mu);
            let g2_omega = omega.shifted_exponent(2.0 * p.mu);
            Ok(Alpha {
                entries: [
                    [g_omega.clone(), g2_omega.scale(minus_one)],
                    [omega.clone(), g_omega.scale(minus_one)],
                ],
            })
        }
    }
}

/// Q := ½(S(g) − S(G)).
pub fn hopf_from_maps(g: &GaussMap, gauss: &Rational) -> Result<Rational, CmcError> {
    if gauss.is_constant() {
        return Err(CmcError::ConstantFunction);
    }
    let sg = g.schwarzian()?;
    let sg_big = gauss.schwarzian()?;
    Ok(sg.try_sub(&sg_big)?.scale(Complex64::new(0.5, 0.0)))
}

/// A punctured-sphere CMC-1 surface description.
#[derive(Clone, Debug)]
pub struct SurfaceData {
    pub label: String,
    /// Hyperbolic Gauss map G (weight 0, nonconstant).
    pub gauss: Rational,
    /// Secondary Gauss map g, when known.
    pub secondary: Option<GaussMap>,
    /// Hopf differential Q (weight 2).
    pub hopf: Rational,
    /// Declared ends. Ends stay explicit even when derivable from the data.
    pub ends: Vec<SpherePoint>,
}

impl SurfaceData {
    /// Build surface data; Q is derived as ½(S(g) − S(G)) when not supplied.
    pub fn new(
        label: impl Into<String>,
        gauss: Rational,
        secondary: Option<GaussMap>,
        hopf: Option<Rational>,
        ends: Vec<SpherePoint>,
    ) -> Result<Self, CmcError> {
        if gauss.is_constant() {
            return Err(CmcError::ConstantGaussMap);
        }
        if gauss.weight() != Weight::Function {
            return Err(CmcError::WrongWeight { field: "G", expected: 0 });
        }
        let hopf = match hopf {
            Some(q) => {
                if q.weight() != Weight::TwoForm {
                    return Err(CmcError::WrongWeight { field: "Q", expected: 2 });
                }
                q
            }
            None => {
                let g = secondary.as_ref().ok_or(CmcError::MissingHopfData)?;
                hopf_from_maps(g, &gauss)?
            }
        };
        Ok(SurfaceData { label: label.into(), gauss, secondary, hopf, ends })
    }

    pub fn omega_sharp(&self) -> Result<Rational, CmcError> {
        dual_omega(&self.hopf, &self.gauss)
    }

    pub fn alpha_sharp(&self) -> Result<SL2CForm, CmcError> {
        alpha_sharp(&self.gauss, &self.omega_sharp()?)
    }

    pub fn primal_omega(&self) -> Result<PowerForm, CmcError> {
        let g = self.secondary.as_ref().ok_or(CmcError::MissingHopfData)?;
        primal_omega(&self.hopf, g)
    }

    pub fn alpha(&self) -> Result<Alpha, CmcError> {
        let g = self.secondary.as_ref().ok_or(CmcError::MissingHopfData)?;
        alpha(g, &self.primal_omega()?)
    }

    pub fn find_end(&self, p: SpherePoint) -> Option<SpherePoint> {
        self.ends.iter().copied().find(|e| e.approx_eq(&p, 1e-9))
    }

    /// The same surface pulled back along z ↦ 1/z, ends mapped accordingly.
    /// Chart invariance of per-end analysis is tested against this transform.
    pub fn inverted(&self) -> Result<SurfaceData, CmcError> {
        let inv_gauss = self.gauss.transform_infinity();
        let inv_hopf = self.hopf.transform_infinity();
        let ends = self
            .ends
            .iter()
            .map(|e| match e {
                SpherePoint::Infinity => SpherePoint::finite(0.0, 0.0),
                SpherePoint::Finite(z) if z.norm() <= 1e-12 => SpherePoint::Infinity,
                SpherePoint::Finite(z) => SpherePoint::Finite(Complex64::new(1.0, 0.0) / z),
            })
            .collect();
        let secondary = match &self.secondary {
            None => None,
            Some(GaussMap::Rational(r)) => Some(GaussMap::Rational(r.transform_infinity())),
            // z^μ pulls back to w^{−μ}, staying in the family.
            Some(GaussMap::Power(p)) => Some(GaussMap::Power(PowerMonomial::new(-p.mu))),
        };
        SurfaceData::new(
            format!("{} (inverted)", self.label),
            inv_gauss,
            secondary,
            Some(inv_hopf),
            ends,
        )
    }
}

/// Outcome of one validation check.
#[derive(Clone, Debug)]
pub struct ValidationItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Report produced by [`validate`]; failures are carried, never thrown.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub items: Vec<ValidationItem>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// Check the data for internal consistency: Q's poles are declared as ends,
/// Q agrees with ½(S(g) − S(G)) when both Gauss maps are present (pointwise
/// at 10 deterministic sample points, tolerance 1e-8), and det α# vanishes
/// identically.
pub fn validate(data: &SurfaceData) -> ValidationReport {
    let mut items = Vec::new();

    {
        let mut missing: Vec<String> = Vec::new();
        for (z, _) in data.hopf.finite_poles() {
            if data.find_end(SpherePoint::Finite(z)).is_none() {
                missing.push(format!("{}", SpherePoint::Finite(z)));
            }
        }
        if data.hopf.has_pole_at_infinity() && data.find_end(SpherePoint::Infinity).is_none() {
            missing.push("inf".to_string());
        }
        items.push(ValidationItem {
            name: "hopf_poles_declared",
            passed: missing.is_empty(),
            detail: if missing.is_empty() {
                "every pole of Q is a declared end".to_string()
            } else {
                format!("poles of Q not declared as ends: {}", missing.join(", "))
            },
        });
    }

    if let Some(g) = &data.secondary {
        match hopf_from_maps(g, &data.gauss) {
            Ok(derived) => {
                let mut max_rel = 0.0f64;
                let mut checked = 0;
                for z in sample_points(data) {
                    let expected = derived.eval(z);
                    let got = data.hopf.eval(z);
                    if !expected.is_finite() || !got.is_finite() {
                        continue;
                    }
                    let rel = (expected - got).norm() / (1.0 + expected.norm());
                    max_rel = max_rel.max(rel);
                    checked += 1;
                }
                let passed = checked >= 5 && max_rel <= 1e-8;
                items.push(ValidationItem {
                    name: "hopf_schwarzian_consistency",
                    passed,
                    detail: format!(
                        "max relative deviation of Q from (S(g) - S(G))/2 over {checked} points: {max_rel:.3e}"
                    ),
                });
            }
            Err(e) => items.push(ValidationItem {
                name: "hopf_schwarzian_consistency",
                passed: false,
                detail: format!("could not derive Q from the Gauss maps: {e}"),
            }),
        }
    }

    match data.alpha_sharp() {
        Ok(form) => {
            let ok = form.det_vanishes_identically();
            items.push(ValidationItem {
                name: "alpha_sharp_null",
                passed: ok,
                detail: if ok {
                    "det of the dual connection form vanishes identically".to_string()
                } else {
                    "det of the dual connection form does not cancel".to_string()
                },
            });
        }
        Err(e) => items.push(ValidationItem {
            name: "alpha_sharp_null",
            passed: false,
            detail: format!("could not build the dual connection form: {e}"),
        }),
    }

    ValidationReport { items }
}

/// Deterministic sample points on a golden-angle spiral, nudged off poles.
fn sample_points(data: &SurfaceData) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(10);
    let mut k = 0u32;
    while out.len() < 10 && k < 100 {
        k += 1;
        let angle = 2.399963 * k as f64;
        let radius = 0.37 + (0.21 * k as f64) % 2.3;
        let z = Complex64::from_polar(radius, angle);
        let near_pole = data
            .hopf
            .finite_poles()
            .iter()
            .chain(data.gauss.finite_poles().iter())
            .any(|(p, _)| (z - p).norm() < 0.1);
        if !near_pole {
            out.push(z);
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod test_data {
    use super::*;
    use crate::series::Polynomial;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Q = ((1−μ²)/4)·dz²/z².
    pub fn catenoid_hopf(mu: f64) -> Rational {
        Rational::new(
            Polynomial::constant(c((1.0 - mu * mu) / 4.0)),
            Polynomial::monomial(2, c(1.0)),
            Weight::TwoForm,
        )
        .unwrap()
    }

    /// The catenoid cousin: g = z^μ, G = z, ends {0, ∞}.
    pub fn catenoid(mu: f64) -> SurfaceData {
        SurfaceData::new(
            "catenoid cousin",
            Rational::variable(),
            Some(GaussMap::power(mu)),
            Some(catenoid_hopf(mu)),
            vec![SpherePoint::finite(0.0, 0.0), SpherePoint::Infinity],
        )
        .unwrap()
    }

    /// The perturbed cousin: g = z^μ, G = z + z²/2, Q derived; ends {0, −1, ∞}.
    pub fn perturbed_cousin(mu: f64) -> SurfaceData {
        let gauss = Rational::new(
            Polynomial::from_real(&[0.0, 1.0, 0.5]),
            Polynomial::one(),
            Weight::Function,
        )
        .unwrap();
        SurfaceData::new(
            "perturbed cousin",
            gauss,
            Some(GaussMap::power(mu)),
            None,
            vec![
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(-1.0, 0.0),
                SpherePoint::Infinity,
            ],
        )
        .unwrap()
    }

    /// The three-end surface: G = (z+1)(z²−4z+1)/(z−1)³, g = z²,
    /// Q = 2/(z(z−1)²) dz², ends {0, 1, ∞}.
    pub fn three_end() -> SurfaceData {
        let num = &Polynomial::from_real(&[1.0, 1.0]) * &Polynomial::from_real(&[1.0, -4.0, 1.0]);
        let lin = Polynomial::from_real(&[-1.0, 1.0]);
        let den = &(&lin * &lin) * &lin;
        let gauss = Rational::new(num, den, Weight::Function).unwrap();
        let hopf = Rational::new(
            Polynomial::from_real(&[2.0]),
            &Polynomial::variable() * &Polynomial::from_real(&[1.0, -2.0, 1.0]),
            Weight::TwoForm,
        )
        .unwrap();
        SurfaceData::new(
            "three-end",
            gauss,
            Some(GaussMap::rational(Rational::monomial_pow(2))),
            Some(hopf),
            vec![
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(1.0, 0.0),
                SpherePoint::Infinity,
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_data::*;
    use super::*;
    use crate::series::Polynomial;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dual_omega_of_catenoid() {
        // ω# = −Q/dG = ((μ²−1)/4)·z^{−2} dz for G = z.
        let mu = 2.0;
        let omega = dual_omega(&catenoid_hopf(mu), &Rational::variable()).unwrap();
        assert_eq!(omega.weight(), Weight::OneForm);
        let z = Complex64::new(0.4, 0.3);
        let expected = c((mu * mu - 1.0) / 4.0) / (z * z);
        assert!((omega.eval(z) - expected).norm() < 1e-12);
    }

    #[test]
    fn dual_omega_of_zero_hopf_is_zero() {
        let omega = dual_omega(&Rational::zero(Weight::TwoForm), &Rational::variable()).unwrap();
        assert!(omega.is_zero());
    }

    #[test]
    fn dual_omega_rejects_constant_gauss() {
        assert!(matches!(
            dual_omega(&catenoid_hopf(2.0), &Rational::constant(c(3.0))),
            Err(CmcError::ConstantGaussMap)
        ));
    }

    #[test]
    fn dual_omega_matches_pointwise_quotient_on_three_end_data() {
        let data = three_end();
        let omega = data.omega_sharp().unwrap();
        let dg = data.gauss.derivative().unwrap();
        for k in 1..=10 {
            let z = Complex64::from_polar(0.3 + 0.17 * k as f64, 2.399963 * k as f64);
            let expected = -data.hopf.eval(z) / dg.eval(z);
            assert!((omega.eval(z) - expected).norm() < 1e-9 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn alpha_sharp_catenoid_entries() {
        // Entries ((μ²−1)/4)·(z^{−1}, −1, z^{−2}, −z^{−1}) dz.
        let mu = 2.0;
        let omega = dual_omega(&catenoid_hopf(mu), &Rational::variable()).unwrap();
        let form = alpha_sharp(&Rational::variable(), &omega).unwrap();
        let z = Complex64::new(0.8, -0.4);
        let f = c((mu * mu - 1.0) / 4.0);
        assert!((form.entry(0, 0).eval(z) - f / z).norm() < 1e-12);
        assert!((form.entry(0, 1).eval(z) + f).norm() < 1e-12);
        assert!((form.entry(1, 0).eval(z) - f / (z * z)).norm() < 1e-12);
        assert!((form.entry(1, 1).eval(z) + f / z).norm() < 1e-12);
    }

    #[test]
    fn alpha_sharp_of_zero_omega_is_zero() {
        let zero = Rational::zero(Weight::OneForm);
        let form = alpha_sharp(&Rational::variable(), &zero).unwrap();
        for r in 0..2 {
            for col in 0..2 {
                assert!(form.entry(r, col).is_zero());
            }
        }
    }

    #[test]
    fn alpha_sharp_null_and_trace_free() {
        let data = three_end();
        let form = data.alpha_sharp().unwrap();
        assert!(form.det_vanishes_identically());
        assert!(form.trace_form().is_zero());
    }

    #[test]
    fn hopf_from_maps_catenoid_family() {
        // g = z^μ, G = z → (1−μ²)/4 · dz²/z².
        for &mu in &[0.5, 2.0, 3.0] {
            let q = hopf_from_maps(&GaussMap::power(mu), &Rational::variable()).unwrap();
            let z = Complex64::new(0.6, 0.1);
            let expected = c((1.0 - mu * mu) / 4.0) / (z * z);
            assert!((q.eval(z) - expected).norm() < 1e-10, "mu = {mu}");
        }
    }

    #[test]
    fn hopf_from_maps_perturbed_cousin() {
        // g = z^μ, G = z + z²/2 → (1−μ²)/(4z²) + 3/(4(1+z)²).
        let mu = 2.0;
        let data = perturbed_cousin(mu);
        let z = Complex64::new(0.3, 0.4);
        let expected = c((1.0 - mu * mu) / 4.0) / (z * z) + c(0.75) / ((z + c(1.0)) * (z + c(1.0)));
        assert!((data.hopf.eval(z) - expected).norm() < 1e-10);
    }

    #[test]
    fn hopf_from_equal_maps_vanishes() {
        let g = three_end().gauss;
        let q = hopf_from_maps(&GaussMap::rational(g.clone()), &g).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn primal_omega_of_catenoid_power_family() {
        // ω = Q/dg = ((1−μ²)/(4μ))·z^{−μ−1} dz.
        let mu = 2.0;
        let omega = primal_omega(&catenoid_hopf(mu), &GaussMap::power(mu)).unwrap();
        assert!(omega.is_single_valued());
        let z = Complex64::new(1.2, 0.5);
        let expected = c((1.0 - mu * mu) / (4.0 * mu)) * z.powf(-mu - 1.0);
        assert!((omega.eval(z) - expected).norm() < 1e-12);
    }

    #[test]
    fn alpha_entry_g_omega_is_rational_for_power_g() {
        // gω = Q·z/μ stays rational for any μ; at μ=2 it is (−3/8)·dz/z.
        let mu = 2.0;
        let omega = primal_omega(&catenoid_hopf(mu), &GaussMap::power(mu)).unwrap();
        let a = alpha(&GaussMap::power(mu), &omega).unwrap();
        let g_omega = a.entry(0, 0).as_rational().unwrap();
        let res = g_omega.residue_at(SpherePoint::finite(0.0, 0.0)).unwrap();
        assert!((res - c(-3.0 / 8.0)).norm() < 1e-12);
    }

    #[test]
    fn alpha_multivalued_entries_for_half_power() {
        // g = z^{1/2}, ω = z^{−2} dz: g²ω = z^{−1} dz is single-valued with
        // residue 1; gω = z^{−3/2} dz is not.
        let omega = PowerForm::rational(
            Rational::new(Polynomial::one(), Polynomial::monomial(2, c(1.0)), Weight::OneForm)
                .unwrap(),
        );
        let a = alpha(&GaussMap::power(0.5), &omega).unwrap();
        // entry (0,1) is −g²ω.
        let minus_g2_omega = a.entry(0, 1).as_rational().unwrap();
        let res = minus_g2_omega.residue_at(SpherePoint::finite(0.0, 0.0)).unwrap();
        assert!((res + c(1.0)).norm() < 1e-12);
        assert!(matches!(
            a.entry(0, 0).as_rational(),
            Err(CmcError::MultivaluedEntry { .. })
        ));
    }

    #[test]
    fn omega_duality_relation() {
        // ω·dg = Q = −(ω#·dG) pointwise where both sides are defined.
        let data = three_end();
        let g = data.secondary.as_ref().unwrap().as_rational().unwrap();
        let omega = data.primal_omega().unwrap().as_rational().unwrap();
        let omega_sharp = data.omega_sharp().unwrap();
        let dg = g.derivative().unwrap();
        let dgauss = data.gauss.derivative().unwrap();
        for k in 1..=8 {
            let z = Complex64::from_polar(0.4 + 0.13 * k as f64, 1.7 * k as f64);
            let lhs = omega.eval(z) * dg.eval(z);
            let rhs = -(omega_sharp.eval(z) * dgauss.eval(z));
            let q = data.hopf.eval(z);
            assert!((lhs - rhs).norm() < 1e-8 * (1.0 + q.norm()));
            assert!((lhs - q).norm() < 1e-8 * (1.0 + q.norm()));
        }
    }

    #[test]
    fn validate_passes_on_consistent_data() {
        for &mu in &[0.5, 2.0] {
            let report = validate(&catenoid(mu));
            assert!(report.passed(), "mu = {mu}: {:?}", report.items);
        }
        let report = validate(&three_end());
        assert!(report.passed(), "{:?}", report.items);
    }

    #[test]
    fn validate_flags_undeclared_pole() {
        // Q with an extra pole at z = 3 that is not declared as an end.
        let hopf = Rational::new(
            Polynomial::from_real(&[2.0]),
            &(&Polynomial::variable() * &Polynomial::from_real(&[1.0, -2.0, 1.0]))
                * &Polynomial::from_real(&[-3.0, 1.0]),
            Weight::TwoForm,
        )
        .unwrap();
        let data = SurfaceData::new(
            "undeclared pole",
            three_end().gauss,
            None,
            Some(hopf),
            vec![
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(1.0, 0.0),
                SpherePoint::Infinity,
            ],
        )
        .unwrap();
        let report = validate(&data);
        let item = report.items.iter().find(|i| i.name == "hopf_poles_declared").unwrap();
        assert!(!item.passed);
        assert!(item.detail.contains('3'));
    }

    #[test]
    fn validate_flags_schwarzian_inconsistency() {
        let mut data = catenoid(2.0);
        // Perturb Q by 0.1/z² while keeping ends and poles unchanged.
        data.hopf = data
            .hopf
            .try_add(
                &Rational::new(
                    Polynomial::constant(c(0.1)),
                    Polynomial::monomial(2, c(1.0)),
                    Weight::TwoForm,
                )
                .unwrap(),
            )
            .unwrap();
        let report = validate(&data);
        assert!(!report.passed());
        let item = report
            .items
            .iter()
            .find(|i| i.name == "hopf_schwarzian_consistency")
            .unwrap();
        assert!(!item.passed);
    }

    #[test]
    fn surface_data_derives_hopf_when_absent() {
        let data = perturbed_cousin(2.0);
        assert!(validate(&data).passed());
    }

    #[test]
    fn inverted_data_swaps_zero_and_infinity() {
        let data = catenoid(2.0);
        let inv = data.inverted().unwrap();
        assert!(inv.find_end(SpherePoint::finite(0.0, 0.0)).is_some());
        assert!(inv.find_end(SpherePoint::Infinity).is_some());
        // G(z) = z pulls back to 1/w.
        let w = Complex64::new(0.3, 0.6);
        assert!((inv.gauss.eval(w) - Complex64::new(1.0, 0.0) / w).norm() < 1e-12);
    }
}
