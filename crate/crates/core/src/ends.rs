//! Per-end analysis: regularity, Type I / Type II classification, the local
//! normalization of the dual Weierstrass data, multiplicity, w-coefficients,
//! the no-log-term conditions and the flux non-vanishing predicates.
//!
//! At an end p the Hopf differential expands in the local chart as
//! `Q = (q₋₂/u² + q₋₁/u + q₀ + …) du²`; the end is regular when the pole
//! order is at most 2, Type I when q₋₂ ≠ 0 and Type II when q₋₂ = 0. After a
//! target Möbius move σ the dual data take the normalized shape
//! `G = u^l Ĝ(u)`, `ω# = u^k ŵ#(u) du` with `Ĝ(0) ≠ 0`, `ŵ#(0) ≠ 0`, and
//! `m = −k−1` is the multiplicity of the end (m = 1 exactly for embedded
//! ends).

use num_complex::Complex64;
use thiserror::Error;

use crate::cmc::{alpha_sharp, dual_omega, CmcError, SL2CForm, SurfaceData};
use crate::mat2::Mat2;
use crate::series::{Rational, SeriesError, SpherePoint, EPS_ZERO};

#[derive(Debug, Error)]
pub enum EndError {
    #[error("point {0} is not a declared end")]
    UnknownEnd(SpherePoint),
    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(&'static str),
    #[error("the end is not of Type II (q_-2 = {q_minus2})")]
    NotTypeII { q_minus2: Complex64 },
    #[error("no prediction available for Type II multiplicity {0} (covered: 1 and 2)")]
    UnsupportedMultiplicity(i64),
    #[error(transparent)]
    Cmc(#[from] CmcError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndType {
    TypeI,
    TypeII,
    Irregular,
}

impl std::fmt::Display for EndType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndType::TypeI => write!(f, "I"),
            EndType::TypeII => write!(f, "II"),
            EndType::Irregular => write!(f, "irregular"),
        }
    }
}

/// Which target Möbius move normalized the Gauss map at the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationKind {
    /// G(p) was already 0.
    Identity,
    /// ζ ↦ ζ − G(p).
    Translation,
    /// ζ ↦ 1/ζ (G had a pole at the end).
    Inversion,
}

/// The dual Weierstrass data in the local chart at an end, normalized so the
/// Gauss map vanishes at the origin with positive order.
#[derive(Clone, Debug)]
pub struct NormalizedEnd {
    pub point: SpherePoint,
    /// σ∘G in the local coordinate; vanishes at 0 to order l ≥ 1.
    pub gauss: Rational,
    /// −Q/d(σ∘G) in the local coordinate.
    pub omega_sharp: Rational,
    /// Q in the local coordinate (unchanged by the target move).
    pub hopf: Rational,
    /// The SL(2,C) matrix of σ; the flux conjugates by it.
    pub mobius: Mat2,
    pub kind: NormalizationKind,
}

impl NormalizedEnd {
    /// α# of the normalized local data.
    pub fn alpha_sharp(&self) -> Result<SL2CForm, EndError> {
        Ok(alpha_sharp(&self.gauss, &self.omega_sharp)?)
    }
}

/// Everything the analysis attaches to one end.
#[derive(Clone, Debug)]
pub struct EndAnalysis {
    pub point: SpherePoint,
    pub regular: bool,
    pub end_type: EndType,
    /// Laurent coefficients of Q in the local chart.
    pub q_minus2: Complex64,
    pub q_minus1: Complex64,
    pub q_zero: Complex64,
    /// Order l of the normalized Gauss map (l ≥ 1).
    pub gauss_order: i64,
    /// Order k of the normalized ω#.
    pub omega_order: i64,
    /// Multiplicity m = −k − 1.
    pub multiplicity: i64,
    /// Leading ŵ# coefficients (w₀ at the order, then the next two).
    pub w0: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
    /// Ĝ(0) and Ĝ′(0) of the normalized Gauss map.
    pub gauss_unit: Complex64,
    pub gauss_unit_deriv: Complex64,
    /// Whether the log-term of the end ODE vanishes; defined for Type II with
    /// m ∈ {1, 2}.
    pub log_term_vanishes: Option<bool>,
    /// Flux non-vanishing prediction; defined for Type I and Type II with
    /// m ∈ {1, 2} (and for a vanishing ω#, whose flux is literally zero).
    pub flux_nonzero_predicted: Option<bool>,
    /// The Möbius matrix recorded by the normalization.
    pub normalization: Mat2,
    pub normalization_kind: NormalizationKind,
}

/// Move the end to the origin of a local chart and compose G with a Möbius
/// map σ so that σ∘G vanishes there: a translation ζ ↦ ζ − G(p) when G(p) is
/// finite, the inversion ζ ↦ 1/ζ when G has a pole at p.
pub fn normalize_at_end(data: &SurfaceData, p: SpherePoint) -> Result<NormalizedEnd, EndError> {
    let point = data.find_end(p).ok_or(EndError::UnknownEnd(p))?;
    let local_gauss = data.gauss.localized(point);
    let local_hopf = data.hopf.localized(point);

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);

    let gauss_order_raw = local_gauss.order_at(SpherePoint::Finite(zero))?;
    let (normalized, mobius, kind) = if gauss_order_raw < 0 {
        // σ(ζ) = 1/ζ, as the SL(2,C) element ((0, i), (i, 0)).
        let inverted = Rational::new(
            local_gauss.den().clone(),
            local_gauss.num().clone(),
            local_gauss.weight(),
        )?;
        (inverted, Mat2::new(zero, i, i, zero), NormalizationKind::Inversion)
    } else {
        let value = if gauss_order_raw > 0 { zero } else { local_gauss.eval(zero) };
        if value.norm() == 0.0 {
            (local_gauss, Mat2::identity(), NormalizationKind::Identity)
        } else {
            let shifted = local_gauss.try_sub(&Rational::constant(value))?;
            if shifted.is_zero() {
                return Err(EndError::DegenerateNormalization("constant Gauss map"));
            }
            (
                shifted,
                Mat2::new(one, -value, zero, one),
                NormalizationKind::Translation,
            )
        }
    };

    let omega_sharp = dual_omega(&local_hopf, &normalized)?;
    Ok(NormalizedEnd {
        point,
        gauss: normalized,
        omega_sharp,
        hopf: local_hopf,
        mobius,
        kind,
    })
}

/// Classify one declared end and populate the full per-end report.
pub fn classify_end(data: &SurfaceData, p: SpherePoint) -> Result<EndAnalysis, EndError> {
    let norm = normalize_at_end(data, p)?;
    let origin = SpherePoint::finite(0.0, 0.0);

    let q_exp = norm.hopf.expand_at(origin, (-4, 2));
    let q_scale = q_exp.scale();
    let q_minus2 = q_exp.coeff(-2);
    let q_minus1 = q_exp.coeff(-1);
    let q_zero = q_exp.coeff(0);
    // Regular iff Q has a pole of order at most 2 (the identically zero Q is
    // holomorphic, hence regular).
    let regular = q_scale == 0.0
        || (q_exp.coeff(-4).norm() <= EPS_ZERO * q_scale
            && q_exp.coeff(-3).norm() <= EPS_ZERO * q_scale);

    let end_type = if !regular {
        EndType::Irregular
    } else if q_minus2.norm() > EPS_ZERO * q_scale.max(f64::MIN_POSITIVE) {
        EndType::TypeI
    } else {
        EndType::TypeII
    };

    let gauss_order = norm.gauss.order_at(origin)?;
    let gauss_exp = norm.gauss.expand_at(origin, (gauss_order, gauss_order + 1));
    let gauss_unit = gauss_exp.coeff(gauss_order);
    let gauss_unit_deriv = gauss_exp.coeff(gauss_order + 1);

    let (omega_order, w0, w1, w2) = if norm.omega_sharp.is_zero() {
        let z = Complex64::new(0.0, 0.0);
        (0, z, z, z)
    } else {
        let k = norm.omega_sharp.order_at(origin)?;
        let w_exp = norm.omega_sharp.expand_at(origin, (k, k + 2));
        (k, w_exp.coeff(k), w_exp.coeff(k + 1), w_exp.coeff(k + 2))
    };
    let multiplicity = -omega_order - 1;

    let mut analysis = EndAnalysis {
        point: norm.point,
        regular,
        end_type,
        q_minus2,
        q_minus1,
        q_zero,
        gauss_order,
        omega_order,
        multiplicity,
        w0,
        w1,
        w2,
        gauss_unit,
        gauss_unit_deriv,
        log_term_vanishes: None,
        flux_nonzero_predicted: None,
        normalization: norm.mobius,
        normalization_kind: norm.kind,
    };

    if end_type == EndType::TypeII && (multiplicity == 1 || multiplicity == 2) {
        analysis.log_term_vanishes = log_term_condition(&analysis).ok();
    }
    analysis.flux_nonzero_predicted = match end_type {
        EndType::TypeI => Some(true),
        EndType::TypeII if norm.omega_sharp.is_zero() => Some(false),
        EndType::TypeII => flux_nonvanishing_predicate(&analysis).ok(),
        EndType::Irregular => None,
    };

    Ok(analysis)
}

/// The ŵ# coefficients (w₀, w₁, w₂) of a normalized Type II end. w₀ and w₁
/// are computed from the q- and Ĝ-coefficients,
///
/// ```text
///   w₀ = −q_{l+k−1} / (l·Ĝ(0)),
///   w₁ = −(q_{l+k} + (l+1)·w₀·Ĝ′(0)) / (l·Ĝ(0)),
/// ```
///
/// and cross-checked against the direct Laurent coefficients of ŵ#; w₂ is
/// read directly from the expansion.
pub fn w_coefficients(norm: &NormalizedEnd) -> Result<(Complex64, Complex64, Complex64), EndError> {
    let origin = SpherePoint::finite(0.0, 0.0);
    if norm.omega_sharp.is_zero() {
        return Err(EndError::DegenerateNormalization("omega_sharp vanishes identically"));
    }
    let q_exp = norm.hopf.expand_at(origin, (-4, 4));
    let q_scale = q_exp.scale().max(f64::MIN_POSITIVE);
    if q_exp.coeff(-2).norm() > EPS_ZERO * q_scale {
        return Err(EndError::NotTypeII { q_minus2: q_exp.coeff(-2) });
    }

    let l = norm.gauss.order_at(origin)?;
    if l <= 0 {
        return Err(EndError::DegenerateNormalization("normalized Gauss map order is not positive"));
    }
    let gauss_exp = norm.gauss.expand_at(origin, (l, l + 1));
    let g0 = gauss_exp.coeff(l);
    if g0.norm() <= EPS_ZERO * gauss_exp.scale().max(f64::MIN_POSITIVE) {
        return Err(EndError::DegenerateNormalization("unit part of the Gauss map vanishes"));
    }
    let g1 = gauss_exp.coeff(l + 1);

    let k = norm.omega_sharp.order_at(origin)?;
    let w_exp = norm.omega_sharp.expand_at(origin, (k, k + 2));
    let w0_direct = w_exp.coeff(k);
    let w1_direct = w_exp.coeff(k + 1);
    let w2 = w_exp.coeff(k + 2);

    let lf = Complex64::new(l as f64, 0.0);
    let w0 = -q_exp.coeff(l + k - 1) / (lf * g0);
    let w1 = -(q_exp.coeff(l + k) + Complex64::new((l + 1) as f64, 0.0) * w0 * g1) / (lf * g0);

    let scale = w_exp.scale().max(f64::MIN_POSITIVE);
    if (w0 - w0_direct).norm() > 1e-9 * scale || (w1 - w1_direct).norm() > 1e-9 * scale {
        return Err(EndError::DegenerateNormalization(
            "coefficient identities disagree with the direct expansion",
        ));
    }
    Ok((w0, w1, w2))
}

/// Whether the log-term of the end ODE vanishes:
/// `w₁ = −q₋₁ w₀` for m = 1, `4w₂ = −q₀w₀ − 3q₋₁w₁ − q₋₁²w₀` for m = 2.
pub fn log_term_condition(e: &EndAnalysis) -> Result<bool, EndError> {
    if e.end_type != EndType::TypeII {
        return Err(EndError::NotTypeII { q_minus2: e.q_minus2 });
    }
    let scale = e
        .w0
        .norm()
        .max(e.w1.norm())
        .max(e.w2.norm())
        .max(e.q_minus1.norm())
        .max(e.q_zero.norm())
        .max(1.0);
    match e.multiplicity {
        1 => Ok((e.w1 + e.q_minus1 * e.w0).norm() <= EPS_ZERO * scale * scale),
        2 => {
            let lhs = Complex64::new(4.0, 0.0) * e.w2;
            let rhs = -e.q_zero * e.w0
                - Complex64::new(3.0, 0.0) * e.q_minus1 * e.w1
                - e.q_minus1 * e.q_minus1 * e.w0;
            Ok((lhs - rhs).norm() <= EPS_ZERO * scale.powi(3))
        }
        m => Err(EndError::UnsupportedMultiplicity(m)),
    }
}

/// Flux non-vanishing prediction from the local coefficients alone.
///
/// Type I ends always carry flux. For Type II the multiplicity must be 1 or
/// 2: with m = 1 the flux is nonzero iff q₋₁ ≠ 0; with m = 2 it is nonzero
/// iff q₋₁ = 0 ∧ q₀ ≠ 0, or q₋₁ ≠ 0 ∧ 4(q₀ − q₋₁·Ĝ′(0)/Ĝ(0)) + q₋₁² ≠ 0.
pub fn flux_nonvanishing_predicate(e: &EndAnalysis) -> Result<bool, EndError> {
    match e.end_type {
        EndType::Irregular => Err(EndError::DegenerateNormalization("irregular end")),
        EndType::TypeI => Ok(true),
        EndType::TypeII => {
            let q_scale = e
                .q_minus1
                .norm()
                .max(e.q_zero.norm())
                .max(f64::MIN_POSITIVE);
            let q1_zero = e.q_minus1.norm() <= EPS_ZERO * q_scale;
            match e.multiplicity {
                1 => Ok(!q1_zero),
                2 => {
                    let q0_zero = e.q_zero.norm() <= EPS_ZERO * q_scale;
                    if q1_zero {
                        Ok(!q0_zero)
                    } else {
                        let ratio = e.gauss_unit_deriv / e.gauss_unit;
                        let combo = Complex64::new(4.0, 0.0) * (e.q_zero - e.q_minus1 * ratio)
                            + e.q_minus1 * e.q_minus1;
                        let combo_scale = (e.q_zero.norm() + (e.q_minus1 * ratio).norm())
                            .max(e.q_minus1.norm().powi(2))
                            .max(f64::MIN_POSITIVE);
                        Ok(combo.norm() > EPS_ZERO * combo_scale)
                    }
                }
                m => Err(EndError::UnsupportedMultiplicity(m)),
            }
        }
    }
}
