//! The flux engine.
//!
//! The flux of a loop γ is `Fl(γ) = (−1/2πi) ∮_γ dF·F⁻¹`. Since the dual
//! connection form satisfies α# = −dF·F⁻¹, the flux at an end p is the
//! entrywise residue of α# there; the sign convention is pinned by the worked
//! catenoid-cousin values. The balancing formula Σⱼ Flⱼ = 0 is the residue
//! theorem applied to the four entries.
//!
//! Dual fluxes: `Fl#(γ) = (−1/2πi) ∮ F⁻¹dF = −Res(α)` (defined when every
//! entry of α is single-valued) and `fl#(γ) = (−1/2πi) ∮ g·ω = −Res(gω)`
//! (defined whenever g·ω is single-valued; it is one of the diagonal entries
//! of Fl#).

use num_complex::Complex64;
use thiserror::Error;

use crate::cmc::{CmcError, SurfaceData};
use crate::mat2::Mat2;
use crate::series::{Rational, SeriesError, SpherePoint};

#[derive(Debug, Error)]
pub enum FluxError {
    #[error("point {0} is not a declared end")]
    UnknownEnd(SpherePoint),
    #[error("the connection form has an undeclared pole at {0}")]
    UndeclaredPole(SpherePoint),
    #[error("contour of radius {radius} encloses another singularity at distance {distance}")]
    RadiusTooLarge { radius: f64, distance: f64 },
    #[error("surface data has no secondary Gauss map")]
    MissingSecondaryGauss,
    #[error(transparent)]
    Cmc(#[from] CmcError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// An sl(2,C)-valued flux.
#[derive(Clone, Copy, Debug)]
pub struct FluxMatrix {
    entries: Mat2,
}

impl FluxMatrix {
    fn new(entries: Mat2) -> Self {
        debug_assert!(
            entries.trace().norm() <= 1e-10 * (1.0 + entries.max_norm()),
            "flux must be trace-free: trace = {}",
            entries.trace()
        );
        FluxMatrix { entries }
    }

    pub fn matrix(&self) -> Mat2 {
        self.entries
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.max_norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_norm() <= tol
    }
}

/// Flux at a declared end: the entrywise residue of α# there.
pub fn flux_at_end(data: &SurfaceData, p: SpherePoint) -> Result<FluxMatrix, FluxError> {
    let end = data.find_end(p).ok_or(FluxError::UnknownEnd(p))?;
    let form = data.alpha_sharp()?;
    Ok(FluxMatrix::new(form.residue_matrix(end)?))
}

/// The balancing report: per-end fluxes, their sum, and the verdict.
#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub per_end: Vec<(SpherePoint, FluxMatrix)>,
    pub total: Mat2,
    pub max_norm: f64,
    pub balanced: bool,
    pub tolerance: f64,
}

/// Default absolute tolerance on the max-norm of the flux sum.
pub const DEFAULT_BALANCE_TOL: f64 = 1e-9;

/// Sum the fluxes over all declared ends. Errors when α# has a pole outside
/// the declared ends (balancing would silently fail there).
pub fn balance(data: &SurfaceData, tol: f64) -> Result<BalanceReport, FluxError> {
    let form = data.alpha_sharp()?;
    for pole in form.poles() {
        if data.find_end(pole).is_none() {
            return Err(FluxError::UndeclaredPole(pole));
        }
    }
    let mut per_end = Vec::with_capacity(data.ends.len());
    let mut total = Mat2::zero();
    for &end in &data.ends {
        let fl = FluxMatrix::new(form.residue_matrix(end)?);
        total = total + fl.matrix();
        per_end.push((end, fl));
    }
    let max_norm = total.max_norm();
    Ok(BalanceReport { per_end, total, max_norm, balanced: max_norm <= tol, tolerance: tol })
}

/// Dual flux Fl# at an end: −(entrywise residue of α). Requires every entry
/// of α to be single-valued there (the caller asserts the reducibility that
/// makes F itself single-valued).
pub fn dual_flux_at_end(data: &SurfaceData, p: SpherePoint) -> Result<FluxMatrix, FluxError> {
    let end = data.find_end(p).ok_or(FluxError::UnknownEnd(p))?;
    if data.secondary.is_none() {
        return Err(FluxError::MissingSecondaryGauss);
    }
    let alpha = data.alpha()?;
    let form = alpha.as_rational_form()?;
    Ok(FluxMatrix::new(-form.residue_matrix(end)?))
}

/// fl# at an end: −Res_p(g·ω). Defined whenever g·ω is single-valued; g·ω
/// equals Q·g/dg, which is rational even for the power family g = z^μ.
pub fn fl_sharp(data: &SurfaceData, p: SpherePoint) -> Result<Complex64, FluxError> {
    let end = data.find_end(p).ok_or(FluxError::UnknownEnd(p))?;
    if data.secondary.is_none() {
        return Err(FluxError::MissingSecondaryGauss);
    }
    let alpha = data.alpha()?;
    // Entry (0,0) of α is g·ω.
    let g_omega = alpha.entry(0, 0).as_rational()?;
    Ok(-g_omega.residue_at(end)?)
}

/// Residues of η := G·ω# at the ends, plus their sum (which vanishes when the
/// ends exhaust the poles of η).
#[derive(Clone, Debug)]
pub struct EtaResidues {
    pub per_end: Vec<(SpherePoint, Complex64)>,
    pub sum: Complex64,
}

/// η = G·ω# is the (1,1) entry of α#; its residue at an end equals the (1,1)
/// entry of the flux there.
pub fn eta_residues(data: &SurfaceData) -> Result<EtaResidues, FluxError> {
    let eta = data.gauss.try_mul(&data.omega_sharp()?)?;
    for (z, _) in eta.finite_poles() {
        if data.find_end(SpherePoint::Finite(z)).is_none() {
            return Err(FluxError::UndeclaredPole(SpherePoint::Finite(z)));
        }
    }
    if eta.has_pole_at_infinity() && data.find_end(SpherePoint::Infinity).is_none() {
        return Err(FluxError::UndeclaredPole(SpherePoint::Infinity));
    }
    let mut per_end = Vec::with_capacity(data.ends.len());
    let mut sum = Complex64::new(0.0, 0.0);
    for &end in &data.ends {
        let r = eta.residue_at(end)?;
        sum += r;
        per_end.push((end, r));
    }
    Ok(EtaResidues { per_end, sum })
}

/// Numeric oracle for [`flux_at_end`]: trapezoidal quadrature of
/// `(1/2πi) ∮ α#` on the circle of the given radius around the end, taken in
/// the local chart (the w = 1/z chart for the end at ∞). Spectrally accurate
/// for the analytic integrand.
pub fn contour_flux(
    data: &SurfaceData,
    p: SpherePoint,
    radius: f64,
    n_points: usize,
) -> Result<FluxMatrix, FluxError> {
    assert!(n_points >= 64, "quadrature needs at least 64 nodes");
    assert!(radius > 0.0, "radius must be positive");
    let end = data.find_end(p).ok_or(FluxError::UnknownEnd(p))?;
    let form = data.alpha_sharp()?;

    // Entries localized to the chart at the end (weight factors included).
    let local: Vec<Rational> = (0..4)
        .map(|i| form.entry(i / 2, i % 2).localized(end))
        .collect();

    // The circle must not reach any other singularity in this chart.
    let mut min_dist = f64::INFINITY;
    for entry in &local {
        for (w, _) in entry.finite_poles() {
            let d = w.norm();
            if d > 1e-9 {
                min_dist = min_dist.min(d);
            }
        }
    }
    if radius >= min_dist {
        return Err(FluxError::RadiusTooLarge { radius, distance: min_dist });
    }

    // (1/2πi)∮ f dz on |u| = r is (1/n) Σ f(u_j)·u_j for equispaced nodes.
    let mut sums = [Complex64::new(0.0, 0.0); 4];
    for j in 0..n_points {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n_points as f64;
        let u = Complex64::from_polar(radius, theta);
        for (i, entry) in local.iter().enumerate() {
            sums[i] += entry.eval(u) * u;
        }
    }
    let scale = Complex64::new(1.0 / n_points as f64, 0.0);
    Ok(FluxMatrix::new(Mat2::new(
        sums[0] * scale,
        sums[1] * scale,
        sums[2] * scale,
        sums[3] * scale,
    )))
}
