//! Numeric realization of the immersion: integrate the frame ODE dF = F·α,
//! compute x = F·F* (and the dual x# = F⁻¹·(F⁻¹)*), convert to Poincaré-ball
//! coordinates, sample meshes and compute loop monodromies.
//!
//! Integration is fixed-step RK4 with ⌈steps_per_unit · arclength⌉ steps per
//! polyline segment; the determinant drift |det F − 1| is monitored and never
//! silently corrected (trace-free α preserves det F exactly, so drift is an
//! integrator diagnostic).

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::cmc::{CmcError, PowerForm, SL2CForm, SurfaceData};
use crate::mat2::Mat2;
use crate::series::Rational;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("path passes within {distance:.3e} of a singularity at {location}")]
    PathHitsSingularity { location: Complex64, distance: f64 },
    #[error("path crosses the branch cut of the sectored connection (negative real axis)")]
    PathCrossesBranchCut,
    #[error("determinant drift {0:.3e} exceeds 1e-6")]
    ExcessiveDrift(f64),
    #[error("loop is not closed: endpoints differ by {0:.3e}")]
    LoopNotClosed(f64),
    #[error("matrix is not a Hermitian positive-definite point of the hyperboloid model")]
    NotPositiveDefinite,
    #[error("mesh vertex leaves the unit ball")]
    VertexOutsideBall,
    #[error("grid is empty or degenerate")]
    DegenerateGrid,
    #[error("io failure: {0}")]
    IoFailure(#[from] std::io::Error),
    #[error(transparent)]
    Cmc(#[from] CmcError),
}

/// Default RK4 density: steps per unit of arclength.
pub const DEFAULT_STEPS_PER_UNIT: f64 = 256.0;
/// Hard ceiling on tolerated determinant drift during integration.
pub const MAX_DET_DRIFT: f64 = 1e-6;

/// A matrix-valued connection form, evaluable along paths.
#[derive(Clone, Debug)]
pub enum Connection {
    /// All entries rational; single-valued on the sphere.
    Exact(SL2CForm),
    /// Entries carry a common branch factor z^σ (power-monomial secondary
    /// Gauss map); valid on the sector arg z ∈ (−π, π).
    Sector {
        g_exponent: f64,
        omega: PowerForm,
    },
}

impl Connection {
    /// The primal connection α of the surface data. Exact when g is rational
    /// (or z^μ with integer μ), sectored otherwise.
    pub fn primal(data: &SurfaceData) -> Result<Connection, SurfaceError> {
        let alpha = data.alpha()?;
        match alpha.as_rational_form() {
            Ok(form) => Ok(Connection::Exact(form)),
            Err(_) => {
                let g = data.secondary.as_ref().expect("alpha() requires g");
                let mu = match g {
                    crate::cmc::GaussMap::Power(p) => p.mu,
                    crate::cmc::GaussMap::Rational(_) => {
                        unreachable!("rational g always yields an exact form")
                    }
                };
                Ok(Connection::Sector { g_exponent: mu, omega: data.primal_omega()? })
            }
        }
    }

    /// The dual connection α#; always exact.
    pub fn dual(data: &SurfaceData) -> Result<Connection, SurfaceError> {
        Ok(Connection::Exact(data.alpha_sharp()?))
    }

    pub fn eval(&self, z: Complex64) -> Mat2 {
        match self {
            Connection::Exact(form) => form.eval(z),
            Connection::Sector { g_exponent, omega } => {
                let w = omega.eval(z);
                let g = z.powf(*g_exponent);
                Mat2::new(g * w, -g * g * w, w, -g * w)
            }
        }
    }

    /// Finite points where some entry blows up (plus the branch point 0 for
    /// sectored connections).
    pub fn finite_singularities(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        let mut push = |z: Complex64| {
            if !out.iter().any(|w| (w - z).norm() <= 1e-9 * (1.0 + z.norm())) {
                out.push(z);
            }
        };
        match self {
            Connection::Exact(form) => {
                for r in 0..2 {
                    for c in 0..2 {
                        for (z, _) in form.entry(r, c).finite_poles() {
                            push(z);
                        }
                    }
                }
            }
            Connection::Sector { omega, .. } => {
                push(Complex64::new(0.0, 0.0));
                for (z, _) in omega.base().finite_poles() {
                    push(z);
                }
            }
        }
        out
    }

    fn is_sectored(&self) -> bool {
        matches!(self, Connection::Sector { .. })
    }
}

/// A frame value at a parameter point, with the determinant drift accumulated
/// along the integration that produced it.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub value: Mat2,
    pub at: Complex64,
    pub det_drift: f64,
}

impl Frame {
    pub fn identity(at: Complex64) -> Self {
        Frame { value: Mat2::identity(), at, det_drift: 0.0 }
    }

    pub fn new(value: Mat2, at: Complex64) -> Self {
        Frame { value, at, det_drift: (value.det() - Complex64::new(1.0, 0.0)).norm() }
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    // Project p onto the segment.
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * Complex64::new(t, 0.0))).norm()
}

fn segment_crosses_negative_axis(a: Complex64, b: Complex64) -> bool {
    // The principal-branch cut is {Re z ≤ 0, Im z = 0}.
    if (a.im > 0.0 && b.im > 0.0) || (a.im < 0.0 && b.im < 0.0) {
        return false;
    }
    if a.im == 0.0 && b.im == 0.0 {
        return a.re.min(b.re) <= 0.0;
    }
    let t = a.im / (a.im - b.im);
    let x = a.re + t * (b.re - a.re);
    x <= 0.0
}

fn check_path(conn: &Connection, path: &[Complex64]) -> Result<(), SurfaceError> {
    let singular = conn.finite_singularities();
    for seg in path.windows(2) {
        for &s in &singular {
            let d = point_segment_distance(s, seg[0], seg[1]);
            if d < 1e-6 {
                return Err(SurfaceError::PathHitsSingularity { location: s, distance: d });
            }
        }
        if conn.is_sectored() && segment_crosses_negative_axis(seg[0], seg[1]) {
            return Err(SurfaceError::PathCrossesBranchCut);
        }
    }
    Ok(())
}

/// RK4 integration of dF = F·α(z)·(dz/dt) along a polyline. The initial
/// frame is returned untouched for an empty path.
pub fn integrate_frame(
    conn: &Connection,
    path: &[Complex64],
    initial: Frame,
    steps_per_unit: f64,
) -> Result<Frame, SurfaceError> {
    if path.len() < 2 {
        return Ok(initial);
    }
    check_path(conn, path)?;
    let mut f = initial.value;
    let mut drift = initial.det_drift;
    let one = Complex64::new(1.0, 0.0);
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let dz = b - a;
        let len = dz.norm();
        if len == 0.0 {
            continue;
        }
        let steps = (steps_per_unit * len).ceil().max(1.0) as usize;
        let h = 1.0 / steps as f64;
        for s in 0..steps {
            let t0 = s as f64 * h;
            // dF/dt = F · α(z(t)) · dz with z(t) = a + t·dz, t ∈ [0, 1].
            let rhs = |f: Mat2, t: f64| -> Mat2 {
                let z = a + dz * Complex64::new(t, 0.0);
                (f * conn.eval(z)).scale(dz)
            };
            let k1 = rhs(f, t0);
            let k2 = rhs(f + k1.scale(Complex64::new(h / 2.0, 0.0)), t0 + h / 2.0);
            let k3 = rhs(f + k2.scale(Complex64::new(h / 2.0, 0.0)), t0 + h / 2.0);
            let k4 = rhs(f + k3.scale(Complex64::new(h, 0.0)), t0 + h);
            f = f + (k1 + k2.scale(Complex64::new(2.0, 0.0)) + k3.scale(Complex64::new(2.0, 0.0)) + k4)
                .scale(Complex64::new(h / 6.0, 0.0));
            drift = drift.max((f.det() - one).norm());
            if drift > MAX_DET_DRIFT {
                return Err(SurfaceError::ExcessiveDrift(drift));
            }
        }
    }
    Ok(Frame { value: f, at: path[path.len() - 1], det_drift: drift })
}

/// Monodromy of a closed loop: the frame after integrating dF = F·α from the
/// identity around the loop.
pub fn monodromy(conn: &Connection, loop_path: &[Complex64]) -> Result<Mat2, SurfaceError> {
    if loop_path.len() < 2 {
        return Ok(Mat2::identity());
    }
    let gap = (loop_path[0] - loop_path[loop_path.len() - 1]).norm();
    if gap > 1e-9 * (1.0 + loop_path[0].norm()) {
        return Err(SurfaceError::LoopNotClosed(gap));
    }
    let start = loop_path[0];
    let frame = integrate_frame(conn, loop_path, Frame::identity(start), DEFAULT_STEPS_PER_UNIT)?;
    Ok(frame.value)
}

/// A closed polyline approximating the circle |z − center| = radius,
/// traversed counterclockwise from angle `start_angle`.
pub fn circle_path(center: Complex64, radius: f64, n: usize, start_angle: f64) -> Vec<Complex64> {
    let mut path: Vec<Complex64> = (0..=n)
        .map(|j| {
            let t = start_angle + 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            center + Complex64::from_polar(radius, t)
        })
        .collect();
    // Close exactly.
    let first = path[0];
    *path.last_mut().unwrap() = first;
    path
}

/// A point of hyperbolic 3-space in the Hermitian-matrix model: positive
/// definite, det 1.
#[derive(Clone, Copy, Debug)]
pub struct HermitianPoint {
    matrix: Mat2,
}

impl HermitianPoint {
    pub fn new(m: Mat2) -> Result<Self, SurfaceError> {
        let scale = m.max_norm().max(1.0);
        let hermitian = m.a.im.abs() <= 1e-10 * scale
            && m.d.im.abs() <= 1e-10 * scale
            && (m.b - m.c.conj()).norm() <= 1e-10 * scale;
        let det = m.det();
        let det_ok = (det - Complex64::new(1.0, 0.0)).norm() <= 1e-8;
        let trace_ok = m.trace().re > 0.0;
        if !(hermitian && det_ok && trace_ok) {
            return Err(SurfaceError::NotPositiveDefinite);
        }
        Ok(HermitianPoint { matrix: m })
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    /// Poincaré unit-ball coordinates: with Minkowski components
    /// x₀ = (a+d)/2, x₁ = Re b, x₂ = Im b, x₃ = (a−d)/2, the ball point is
    /// (x₁, x₂, x₃)/(1 + x₀).
    pub fn ball(&self) -> [f64; 3] {
        let m = self.matrix;
        let b = (m.b + m.c.conj()) * Complex64::new(0.5, 0.0);
        let x0 = (m.a.re + m.d.re) / 2.0;
        let x1 = b.re;
        let x2 = b.im;
        let x3 = (m.a.re - m.d.re) / 2.0;
        [x1 / (1.0 + x0), x2 / (1.0 + x0), x3 / (1.0 + x0)]
    }
}

/// Validated conversion straight from a matrix.
pub fn to_ball(m: &Mat2) -> Result<[f64; 3], SurfaceError> {
    Ok(HermitianPoint::new(*m)?.ball())
}

/// An annular-sector sampling grid in polar coordinates.
#[derive(Clone, Copy, Debug)]
pub struct SectorGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub nr: usize,
    pub ntheta: usize,
}

impl SectorGrid {
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let r = self.r_min + (self.r_max - self.r_min) * i as f64 / (self.nr - 1).max(1) as f64;
        let t = self.theta_min
            + (self.theta_max - self.theta_min) * j as f64 / (self.ntheta - 1).max(1) as f64;
        Complex64::from_polar(r, t)
    }
}

/// Which of the two congruent surfaces to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceSide {
    /// x = F·F*.
    Primal,
    /// x# = F⁻¹·(F⁻¹)*.
    Dual,
}

/// A triangulated sample of the immersion in unit-ball coordinates.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub domain: SectorGrid,
    /// Largest |det F − 1| seen while integrating the sampled frames.
    pub max_det_drift: f64,
}

/// Sample the immersion over a sector grid. Frames are integrated from the
/// identity at the sector midpoint, along the arc to each grid angle and then
/// radially; distinct rays are independent.
pub fn immerse(
    data: &SurfaceData,
    grid: &SectorGrid,
    which: SurfaceSide,
) -> Result<Mesh, SurfaceError> {
    immerse_with_density(data, grid, which, DEFAULT_STEPS_PER_UNIT)
}

pub fn immerse_with_density(
    data: &SurfaceData,
    grid: &SectorGrid,
    which: SurfaceSide,
    steps_per_unit: f64,
) -> Result<Mesh, SurfaceError> {
    if grid.nr < 2 || grid.ntheta < 2 || grid.r_min <= 0.0 || grid.r_max <= grid.r_min {
        return Err(SurfaceError::DegenerateGrid);
    }
    let conn = Connection::primal(data)?;
    let r0 = (grid.r_min * grid.r_max).sqrt();
    let t0 = 0.5 * (grid.theta_min + grid.theta_max);
    let base = Complex64::from_polar(r0, t0);
    let base_frame = Frame::identity(base);

    let mut frames: Vec<Option<Frame>> = vec![None; grid.nr * grid.ntheta];
    for j in 0..grid.ntheta {
        let tj = grid.theta_min + (grid.theta_max - grid.theta_min) * j as f64 / (grid.ntheta - 1) as f64;
        let arc = arc_path(r0, t0, tj);
        let at_angle = integrate_frame(&conn, &arc, base_frame, steps_per_unit)?;
        // Walk the ray outward and inward from r0, saving grid samples.
        let mut radii: Vec<(usize, f64)> = (0..grid.nr)
            .map(|i| (i, grid.r_min + (grid.r_max - grid.r_min) * i as f64 / (grid.nr - 1) as f64))
            .collect();
        radii.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let split = radii.partition_point(|&(_, r)| r < r0);
        // Outward pass.
        let mut current = at_angle;
        let mut from_r = r0;
        for &(i, r) in &radii[split..] {
            let path = [Complex64::from_polar(from_r, tj), Complex64::from_polar(r, tj)];
            current = integrate_frame(&conn, &path, current, steps_per_unit)?;
            frames[i * grid.ntheta + j] = Some(current);
            from_r = r;
        }
        // Inward pass.
        let mut current = at_angle;
        let mut from_r = r0;
        for &(i, r) in radii[..split].iter().rev() {
            let path = [Complex64::from_polar(from_r, tj), Complex64::from_polar(r, tj)];
            current = integrate_frame(&conn, &path, current, steps_per_unit)?;
            frames[i * grid.ntheta + j] = Some(current);
            from_r = r;
        }
    }

    let mut vertices = Vec::with_capacity(grid.nr * grid.ntheta);
    let mut max_det_drift = 0.0f64;
    for frame in frames {
        let frame = frame.expect("all grid points visited");
        max_det_drift = max_det_drift.max(frame.det_drift);
        let f = frame.value;
        let x = match which {
            SurfaceSide::Primal => f * f.adjoint(),
            SurfaceSide::Dual => {
                let inv = f.inverse().ok_or(SurfaceError::NotPositiveDefinite)?;
                inv * inv.adjoint()
            }
        };
        let v = HermitianPoint::new(x)?.ball();
        if v[0] * v[0] + v[1] * v[1] + v[2] * v[2] >= 1.0 {
            return Err(SurfaceError::VertexOutsideBall);
        }
        vertices.push(v);
    }

    let mut faces = Vec::with_capacity(2 * (grid.nr - 1) * (grid.ntheta - 1));
    for i in 0..grid.nr - 1 {
        for j in 0..grid.ntheta - 1 {
            let v00 = i * grid.ntheta + j;
            let v10 = (i + 1) * grid.ntheta + j;
            let v11 = (i + 1) * grid.ntheta + j + 1;
            let v01 = i * grid.ntheta + j + 1;
            faces.push([v00, v10, v11]);
            faces.push([v00, v11, v01]);
        }
    }

    Ok(Mesh { vertices, faces, domain: *grid, max_det_drift })
}

/// Polyline along the arc of radius r from angle t0 to t1, in steps ≤ 0.02
/// radians (the RK4 substeps refine each chord further).
fn arc_path(r: f64, t0: f64, t1: f64) -> Vec<Complex64> {
    let span = t1 - t0;
    let n = ((span.abs() / 0.02).ceil() as usize).max(1);
    (0..=n)
        .map(|s| Complex64::from_polar(r, t0 + span * s as f64 / n as f64))
        .collect()
}

/// Write a mesh as Wavefront OBJ: `v x y z` lines then 1-indexed `f i j k`
/// lines, LF endings, 9 significant digits.
pub fn export_obj(mesh: &Mesh, out: &mut dyn Write) -> Result<(), SurfaceError> {
    writeln!(out, "# {} vertices, {} faces", mesh.vertices.len(), mesh.faces.len())?;
    for v in &mesh.vertices {
        writeln!(out, "v {:.8e} {:.8e} {:.8e}", v[0], v[1], v[2])?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

pub fn export_obj_path(mesh: &Mesh, path: &Path) -> Result<(), SurfaceError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    export_obj(mesh, &mut file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmc::test_data::catenoid;
    use crate::cmc::alpha_sharp;
    use crate::series::{Polynomial, SpherePoint, Weight};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Nilpotent connection ((0, 0), (1, 0))·ω as an exact form (the map
    /// g ≡ 0 in the α shape).
    fn nilpotent(omega: Rational) -> Connection {
        Connection::Exact(alpha_sharp(&Rational::zero(Weight::Function), &omega).unwrap())
    }

    #[test]
    fn nilpotent_constant_form_integrates_exactly() {
        // α = ((0,0),(1,0))·dz along 0 → c gives F = ((1,0),(c,1)).
        let omega = Rational::from_poly(Polynomial::one(), Weight::OneForm);
        let conn = nilpotent(omega);
        let target = c(0.7, -0.4);
        let f = integrate_frame(&conn, &[c(0.0, 0.0), target], Frame::identity(c(0.0, 0.0)), 256.0)
            .unwrap();
        let expected = Mat2::new(c(1.0, 0.0), c(0.0, 0.0), target, c(1.0, 0.0));
        assert!(f.value.approx_eq(&expected, 1e-10), "{:?}", f.value);
        assert!(f.det_drift <= 1e-12);
    }

    #[test]
    fn empty_path_returns_initial() {
        let omega = Rational::from_poly(Polynomial::one(), Weight::OneForm);
        let conn = nilpotent(omega);
        let init = Frame::new(Mat2::diag(c(2.0, 0.0), c(0.5, 0.0)), c(1.0, 0.0));
        let f = integrate_frame(&conn, &[c(1.0, 0.0)], init, 256.0).unwrap();
        assert!(f.value.approx_eq(&init.value, 0.0));
    }

    #[test]
    fn nilpotent_log_monodromy() {
        // α = ((0,0),(1,0))·dz/z around the unit circle: F = ((1,0),(2πi,1)).
        let omega =
            Rational::new(Polynomial::one(), Polynomial::variable(), Weight::OneForm).unwrap();
        let conn = nilpotent(omega);
        let path = circle_path(c(0.0, 0.0), 1.0, 64, 0.0);
        let m = monodromy(&conn, &path).unwrap();
        let expected = Mat2::new(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 2.0 * std::f64::consts::PI),
            c(1.0, 0.0),
        );
        assert!(m.approx_eq(&expected, 1e-8), "{m:?}");
        assert!((m.det() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn contractible_loop_monodromy_is_identity() {
        let omega =
            Rational::new(Polynomial::one(), Polynomial::variable(), Weight::OneForm).unwrap();
        let conn = nilpotent(omega);
        // Small circle around z = 3, not enclosing the pole at 0.
        let path = circle_path(c(3.0, 0.0), 0.5, 48, 0.0);
        let m = monodromy(&conn, &path).unwrap();
        assert!(m.approx_eq(&Mat2::identity(), 1e-8));
    }

    #[test]
    fn open_loop_rejected() {
        let omega = Rational::from_poly(Polynomial::one(), Weight::OneForm);
        let conn = nilpotent(omega);
        let path = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)];
        assert!(matches!(monodromy(&conn, &path), Err(SurfaceError::LoopNotClosed(_))));
    }

    #[test]
    fn path_through_pole_rejected() {
        let omega =
            Rational::new(Polynomial::one(), Polynomial::variable(), Weight::OneForm).unwrap();
        let conn = nilpotent(omega);
        let path = [c(-1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(
            integrate_frame(&conn, &path, Frame::identity(path[0]), 256.0),
            Err(SurfaceError::PathHitsSingularity { .. })
        ));
    }

    #[test]
    fn rk4_step_halving_ratio() {
        // Smooth null connection: g = z, ω = dz on a diagonal segment.
        let omega = Rational::from_poly(Polynomial::one(), Weight::OneForm);
        let form = alpha_sharp(&Rational::variable(), &omega).unwrap();
        let conn = Connection::Exact(form);
        let path = [c(0.0, 0.0), c(1.0, 0.5)];
        let run = |steps: f64| {
            integrate_frame(&conn, &path, Frame::identity(path[0]), steps)
                .unwrap()
                .value
        };
        let f1 = run(16.0);
        let f2 = run(32.0);
        let f3 = run(64.0);
        let d12 = (f1 - f2).max_norm();
        let d23 = (f2 - f3).max_norm();
        let ratio = d12 / d23;
        assert!((8.0..=32.0).contains(&ratio), "ratio = {ratio}");
    }

    /// Closed-form catenoid-cousin lift, derived by solving dF = F·α with
    /// power-monomial rows: with p = (1−μ)/2 and q = (1+μ)/2,
    /// F = (1/√μ)·((q z^p, −p z^q), (−p z^{−q}, q z^{−p})), which has det 1
    /// and hyperbolic Gauss map dF₁₁/dF₂₁ = z.
    fn catenoid_frame(mu: f64, z: Complex64) -> Mat2 {
        let s = 1.0 / mu.sqrt();
        let p = (1.0 - mu) / 2.0;
        let q = (1.0 + mu) / 2.0;
        Mat2::new(
            z.powf(p) * c(q * s, 0.0),
            z.powf(q) * c(-p * s, 0.0),
            z.powf(-q) * c(-p * s, 0.0),
            z.powf(-p) * c(q * s, 0.0),
        )
    }

    #[test]
    fn catenoid_frame_satisfies_the_ode() {
        // Finite-difference check that dF = F·α for the closed form.
        let mu = 2.0;
        let data = catenoid(mu);
        let conn = Connection::primal(&data).unwrap();
        let z = c(1.1, 0.4);
        let h = 1e-6;
        let df = (catenoid_frame(mu, z + c(h, 0.0)) - catenoid_frame(mu, z - c(h, 0.0)))
            .scale(c(1.0 / (2.0 * h), 0.0));
        let expected = catenoid_frame(mu, z) * conn.eval(z);
        assert!(df.approx_eq(&expected, 1e-6), "{df:?} vs {expected:?}");
        assert!((catenoid_frame(mu, z).det() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rk4_reproduces_closed_form_frame() {
        let mu = 2.0;
        let data = catenoid(mu);
        let conn = Connection::primal(&data).unwrap();
        let start = c(1.0, 0.0);
        let end = c(0.9, 0.7);
        let init = Frame::new(catenoid_frame(mu, start), start);
        let f = integrate_frame(&conn, &[start, end], init, 512.0).unwrap();
        let expected = catenoid_frame(mu, end);
        assert!(f.value.approx_eq(&expected, 1e-9), "{:?} vs {expected:?}", f.value);
    }

    #[test]
    fn quadrature_of_frame_derivative_recovers_flux() {
        // (1/2πi)·∮ −dF·F⁻¹ along a loop, with dF = F·α from the ODE, must
        // match the residue flux diag(3/4, −3/4) of the μ = 2 catenoid.
        let mu = 2.0;
        let data = catenoid(mu);
        let conn = Connection::primal(&data).unwrap();
        let start = c(1.0, 0.0);
        let n = 512;
        let mut f = Frame::new(catenoid_frame(mu, start), start);
        let mut sum = Mat2::zero();
        for j in 0..n {
            let t0 = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let t1 = 2.0 * std::f64::consts::PI * (j + 1) as f64 / n as f64;
            let z0 = Complex64::from_polar(1.0, t0);
            // Trapezoid in θ of −F α F⁻¹ · dz/dθ.
            let integrand = |fr: &Frame, theta: f64| -> Mat2 {
                let z = Complex64::from_polar(1.0, theta);
                let dz_dtheta = z * c(0.0, 1.0);
                (-(fr.value * conn.eval(z) * fr.value.inverse().unwrap())).scale(dz_dtheta)
            };
            sum = sum + integrand(&f, t0).scale(c(0.5, 0.0));
            let z1 = Complex64::from_polar(1.0, t1);
            f = integrate_frame(&conn, &[z0, z1], f, 512.0).unwrap();
            sum = sum + integrand(&f, t1).scale(c(0.5, 0.0));
        }
        let step = 2.0 * std::f64::consts::PI / n as f64;
        let flux = sum
            .scale(c(step, 0.0))
            .scale(c(1.0, 0.0) / (c(0.0, 2.0 * std::f64::consts::PI)));
        let expected = crate::flux::flux_at_end(&data, SpherePoint::finite(0.0, 0.0))
            .unwrap()
            .matrix();
        assert!(flux.approx_eq(&expected, 1e-6), "{flux:?} vs {expected:?}");
    }

    #[test]
    fn hermitian_point_conversions() {
        let id = HermitianPoint::new(Mat2::identity()).unwrap();
        assert_eq!(id.ball(), [0.0, 0.0, 0.0]);
        // diag(e^t, e^{-t}) → (0, 0, tanh(t/2)).
        let t: f64 = 0.8;
        let m = Mat2::diag(c(t.exp(), 0.0), c((-t).exp(), 0.0));
        let v = HermitianPoint::new(m).unwrap().ball();
        assert!((v[0]).abs() < 1e-14 && (v[1]).abs() < 1e-14);
        assert!((v[2] - (t / 2.0).tanh()).abs() < 1e-12);
        // Non-Hermitian input rejected.
        let bad = Mat2::new(c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(to_ball(&bad), Err(SurfaceError::NotPositiveDefinite)));
    }

    #[test]
    fn immersion_grid_geometry() {
        let data = catenoid(2.0);
        let grid = SectorGrid {
            r_min: 0.75,
            r_max: 1.75,
            theta_min: -2.0,
            theta_max: 2.0,
            nr: 8,
            ntheta: 8,
        };
        let mesh = immerse(&data, &grid, SurfaceSide::Primal).unwrap();
        assert_eq!(mesh.vertices.len(), 64);
        assert_eq!(mesh.faces.len(), 2 * 7 * 7);
        for v in &mesh.vertices {
            assert!(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] < 1.0);
        }
        // Dual and primal meshes agree at the base point (F = identity there):
        // both start at the ball origin region; just check duality runs.
        let dual = immerse(&data, &grid, SurfaceSide::Dual).unwrap();
        assert_eq!(dual.vertices.len(), 64);
    }

    #[test]
    fn obj_export_format() {
        let mesh = Mesh {
            vertices: vec![[0.0, 0.0, 0.0], [0.25, 0.0, 0.0], [0.0, 0.25, 0.0]],
            faces: vec![[0, 1, 2]],
            domain: SectorGrid {
                r_min: 1.0,
                r_max: 2.0,
                theta_min: 0.0,
                theta_max: 1.0,
                nr: 2,
                ntheta: 2,
            },
            max_det_drift: 0.0,
        };
        let mut buf = Vec::new();
        export_obj(&mesh, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with('#'));
        assert!(lines[1].starts_with("v "));
        assert_eq!(lines[4], "f 1 2 3");
        assert!(!text.contains('\r'));

        // Empty mesh → header only.
        let empty = Mesh { vertices: vec![], faces: vec![], domain: mesh.domain, max_det_drift: 0.0 };
        let mut buf = Vec::new();
        export_obj(&empty, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn sectored_connection_rejects_cut_crossing() {
        // μ = 1/2: the primal connection is sectored; a path crossing the
        // negative real axis is rejected.
        let data = catenoid(0.5);
        let conn = Connection::primal(&data).unwrap();
        assert!(conn.is_sectored());
        let path = [c(-1.0, 0.5), c(-1.0, -0.5)];
        assert!(matches!(
            integrate_frame(&conn, &path, Frame::identity(path[0]), 256.0),
            Err(SurfaceError::PathCrossesBranchCut)
        ));
        // A path inside the sector integrates fine.
        let ok_path = [c(1.0, 0.0), c(1.0, 0.5)];
        assert!(integrate_frame(&conn, &ok_path, Frame::identity(ok_path[0]), 256.0).is_ok());
    }

    #[test]
    fn branched_immersion_in_one_sector() {
        let data = catenoid(0.5);
        let grid = SectorGrid {
            r_min: 0.8,
            r_max: 1.6,
            theta_min: -1.5,
            theta_max: 1.5,
            nr: 6,
            ntheta: 6,
        };
        let mesh = immerse(&data, &grid, SurfaceSide::Primal).unwrap();
        assert_eq!(mesh.vertices.len(), 36);
    }
}
