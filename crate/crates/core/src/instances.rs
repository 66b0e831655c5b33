//! Seeded generators of self-consistent synthetic surface data.
//!
//! All generators derive the Hopf differential from freely drawn (G, ω#) via
//! Q := −ω#·dG, so the triple satisfies the defining relation exactly and the
//! pole set of the connection form is known by construction. Coefficients are
//! drawn with moduli bounded away from zero and all special points kept well
//! separated, so downstream root finding and residue extraction stay far from
//! their tolerance floors.
//!
//! Type II end instances additionally impose the no-log-term condition by
//! solving for the decisive ŵ# coefficient: the flux predicates assume
//! single-valued ends, and unconstrained coefficients describe no such
//! surface.

use num_complex::Complex64;
use rand::Rng;

use crate::cmc::SurfaceData;
use crate::series::{Polynomial, Rational, SpherePoint, Weight};

/// A synthetic one-ended local model: surface data on the sphere whose
/// interesting end sits at the origin (the other end is ∞).
#[derive(Clone, Debug)]
pub struct SyntheticEnd {
    pub data: SurfaceData,
    /// The analyzed end (always the origin).
    pub end: SpherePoint,
    /// Intended multiplicity m = −k−1 at the end.
    pub multiplicity: i64,
    /// Intended vanishing order l of G at the end.
    pub gauss_order: i64,
}

fn unit_coeff(rng: &mut impl Rng) -> Complex64 {
    let r = rng.gen_range(0.1..1.0);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

fn poly_from_coeffs(coeffs: Vec<Complex64>) -> Polynomial {
    Polynomial::new(coeffs)
}

/// Monic polynomial with the given roots.
fn poly_from_roots(roots: &[Complex64]) -> Polynomial {
    let mut p = Polynomial::one();
    for &r in roots {
        p = &p * &Polynomial::new(vec![-r, Complex64::new(1.0, 0.0)]);
    }
    p
}

/// Random points in an annulus 0.5 ≤ |z| ≤ 2.5, pairwise at least `sep`
/// apart and at least `sep` away from `avoid`.
fn separated_points(
    rng: &mut impl Rng,
    count: usize,
    sep: f64,
    avoid: &[Complex64],
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < 10_000, "could not place separated points");
        let z = Complex64::from_polar(
            rng.gen_range(0.5..2.5),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        if out.iter().chain(avoid.iter()).all(|w| (z - w).norm() >= sep) {
            out.push(z);
        }
    }
    out
}

/// Roots of a polynomial are pairwise at least `sep` apart and at least
/// `sep` away from every point in `avoid`.
fn roots_separated(p: &Polynomial, sep: f64, avoid: &[Complex64]) -> bool {
    if p.degree().map_or(true, |d| d == 0) {
        return true;
    }
    let rs = crate::series::roots::roots(p);
    for (i, a) in rs.iter().enumerate() {
        if avoid.iter().any(|b| (a - b).norm() < sep) {
            return false;
        }
        for b in rs.iter().skip(i + 1) {
            if (a - b).norm() < sep {
                return false;
            }
        }
    }
    true
}

/// Build the local model G = u^l·Ĝ(u), ω# = u^k·ŵ#(u) du, Q = −ω#·dG with
/// prescribed unit parts, declared on ends {0, ∞}.
fn assemble(
    label: &str,
    l: i64,
    k: i64,
    gauss_unit: Polynomial,
    omega_unit: Polynomial,
) -> SyntheticEnd {
    let one = Complex64::new(1.0, 0.0);
    let gauss = Rational::from_poly(
        &Polynomial::monomial(l as usize, one) * &gauss_unit,
        Weight::Function,
    );
    let omega_sharp = Rational::new(
        omega_unit,
        Polynomial::monomial((-k) as usize, one),
        Weight::OneForm,
    )
    .expect("monomial denominator");
    let hopf = omega_sharp
        .try_mul(&gauss.derivative().expect("weight-0 gauss map"))
        .expect("weight 1+1")
        .neg();
    let data = SurfaceData::new(
        label,
        gauss,
        None,
        Some(hopf),
        vec![SpherePoint::finite(0.0, 0.0), SpherePoint::Infinity],
    )
    .expect("synthetic data is well-formed");
    SyntheticEnd {
        data,
        end: SpherePoint::finite(0.0, 0.0),
        multiplicity: -k - 1,
        gauss_order: l,
    }
}

/// Draw a Ĝ whose derivative-related root structure stays resolvable:
/// d(u^l·Ĝ)/du = u^(l−1)·(l·Ĝ + u·Ĝ′), and the roots of the second factor
/// must stay away from 0 and from each other so the cancellation inside
/// −Q/dG is exact at working precision.
fn draw_gauss_unit(rng: &mut impl Rng, l: i64) -> Polynomial {
    loop {
        let unit = poly_from_coeffs(vec![unit_coeff(rng), unit_coeff(rng), unit_coeff(rng)]);
        let factor = &unit.scale(Complex64::new(l as f64, 0.0))
            + &(&Polynomial::variable() * &unit.derivative());
        if roots_separated(&factor, 0.1, &[Complex64::new(0.0, 0.0)]) {
            return unit;
        }
    }
}

/// A Type II end of multiplicity m ∈ {1, 2} with the no-log-term condition
/// imposed, with the Gauss-map order l drawn from {m+1, m+2, m+3}. The three
/// orders realize the three coefficient regimes: q₋₁ ≠ 0, then q₋₁ = 0 with
/// q₀ ≠ 0, then both zero (vanishing flux).
pub fn type_ii_end(rng: &mut impl Rng, m: i64) -> SyntheticEnd {
    let l = m + 1 + rng.gen_range(0..3);
    type_ii_end_with_order(rng, m, l)
}

/// As [`type_ii_end`] with the order l fixed (l ≥ m+1 keeps the end Type II).
pub fn type_ii_end_with_order(rng: &mut impl Rng, m: i64, l: i64) -> SyntheticEnd {
    assert!(m == 1 || m == 2, "covered multiplicities are 1 and 2");
    assert!(l > m, "Type II requires l ≥ m+1");
    let k = -m - 1;
    let gauss_unit = draw_gauss_unit(rng, l);
    let g0 = gauss_unit.coeff(0);
    let g1 = gauss_unit.coeff(1);
    let lf = Complex64::new(l as f64, 0.0);

    let w0 = unit_coeff(rng);
    // q(u) = −u^{k+l−1}·ŵ#(u)·(l·Ĝ(u) + u·Ĝ′(u)); impose the vanishing of
    // the end ODE's log term by solving for the flux-carrying coefficient.
    let (w1, w2) = match m {
        1 => {
            // q₋₁ = −w₀·l·Ĝ(0) when l = 2, otherwise 0; no-log: w₁ = −q₋₁w₀.
            let q_m1 = if l == 2 { -w0 * lf * g0 } else { Complex64::new(0.0, 0.0) };
            let w1 = -q_m1 * w0;
            (w1, unit_coeff(rng))
        }
        _ => {
            let w1 = unit_coeff(rng);
            let b0 = w0 * lf * g0;
            let b1 = w1 * lf * g0 + w0 * Complex64::new((l + 1) as f64, 0.0) * g1;
            let q_m1 = if l == 3 { -b0 } else { Complex64::new(0.0, 0.0) };
            let q_0 = match l {
                3 => -b1,
                4 => -b0,
                _ => Complex64::new(0.0, 0.0),
            };
            // 4w₂ = −q₀w₀ − 3q₋₁w₁ − q₋₁²w₀.
            let w2 = (-q_0 * w0
                - Complex64::new(3.0, 0.0) * q_m1 * w1
                - q_m1 * q_m1 * w0)
                / Complex64::new(4.0, 0.0);
            (w1, w2)
        }
    };

    let omega_unit = poly_from_coeffs(vec![w0, w1, w2]);
    assemble("synthetic type II end", l, k, gauss_unit, omega_unit)
}

/// A multiplicity-2 Type II end with q₋₁ ≠ 0 whose flux vanishes: the
/// combination 4(q₀ − q₋₁·Ĝ′(0)/Ĝ(0)) + q₋₁² is forced to zero by solving
/// for w₁ (the no-log condition then makes w₂, hence the flux, vanish).
pub fn type_ii_flux_boundary_end(rng: &mut impl Rng) -> SyntheticEnd {
    let (m, l) = (2, 3);
    let k = -m - 1;
    let gauss_unit = draw_gauss_unit(rng, l);
    let g0 = gauss_unit.coeff(0);
    let g1 = gauss_unit.coeff(1);
    let lf = Complex64::new(l as f64, 0.0);

    let w0 = unit_coeff(rng);
    let q_m1 = -w0 * lf * g0;
    let q_0 = q_m1 * g1 / g0 - q_m1 * q_m1 / Complex64::new(4.0, 0.0);
    // Invert q₀ = −(w₁·l·Ĝ(0) + w₀·(l+1)·Ĝ′(0)).
    let w1 = -(q_0 + w0 * Complex64::new((l + 1) as f64, 0.0) * g1) / (lf * g0);
    let w2 = (-q_0 * w0 - Complex64::new(3.0, 0.0) * q_m1 * w1 - q_m1 * q_m1 * w0)
        / Complex64::new(4.0, 0.0);

    let omega_unit = poly_from_coeffs(vec![w0, w1, w2]);
    let mut out = assemble("synthetic boundary end", l, k, gauss_unit, omega_unit);
    out.data.label = "type II end with vanishing flux, q_-1 nonzero".into();
    out
}

/// A Type I end: k + l = −1, so Q has a genuine double pole at the origin.
pub fn type_i_end(rng: &mut impl Rng) -> SyntheticEnd {
    let l = rng.gen_range(1..=3);
    let k = -1 - l;
    let gauss_unit = draw_gauss_unit(rng, l);
    let omega_unit = poly_from_coeffs(vec![unit_coeff(rng), unit_coeff(rng), unit_coeff(rng)]);
    assemble("synthetic type I end", l, k, gauss_unit, omega_unit)
}

/// A global rational surface with every pole of the connection form declared
/// as an end: G and ω# are drawn with prescribed well-separated roots and
/// poles, Q := −ω#·dG, and the end list is read off the connection form.
pub fn balanced_surface(rng: &mut impl Rng) -> SurfaceData {
    loop {
        let n_gauss_zeros = rng.gen_range(1..=2);
        let n_gauss_poles = rng.gen_range(0..=1);
        let n_omega_poles = rng.gen_range(1..=2);
        let total = n_gauss_zeros + n_gauss_poles + n_omega_poles;
        let points = separated_points(rng, total, 0.5, &[]);
        let (gz, rest) = points.split_at(n_gauss_zeros);
        let (gp, op) = rest.split_at(n_gauss_poles);

        let gauss = match Rational::new(
            poly_from_roots(gz).scale(unit_coeff(rng)),
            poly_from_roots(gp),
            Weight::Function,
        ) {
            Ok(g) => g,
            Err(_) => continue,
        };
        // dG's numerator roots must stay resolvable for the ω# cancellation.
        let dg = match gauss.derivative() {
            Ok(d) => d,
            Err(_) => continue,
        };
        if dg.is_zero() || !roots_separated(dg.num(), 0.1, &[]) {
            continue;
        }

        let mut omega_den = Polynomial::one();
        for &p in op {
            let order = rng.gen_range(1..=2);
            for _ in 0..order {
                omega_den = &omega_den * &poly_from_roots(&[p]);
            }
        }
        let omega_num = poly_from_coeffs(vec![unit_coeff(rng), unit_coeff(rng)]);
        let omega_sharp = match Rational::new(omega_num, omega_den, Weight::OneForm) {
            Ok(o) => o,
            Err(_) => continue,
        };

        let hopf = match omega_sharp.try_mul(&dg) {
            Ok(q) => q.neg(),
            Err(_) => continue,
        };
        let data = match SurfaceData::new("synthetic balanced surface", gauss, None, Some(hopf), vec![]) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let form = match data.alpha_sharp() {
            Ok(f) => f,
            Err(_) => continue,
        };
        let ends = form.poles();
        if ends.is_empty() {
            continue;
        }
        let mut data = data;
        data.ends = ends;
        return data;
    }
}

/// A rational 1-form of degree ≤ 6 with well-separated finite poles, for
/// whole-sphere residue bookkeeping.
pub fn one_form(rng: &mut impl Rng) -> Rational {
    let n_poles = rng.gen_range(1..=3);
    let points = separated_points(rng, n_poles, 0.5, &[]);
    let mut den = Polynomial::one();
    for &p in &points {
        let order = rng.gen_range(1..=2);
        for _ in 0..order {
            den = &den * &poly_from_roots(&[p]);
        }
    }
    let num_deg = rng.gen_range(0..=den.degree().unwrap_or(1));
    let num = poly_from_coeffs((0..=num_deg).map(|_| unit_coeff(rng)).collect());
    Rational::new(num, den, Weight::OneForm).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::{classify_end, EndType};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn type_ii_instances_classify_as_intended() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [1i64, 2] {
            for _ in 0..20 {
                let inst = type_ii_end(&mut rng, m);
                let e = classify_end(&inst.data, inst.end).unwrap();
                assert_eq!(e.end_type, EndType::TypeII);
                assert_eq!(e.multiplicity, m);
                assert_eq!(e.gauss_order, inst.gauss_order);
                assert_eq!(e.log_term_vanishes, Some(true), "no-log imposed by construction");
            }
        }
    }

    #[test]
    fn type_i_instances_classify_as_intended() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let inst = type_i_end(&mut rng);
            let e = classify_end(&inst.data, inst.end).unwrap();
            assert_eq!(e.end_type, EndType::TypeI);
            assert_eq!(e.gauss_order + e.omega_order, -1);
        }
    }

    #[test]
    fn boundary_instance_has_nonzero_q_minus1() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let inst = type_ii_flux_boundary_end(&mut rng);
        let e = classify_end(&inst.data, inst.end).unwrap();
        assert_eq!(e.end_type, EndType::TypeII);
        assert_eq!(e.multiplicity, 2);
        assert!(e.q_minus1.norm() > 0.01);
        assert_eq!(e.flux_nonzero_predicted, Some(false));
    }

    #[test]
    fn balanced_surface_declares_all_poles() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let data = balanced_surface(&mut rng);
            let report = crate::flux::balance(&data, 1e-9).unwrap();
            assert!(report.balanced, "total = {:?}", report.total);
        }
    }
}
