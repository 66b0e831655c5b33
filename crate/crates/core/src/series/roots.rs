//! Polynomial root finding: Durand–Kerner iteration with cluster detection
//! and Newton refinement of multiple roots.
//!
//! Adequate for the desk-scale degrees (≤ ~16) this crate handles. Multiple
//! roots come out of Durand–Kerner as a scatter of radius ~ε^(1/m); clusters
//! are collapsed to their centroid and refined via Newton on the (m−1)-th
//! derivative, where the root is simple again.

use num_complex::Complex64;

use super::Polynomial;

const MAX_ITERS: usize = 800;
const STEP_TOL: f64 = 1e-14;
/// Roots closer than this (relative to 1 + |root|) are treated as one
/// multiple root. Durand–Kerner scatters a multiplicity-m root over a radius
/// of roughly ε^(1/m); for m ≤ 6 that stays below this threshold, while all
/// genuinely distinct roots handled by this crate are separated well above it.
const CLUSTER_TOL: f64 = 2e-2;

/// All complex roots (with repetition) of a nonconstant polynomial.
pub fn roots(p: &Polynomial) -> Vec<Complex64> {
    let deg = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    let lead = p.leading().unwrap();
    let monic: Vec<Complex64> = p.coeffs().iter().map(|&c| c / lead).collect();

    // Cauchy bound for the root radius.
    let bound = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);

    // Standard spiral start, never symmetric with respect to real coefficients.
    let seed = Complex64::new(0.4, 0.9);
    let mut xs: Vec<Complex64> = (0..deg)
        .map(|j| seed.powu(j as u32 + 1) * (bound / seed.norm()))
        .collect();

    let eval = |z: Complex64| -> Complex64 {
        monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };

    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for j in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..deg {
                if k != j {
                    denom *= xs[j] - xs[k];
                }
            }
            if denom.norm() < 1e-300 {
                // Coincident iterates; nudge apart.
                xs[j] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = eval(xs[j]) / denom;
            xs[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + xs[j].norm()));
        }
        if max_step < STEP_TOL {
            break;
        }
    }
    xs
}

/// Roots grouped into (root, multiplicity) pairs, with multiple roots refined
/// by Newton iteration on the (m−1)-th derivative.
pub fn roots_with_multiplicity(p: &Polynomial) -> Vec<(Complex64, usize)> {
    let raw = roots(p);
    let n = raw.len();

    // Single-linkage clustering: a straggling iterate of a multiple root can
    // sit farther from the centroid than from its nearest cluster member.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let tol = CLUSTER_TOL * (1.0 + raw[i].norm().min(raw[j].norm()));
            if (raw[i] - raw[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..n {
        let rep = find(&mut parent, i);
        if !seen.contains(&rep) {
            seen.push(rep);
            let members: Vec<Complex64> = (0..n)
                .filter(|&j| find(&mut parent, j) == rep)
                .map(|j| raw[j])
                .collect();
            let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
            clusters.push((centroid, members.len()));
        }
    }

    for (root, mult) in clusters.iter_mut() {
        *root = refine(p, *root, *mult);
    }
    clusters
}

/// Newton refinement: a root of multiplicity m of p is a simple root of
/// p^(m−1).
fn refine(p: &Polynomial, start: Complex64, multiplicity: usize) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..multiplicity {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut x = start;
    for _ in 0..60 {
        let dv = dq.eval(x);
        if dv.norm() < 1e-300 {
            break;
        }
        let step = q.eval(x) / dv;
        x -= step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}
