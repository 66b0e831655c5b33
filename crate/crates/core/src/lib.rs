//! Flux computations for conformal CMC-1 surfaces in hyperbolic 3-space.
//!
//! Given rational Weierstrass-type data — a hyperbolic Gauss map `G`, an
//! optional secondary Gauss map `g`, and a Hopf differential `Q` on a
//! punctured Riemann sphere — this crate computes the sl(2,C)-valued flux at
//! each end by residue calculus, classifies ends (Type I / Type II, embedded
//! multiplicity, log-term conditions), verifies the balancing formula, and
//! cross-checks everything against numeric contour quadrature and frame ODE
//! integration, including mesh export of the surface into the Poincaré ball.
//!
//! Module layout mirrors the pipeline:
//! - [`series`]: exact rational-function and Laurent-series arithmetic over ℂ
//!   on the Riemann sphere (residues, orders, chart changes, Schwarzian).
//! - [`cmc`]: the surface data model, the dual form ω# = −Q/dG and the matrix
//!   connection forms α, α#.
//! - [`ends`]: per-end normalization, classification and flux predicates.
//! - [`flux`]: per-end flux matrices, balancing, dual fluxes, η residues and
//!   the contour-quadrature oracle.
//! - [`surface`]: frame ODE integration, monodromy, immersion sampling and
//!   Wavefront OBJ export.
//! - [`instances`]: seeded generators of self-consistent synthetic data used
//!   by the randomized cross-validation suites.

pub mod cmc;
pub mod ends;
pub mod flux;
pub mod instances;
pub mod mat2;
pub mod series;
pub mod surface;

pub use mat2::Mat2;
pub use series::{Polynomial, Rational, SpherePoint, Weight};
