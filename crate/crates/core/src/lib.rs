//! Weighted and approximate spherical t-design curves.
//!
//! The crate builds closed curves on spheres whose line integrals reproduce
//! sphere averages of low-degree polynomials, and certifies them numerically
//! by comparing curve integrals of the monomial basis against closed-form
//! sphere averages.
//!
//! Module map:
//!
//! * [`sphere`]: points, great-circle arcs, piecewise curves, line integrals
//!   and self-intersection tests on `S^d`.
//! * [`poly`]: the monomial basis of `P_t(S^d)`, exact sphere averages and
//!   monomial sup-norms.
//! * [`design_sets`]: weighted t-design point sets, built-in families and JSON
//!   persistence.
//! * [`weighted`]: weighted t-design curves (`w_{X,M}`, the explicit `S^2` and
//!   `S^3` curves, the Hopf lift) and corner smoothing.
//! * [`projective`]: complex projective space, fibers and projective designs.
//! * [`assembly`]: spanning trees over projective designs and the fiber
//!   connecting construction of approximate design cycles.
//! * [`hybrid`]: hybrid designs mixing a point set and a curve.

pub mod assembly;
pub mod design_sets;
pub mod dual;
mod error;
pub mod hybrid;
pub mod poly;
pub mod projective;
pub mod quadrature;
pub mod report;
pub mod sphere;
pub mod weighted;

pub use error::{Error, Result};
pub use report::DesignReport;

/// Pass tolerance shared by every verification routine.
pub const DESIGN_TOLERANCE: f64 = 1e-9;
