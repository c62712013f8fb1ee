//! Geometry and line integrals on `S^d`.

mod arc;
mod circle;
mod curve;
mod cycle;
mod point;
mod segment;

pub use arc::{arcs_intersect, great_arc, Arc, ArcIntersection};
pub use circle::SmallCircle;
pub use curve::Curve;
pub(crate) use curve::NodeAlloc;
pub use cycle::{assemble_cycle, is_simple, Simplicity};
pub use point::{NodeId, Point, UNIT_TOL};
pub use segment::{CurveFamily, Reparam, Segment, SegmentKind};

/// Coordinates of consecutive segment endpoints must agree to this tolerance.
pub const ENDPOINT_TOL: f64 = 1e-9;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
