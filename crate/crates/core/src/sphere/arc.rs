use std::f64::consts::{PI, TAU};

use super::{dist, dot, norm, Point, UNIT_TOL};
use crate::{Error, Result};

/// Tolerance for deciding coplanarity and angular containment.
const INTERSECT_TOL: f64 = 1e-9;

/// A great-circle arc `θ ↦ u cos θ + v sin θ` for `θ ∈ [start, end]`.
///
/// The parametrization is unit speed in `θ`, so the length is `end - start`.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    u: Point,
    v: Point,
    start: f64,
    end: f64,
}

impl Arc {
    pub fn new(u: Point, v: Point, start: f64, end: f64) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: v.dim(),
            });
        }
        if u.dot(&v).abs() > UNIT_TOL {
            return Err(Error::InvariantViolation(format!(
                "arc frame is not orthogonal (<u,v> = {:e})",
                u.dot(&v)
            )));
        }
        let span = end - start;
        if !(0.0..=TAU + 1e-12).contains(&span) {
            return Err(Error::InvariantViolation(format!("arc span {span} outside [0, 2pi]")));
        }
        Ok(Self { u, v, start, end })
    }

    pub fn u(&self) -> &Point {
        &self.u
    }

    pub fn v(&self) -> &Point {
        &self.v
    }

    pub fn span(&self) -> (f64, f64) {
        (self.start, self.end)
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn point_at_angle(&self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::from_raw(
            self.u
                .coords()
                .iter()
                .zip(self.v.coords())
                .map(|(a, b)| a * c + b * s)
                .collect(),
        )
    }

    pub fn start_point(&self) -> Point {
        self.point_at_angle(self.start)
    }

    pub fn end_point(&self) -> Point {
        self.point_at_angle(self.end)
    }

    /// The same image traversed backwards.
    pub fn reversed(&self) -> Arc {
        Arc {
            u: self.u.clone(),
            v: self.v.neg(),
            start: -self.end,
            end: -self.start,
        }
    }

    /// Restricts the arc to the fraction `[a, b] ⊂ [0, 1]` of its span.
    pub fn sub_arc(&self, a: f64, b: f64) -> Arc {
        let len = self.length();
        Arc {
            u: self.u.clone(),
            v: self.v.clone(),
            start: self.start + a * len,
            end: self.start + b * len,
        }
    }

    /// Applies a linear isometry to the frame.
    pub fn map_frame<F>(&self, f: F) -> Arc
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        Arc {
            u: Point::from_raw(f(self.u.coords())),
            v: Point::from_raw(f(self.v.coords())),
            start: self.start,
            end: self.end,
        }
    }

    /// Angular coordinate of `x` in this arc's frame, if `x` lies on the arc.
    fn contains(&self, x: &[f64]) -> bool {
        let theta = dot(x, self.v.coords()).atan2(dot(x, self.u.coords()));
        (-2..=2).any(|k| {
            let th = theta + TAU * k as f64;
            th >= self.start - INTERSECT_TOL && th <= self.end + INTERSECT_TOL
        })
    }
}

/// Minimal great-circle arc from `p` to `q`.
pub fn great_arc(p: &Point, q: &Point) -> Result<Arc> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let c = p.dot(q).clamp(-1.0, 1.0);
    // Orthogonal component of q relative to p.
    let w: Vec<f64> = q.coords().iter().zip(p.coords()).map(|(qi, pi)| qi - c * pi).collect();
    let wn = norm(&w);
    if wn < 1e-12 {
        return Err(if c > 0.0 {
            Error::CoincidentPoints
        } else {
            Error::AntipodalPoints
        });
    }
    let v = Point::from_raw(w.iter().map(|x| x / wn).collect());
    let angle = wn.atan2(c);
    Ok(Arc {
        u: p.clone(),
        v,
        start: 0.0,
        end: angle,
    })
}

/// Intersection of two arcs: isolated points and shared sub-arcs.
#[derive(Clone, Debug, Default)]
pub struct ArcIntersection {
    pub points: Vec<Point>,
    pub overlaps: Vec<Arc>,
}

impl ArcIntersection {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.overlaps.is_empty()
    }
}

/// Intersects two great-circle arcs.
///
/// The point `u1 cos θ + v1 sin θ` lies on the second plane iff
/// `cos θ r_u + sin θ r_v = 0`, where `r_u, r_v` are the residuals of the first
/// frame after projecting onto the second plane. The rank of `[r_u r_v]`
/// separates the disjoint, single-line and coplanar cases.
pub fn arcs_intersect(a1: &Arc, a2: &Arc) -> ArcIntersection {
    let mut out = ArcIntersection::default();
    if a1.dim() != a2.dim() {
        return out;
    }
    let (u1, v1) = (a1.u.coords(), a1.v.coords());
    let (u2, v2) = (a2.u.coords(), a2.v.coords());
    let residual = |x: &[f64]| -> Vec<f64> {
        let cu = dot(x, u2);
        let cv = dot(x, v2);
        x.iter().zip(u2).zip(v2).map(|((xi, ui), vi)| xi - cu * ui - cv * vi).collect()
    };
    let ru = residual(u1);
    let rv = residual(v1);
    let (nu, nv) = (norm(&ru), norm(&rv));

    if nu.max(nv) <= INTERSECT_TOL {
        coplanar(a1, a2, &mut out);
        return out;
    }
    // Modified Gram-Schmidt on the larger column first.
    let (first, second, swapped) = if nu >= nv { (&ru, &rv, false) } else { (&rv, &ru, true) };
    let nf = norm(first);
    let k = dot(second, first) / (nf * nf);
    let w: Vec<f64> = second.iter().zip(first.iter()).map(|(s, f)| s - k * f).collect();
    if norm(&w) > INTERSECT_TOL {
        return out;
    }
    // second = k * first, so the null vector is (-k, 1) in (first, second) order.
    let (c, s) = if swapped { (1.0, -k) } else { (-k, 1.0) };
    let theta = s.atan2(c);
    for th in [theta, theta + PI] {
        let x = a1.point_at_angle(th);
        if a1.contains(x.coords()) && a2.contains(x.coords()) {
            out.points.push(x);
        }
    }
    out
}

fn coplanar(a1: &Arc, a2: &Arc, out: &mut ArcIntersection) {
    let (u1, v1) = (a1.u.coords(), a1.v.coords());
    let phi = dot(a2.u.coords(), v1).atan2(dot(a2.u.coords(), u1));
    let perp: Vec<f64> = u1.iter().zip(v1).map(|(u, v)| -phi.sin() * u + phi.cos() * v).collect();
    let orient = if dot(a2.v.coords(), &perp) >= 0.0 { 1.0 } else { -1.0 };
    let (c, d) = if orient > 0.0 {
        (phi + a2.start, phi + a2.end)
    } else {
        (phi - a2.end, phi - a2.start)
    };
    for k in -3..=3 {
        let shift = TAU * k as f64;
        let lo = a1.start.max(c + shift);
        let hi = a1.end.min(d + shift);
        if hi < lo - INTERSECT_TOL {
            continue;
        }
        if hi - lo <= INTERSECT_TOL {
            let p = a1.point_at_angle(0.5 * (lo + hi));
            if !out.points.iter().any(|q| dist(q.coords(), p.coords()) < 1e-7) {
                out.points.push(p);
            }
        } else {
            out.overlaps.push(Arc {
                u: a1.u.clone(),
                v: a1.v.clone(),
                start: lo,
                end: hi,
            });
        }
    }
    let overlaps = out.overlaps.clone();
    out.points.retain(|p| !overlaps.iter().any(|o| o.contains(p.coords())));
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(c: &[f64]) -> Point {
        Point::normalized(c.to_vec()).unwrap()
    }

    #[test]
    fn orthogonal_points_give_quarter_arc() {
        let a = great_arc(&p(&[1.0, 0.0, 0.0]), &p(&[0.0, 1.0, 0.0])).unwrap();
        assert!((a.length() - FRAC_PI_2).abs() < 1e-15);
        assert!(dist(a.end_point().coords(), &[0.0, 1.0, 0.0]) < 1e-15);
    }

    #[test]
    fn degenerate_endpoints_are_rejected() {
        let e = p(&[1.0, 0.0, 0.0]);
        assert!(matches!(great_arc(&e, &e.neg()), Err(Error::AntipodalPoints)));
        assert!(matches!(great_arc(&e, &e), Err(Error::CoincidentPoints)));
    }

    #[test]
    fn arc_length_matches_arccos_of_dot() {
        let q = p(&[0.3f64.cos(), 0.3f64.sin() * 0.6, 0.3f64.sin() * 0.8]);
        let a = great_arc(&p(&[1.0, 0.0, 0.0]), &q).unwrap();
        let expected = (0.3f64.cos()).acos();
        assert!((a.length() - expected).abs() < 1e-12);
        assert!((a.length() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn equatorial_quarters_share_one_point() {
        let x = p(&[1.0, 0.0, 0.0]);
        let y = p(&[0.0, 1.0, 0.0]);
        let nx = x.neg();
        let a1 = great_arc(&x, &y).unwrap();
        let a2 = great_arc(&y, &nx).unwrap();
        let i = arcs_intersect(&a1, &a2);
        assert!(i.overlaps.is_empty());
        assert_eq!(i.points.len(), 1);
        assert!(dist(i.points[0].coords(), y.coords()) < 1e-12);
    }

    #[test]
    fn orthogonal_circles_disjoint_windows() {
        let a1 = great_arc(&p(&[1.0, 0.0, 0.0]), &p(&[1.0, 1.0, 0.0])).unwrap();
        let a2 = great_arc(&p(&[0.0, 1.0, 0.2]), &p(&[0.0, 0.0, 1.0])).unwrap();
        assert!(arcs_intersect(&a1, &a2).is_empty());
    }

    #[test]
    fn same_circle_overlapping_windows_share_subarc() {
        let u = p(&[1.0, 0.0, 0.0]);
        let v = p(&[0.0, 1.0, 0.0]);
        let a1 = Arc::new(u.clone(), v.clone(), 0.0, 1.5).unwrap();
        let a2 = Arc::new(u, v, 1.0, 2.5).unwrap();
        let i = arcs_intersect(&a1, &a2);
        assert_eq!(i.overlaps.len(), 1);
        assert!((i.overlaps[0].length() - 0.5).abs() < 1e-12);
        // Opposite orientation gives the same overlap.
        let i2 = arcs_intersect(&a1, &a2.reversed());
        assert!((i2.overlaps[0].length() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn crossing_arcs_in_four_dimensions() {
        let a1 = great_arc(&p(&[1.0, -1.0, 0.0, 0.0]), &p(&[1.0, 1.0, 0.0, 0.0])).unwrap();
        let a2 = great_arc(&p(&[1.0, 0.0, -1.0, 0.0]), &p(&[1.0, 0.0, 1.0, 0.0])).unwrap();
        let i = arcs_intersect(&a1, &a2);
        assert_eq!(i.points.len(), 1);
        assert!(dist(i.points[0].coords(), &[1.0, 0.0, 0.0, 0.0]) < 1e-12);
        // Generic planes in R^4 meet only at the origin.
        let a3 = great_arc(&p(&[0.0, 0.0, 1.0, 0.0]), &p(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(arcs_intersect(&a1, &a3).is_empty());
    }

    #[test]
    fn reversed_arc_has_same_image() {
        let a = great_arc(&p(&[1.0, 0.0, 0.0]), &p(&[0.0, 0.6, 0.8])).unwrap();
        let r = a.reversed();
        assert!(dist(r.start_point().coords(), a.end_point().coords()) < 1e-15);
        assert!(dist(r.end_point().coords(), a.start_point().coords()) < 1e-15);
    }
}
