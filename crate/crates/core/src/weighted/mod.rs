//! Weighted t-design curves: `∫_0^1 f(γ(s)) ds` equals the sphere average of
//! every polynomial `f` of degree `<= t`.
//!
//! * [`build_wxm`] turns a weighted design set on `S^{d-1}` with `2N` points
//!   into a curve on `S^d` sweeping pole to pole once per point.
//! * [`explicit_s2`] is the closed-form `S^2` curve built on the regular
//!   `2t`-gon with a phase spin `θ_1`.
//! * [`lift_s3`] lifts a weighted `⌊t/2⌋`-design curve on `S^2` through the
//!   Hopf map to a weighted `t`-design curve on `S^3`; [`explicit_s3`]
//!   composes it with [`explicit_s2`].
//! * [`smooth_curve`] rounds corners at a controlled length cost.

mod families;
mod phase;
mod rotation;
mod smooth;

use std::f64::consts::PI;
use std::sync::Arc as Shared;

pub use families::{ArcFamily, ExplicitS2Piece, LiftPiece, WxmPiece};
pub use phase::{parse_angle, PhaseFunction, CLOSURE_TOL};
pub use rotation::RotationPath;
pub use smooth::{smooth_curve, BlendFamily, SmoothedCurve};

use crate::design_sets::WeightedDesignSet;
use crate::poly::{monomial_basis, MonomialSet};
use crate::sphere::{Curve, CurveFamily, NodeAlloc, NodeId, Reparam, Segment, SegmentKind};
use crate::{DesignReport, Error, Result};

/// Required distance of the lifted base curve from `α_R = -1`.
pub const SOUTH_POLE_MARGIN: f64 = 1e-6;

/// How the first coordinate of `w_{X,M}` is distributed over the curve
/// parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HeightProfile {
    /// `w_R` linear in the parameter: the pull-back of the uniform measure
    /// on `[-1, 1]`. This is the height distribution of `S^2` only.
    #[default]
    Linear,
    /// `w_R` distributed like the first coordinate of a uniform point on
    /// `S^d` (density `∝ (1 - w^2)^{(d-2)/2}`). Agrees with `Linear` on `S^2`.
    SphereMarginal,
}

/// `w_{X,M}` for a design set with an even number of points, with the linear
/// height profile. Piece `i` occupies `[Λ_{i-1}, Λ_i]`; its first coordinate
/// runs `-1 → 1` for odd `i` and back for even `i`, so consecutive pieces meet
/// at the poles `±e_1`.
///
/// On `S^2` the result is a weighted design of the set's strength. On higher
/// spheres the linear profile misses the height distribution of `S^d`
/// (already `x_1^2` averages to `1/3` instead of `1/(d+1)`); use
/// [`build_wxm_with`] and [`HeightProfile::SphereMarginal`] there.
pub fn build_wxm(set: &WeightedDesignSet, rotation: RotationPath) -> Result<Curve> {
    build_wxm_with(set, rotation, HeightProfile::Linear)
}

pub fn build_wxm_with(set: &WeightedDesignSet, rotation: RotationPath, profile: HeightProfile) -> Result<Curve> {
    if set.len() % 2 != 0 {
        return Err(Error::OddSetSize(set.len()));
    }
    if rotation.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rotation.dim(),
        });
    }
    let reparam = match profile {
        HeightProfile::Linear => Reparam::Cosine,
        HeightProfile::SphereMarginal => Reparam::SinePower(set.dim() as u32 - 1),
    };
    let rotation = Shared::new(rotation);
    let n = set.len();
    let segments = set
        .points()
        .iter()
        .zip(set.weights())
        .enumerate()
        .map(|(i, (x, &w))| {
            let piece = WxmPiece {
                x: x.coords().to_vec(),
                sign: if i % 2 == 0 { 1.0 } else { -1.0 },
                rotation: rotation.clone(),
                reparam,
            };
            Segment::formula(Shared::new(piece), w, NodeId(i as u64), NodeId(((i + 1) % n) as u64))
        })
        .collect();
    Curve::new(segments)
}

/// The explicit weighted `(2t-1)`-design curve on `S^2` with `2t` pieces.
/// Its length is `2πt` for constant `θ_1` and larger otherwise.
pub fn explicit_s2(t: usize, theta1: PhaseFunction) -> Result<Curve> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let n = 2 * t;
    let segments = (0..n)
        .map(|k| {
            let piece = ExplicitS2Piece {
                t,
                k,
                theta1: theta1.clone(),
            };
            Segment::formula(Shared::new(piece), 1.0 / n as f64, NodeId(k as u64), NodeId(((k + 1) % n) as u64))
        })
        .collect();
    Curve::new(segments)
}

/// Lifts a weighted `⌊t/2⌋`-design curve `α` on `S^2` to a weighted
/// `t`-design curve on `S^3`: `α` is traversed `t + 1` times at
/// `r = (t+1)s - ⌊(t+1)s⌋` while the Hopf fiber phase advances by
/// `2πs + θ(r)`.
pub fn lift_s3(base: &Curve, theta: PhaseFunction, t: usize) -> Result<Curve> {
    lift(base, &theta, (t + 1) as f64, [0, 1, 2], Some(t / 2))
}

/// The explicit weighted `(4t-1)`-design curve on `S^3`: the lift of
/// [`explicit_s2`] with coordinates reordered to `(α_3, α_2, α_1)` and
/// `r = 4ts - ⌊4ts⌋`.
///
/// `strict_formula` uses `r = 4πts - ⌊4πts⌋` instead; the base curve is then
/// traversed a non-integer number of times and the result is an open curve.
pub fn explicit_s3(t: usize, theta1: PhaseFunction, theta2: PhaseFunction, strict_formula: bool) -> Result<Curve> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let step = PI * gcd(t, 2) as f64 / t as f64;
    let v = theta1.eval(0.0);
    if (v - step * (v / step).round()).abs() < 1e-12 {
        return Err(Error::PhaseExclusionViolation { value: v });
    }
    let base = explicit_s2(t, theta1)?;
    let freq = if strict_formula { 4.0 * PI * t as f64 } else { 4.0 * t as f64 };
    lift(&base, &theta2, freq, [2, 1, 0], Some(2 * t - 1))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Shared lift machinery. The lifted curve traverses the base curve once
/// per unit of `freq * s`; a non-integer `freq` ends part way through a
/// traversal and gives an open curve.
pub(crate) fn lift(
    base: &Curve,
    theta: &PhaseFunction,
    freq: f64,
    axes: [usize; 3],
    base_strength: Option<usize>,
) -> Result<Curve> {
    if base.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: base.dim(),
        });
    }
    if !base.is_closed() {
        return Err(Error::InvalidArgument("base curve must be closed".into()));
    }
    if !(freq >= 1.0) {
        return Err(Error::InvalidArgument(format!("lift frequency {freq} must be at least 1")));
    }
    theta.check_closure()?;
    let mut min = f64::INFINITY;
    for seg in base.segments() {
        for k in 0..=256 {
            min = min.min(seg.position(k as f64 / 256.0)[axes[0]]);
        }
    }
    if min <= -1.0 + SOUTH_POLE_MARGIN {
        return Err(Error::SouthPoleViolation { min });
    }
    if let Some(s) = base_strength {
        let r = verify_weighted_curve(base, s, crate::DESIGN_TOLERANCE)?;
        if !r.pass {
            return Err(Error::StrengthViolation {
                t: s,
                max_defect: r.max_defect,
            });
        }
    }

    let mut families = Vec::with_capacity(base.segments().len());
    for seg in base.segments() {
        let family: Shared<dyn CurveFamily> = match (&seg.kind, seg.plain_family()) {
            (SegmentKind::Arc(a), _) => Shared::new(ArcFamily(a.clone())),
            (_, Some(f)) => f.clone(),
            _ => {
                return Err(Error::InvalidArgument(
                    "lift needs base pieces covering their whole formula range".into(),
                ))
            }
        };
        families.push(family);
    }

    let span = NodeAlloc::after(base.segments()).next().0;
    let node = |traversal: u64, id: NodeId| NodeId(traversal * span + id.0);
    let whole = freq.floor() as u64;
    let partial = freq - whole as f64;
    let closed = partial < 1e-12;
    let traversals = if closed { whole } else { whole + 1 };
    let mut fresh = NodeAlloc(traversals * span);
    let mut out: Vec<Segment> = Vec::new();
    'outer: for n in 0..traversals {
        let limit = if n == whole { partial } else { 1.0 };
        for (i, (seg, family)) in base.segments().iter().zip(&families).enumerate() {
            let (r0, w) = (base.breakpoints()[i], seg.param_weight);
            if r0 >= limit {
                break 'outer;
            }
            let piece = LiftPiece {
                base: family.clone(),
                axes,
                r0,
                weight: w,
                freq,
                traversal: n as f64,
                theta: theta.clone(),
            };
            let start = node(n, seg.start);
            if r0 + w > limit {
                let reparam = family.reparam();
                let u = reparam.inverse((limit - r0) / w);
                let weight = w * reparam.sigma(u) / freq;
                out.push(Segment::formula(Shared::new(piece), weight, start, fresh.next()).with_window(0.0, u));
                break 'outer;
            }
            let last = i + 1 == base.segments().len();
            let end = match (last, n + 1 == traversals && closed) {
                (true, true) => node(0, seg.end),
                (true, false) => node(n + 1, seg.end),
                _ => node(n, seg.end),
            };
            out.push(Segment::formula(Shared::new(piece), w / freq, start, end));
        }
    }
    Curve::with_normalized_weights(out)
}

/// Per-monomial defects `|∫_0^1 x^α(γ(s)) ds - avg(x^α)|` over degree `<= t`.
/// The report also carries the curve length.
pub fn verify_weighted_curve(curve: &Curve, t: usize, tolerance: f64) -> Result<DesignReport> {
    let set = MonomialSet::new(curve.dim(), t);
    let ints = curve.param_integrals(set.len(), |x, out| set.eval_into(x, out))?;
    let defects: Vec<f64> = ints.iter().zip(set.averages()).map(|(i, a)| (i - a).abs()).collect();
    let mut report = DesignReport::from_defects(t, &monomial_basis(curve.dim(), t), &defects, tolerance);
    report.length = Some(curve.length()?);
    Ok(report)
}

/// `w_{X,M}` with `M` a spin in the plane `(i, j)` whose rate is chosen by
/// bisection so that the length equals `target`. Returns the curve and rate.
pub fn wxm_with_length(
    set: &WeightedDesignSet,
    target: f64,
    plane: (usize, usize),
    profile: HeightProfile,
) -> Result<(Curve, f64)> {
    let build = |rate: f64| -> Result<(Curve, f64)> {
        let c = build_wxm_with(set, RotationPath::spin(set.dim(), plane.0, plane.1, rate)?, profile)?;
        let l = c.length()?;
        Ok((c, l))
    };
    let (c0, l0) = build(0.0)?;
    if (l0 - target).abs() <= 1e-10 {
        return Ok((c0, 0.0));
    }
    if target < l0 {
        return Err(Error::InvalidArgument(format!(
            "target length {target} is below the minimum {l0}"
        )));
    }
    let mut hi = 1.0;
    let mut tries = 0;
    while build(hi)?.1 < target {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::InvalidArgument(format!(
                "spin in plane {plane:?} cannot reach length {target}"
            )));
        }
    }
    let mut lo = 0.0;
    let mut best = build(hi)?;
    let mut rate = hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let cur = build(mid)?;
        if cur.1 < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (cur.1 - target).abs() < (best.1 - target).abs() {
            best = cur;
            rate = mid;
        }
        if (best.1 - target).abs() <= 1e-10 || hi - lo < 1e-15 {
            break;
        }
    }
    Ok((best.0, rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design_sets::builtin_set;
    use crate::DESIGN_TOLERANCE;
    use std::f64::consts::TAU;

    #[test]
    fn polar_circle_is_a_one_design() {
        let c = build_wxm(&builtin_set("polygon:2").unwrap(), RotationPath::identity(2)).unwrap();
        assert!((c.length().unwrap() - TAU).abs() < 1e-10);
        assert!(verify_weighted_curve(&c, 1, DESIGN_TOLERANCE).unwrap().pass);
        assert!(c.param_integral(|x| x[0]).unwrap().abs() < 1e-10);
        assert!((c.param_integral(|x| x[2] * x[2]).unwrap() - 1.0 / 3.0).abs() > 1e-3);
    }

    #[test]
    fn square_gives_three_design_on_s2() {
        let c = build_wxm(&builtin_set("polygon:4").unwrap(), RotationPath::identity(2)).unwrap();
        assert!((c.length().unwrap() - 2.0 * TAU).abs() < 1e-9);
        assert!(verify_weighted_curve(&c, 3, DESIGN_TOLERANCE).unwrap().pass);
        assert!(!verify_weighted_curve(&c, 4, DESIGN_TOLERANCE).unwrap().pass);
    }

    #[test]
    fn odd_sets_are_rejected() {
        let set = builtin_set("polygon:3").unwrap();
        assert!(matches!(build_wxm(&set, RotationPath::identity(2)), Err(Error::OddSetSize(3))));
    }

    #[test]
    fn explicit_s2_lengths() {
        let c = explicit_s2(2, PhaseFunction::zero()).unwrap();
        assert!((c.length().unwrap() - 2.0 * TAU).abs() < 1e-9);
        let r = verify_weighted_curve(&c, 3, DESIGN_TOLERANCE).unwrap();
        assert!(r.pass && r.defects.len() == 20);
        let spun = explicit_s2(2, PhaseFunction::Linear { offset: 0.0, slope: 1.0 }).unwrap();
        assert!(spun.length().unwrap() > 2.0 * TAU + 1e-3);
        assert!(verify_weighted_curve(&spun, 3, DESIGN_TOLERANCE).unwrap().pass);
    }

    #[test]
    fn lift_preconditions() {
        let polar = explicit_s2(1, PhaseFunction::zero()).unwrap();
        assert!(matches!(
            lift_s3(&polar, PhaseFunction::zero(), 2),
            Err(Error::SouthPoleViolation { .. })
        ));
        let bad_phase = PhaseFunction::Linear { offset: 0.0, slope: PI };
        let tilted = explicit_s3_base_for_tests();
        assert!(matches!(
            lift_s3(&tilted, bad_phase, 2),
            Err(Error::PhaseClosureViolation { .. })
        ));
    }

    /// A polar circle turned away from `-e_1`.
    fn explicit_s3_base_for_tests() -> Curve {
        let m = RotationPath::Constant(nalgebra::DMatrix::identity(2, 2));
        let c = build_wxm(&builtin_set("polygon:2").unwrap(), m).unwrap();
        let rotated: Vec<Segment> = c
            .segments()
            .iter()
            .map(|s| {
                let f = s.plain_family().unwrap().clone();
                Segment::formula(Shared::new(Permuted(f)), s.param_weight, s.start, s.end)
            })
            .collect();
        Curve::new(rotated).unwrap()
    }

    #[derive(Debug)]
    struct Permuted(Shared<dyn CurveFamily>);

    impl CurveFamily for Permuted {
        fn name(&self) -> &'static str {
            "permuted"
        }
        fn dim(&self) -> usize {
            3
        }
        fn reparam(&self) -> crate::sphere::Reparam {
            self.0.reparam()
        }
        fn jet(&self, u: crate::dual::Dual) -> Vec<crate::dual::Dual> {
            let j = self.0.jet(u);
            vec![j[2], j[0], j[1]]
        }
    }

    #[test]
    fn lift_of_tilted_circle_is_a_two_design() {
        let c = lift_s3(&explicit_s3_base_for_tests(), PhaseFunction::zero(), 2).unwrap();
        let r = verify_weighted_curve(&c, 2, DESIGN_TOLERANCE).unwrap();
        assert!(r.pass, "{}", r.max_defect);
    }

    #[test]
    fn explicit_s3_is_a_three_design() {
        let c = explicit_s3(1, PhaseFunction::Constant(PI / 3.0), PhaseFunction::zero(), false).unwrap();
        let r = verify_weighted_curve(&c, 3, DESIGN_TOLERANCE).unwrap();
        assert!(r.pass, "{}", r.max_defect);
        assert_eq!(r.defects.len(), 35);
        assert!(matches!(
            explicit_s3(1, PhaseFunction::zero(), PhaseFunction::zero(), false),
            Err(Error::PhaseExclusionViolation { .. })
        ));
    }

    #[test]
    fn length_targeting_hits_target() {
        let set = builtin_set("octahedron").unwrap();
        let target = 3.0 * TAU + 1.0;
        let (c, rate) = wxm_with_length(&set, target, (0, 1), HeightProfile::SphereMarginal).unwrap();
        assert!(rate > 0.0);
        assert!((c.length().unwrap() - target).abs() < 1e-6);
        assert!(verify_weighted_curve(&c, 3, DESIGN_TOLERANCE).unwrap().pass);
    }

    #[test]
    fn linear_profile_misses_height_distribution_above_s2() {
        let set = builtin_set("octahedron").unwrap();
        let lin = build_wxm(&set, RotationPath::identity(3)).unwrap();
        let r = verify_weighted_curve(&lin, 3, DESIGN_TOLERANCE).unwrap();
        assert!((r.defect_of(&[2, 0, 0, 0]).unwrap() - (1.0 / 3.0 - 0.25)).abs() < 1e-12);
        let marg = build_wxm_with(&set, RotationPath::identity(3), HeightProfile::SphereMarginal).unwrap();
        assert!((marg.length().unwrap() - 3.0 * TAU).abs() < 1e-9);
        assert!(verify_weighted_curve(&marg, 3, DESIGN_TOLERANCE).unwrap().pass);
    }
}
