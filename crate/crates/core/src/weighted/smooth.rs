use std::sync::Arc as Shared;

use crate::dual::Dual;
use crate::sphere::{norm, Curve, CurveFamily, NodeAlloc, Segment};
use crate::{Error, Result};

/// Tangent directions closer than this are treated as a smooth joint.
const CORNER_ANGLE: f64 = 1e-7;

/// `C^1` corner blend: a Euclidean cubic with end points `p0`, `p1` and end
/// tangents along `a`, `b`, projected radially onto the sphere. The handle
/// length `h` controls how far the blend bulges and hence its length.
#[derive(Debug, Clone)]
pub struct BlendFamily {
    p0: Vec<f64>,
    a: Vec<f64>,
    p1: Vec<f64>,
    b: Vec<f64>,
    h: f64,
}

impl CurveFamily for BlendFamily {
    fn name(&self) -> &'static str {
        "corner-blend"
    }

    fn dim(&self) -> usize {
        self.p0.len()
    }

    fn jet(&self, u: Dual) -> Vec<Dual> {
        let v = Dual::constant(1.0) - u;
        let b0 = v * v * v;
        let b1 = v * v * u * 3.0;
        let b2 = v * u * u * 3.0;
        let b3 = u * u * u;
        let raw: Vec<Dual> = (0..self.dim())
            .map(|i| {
                b0 * self.p0[i]
                    + b1 * (self.p0[i] + self.h * self.a[i])
                    + b2 * (self.p1[i] - self.h * self.b[i])
                    + b3 * self.p1[i]
            })
            .collect();
        let n2 = raw.iter().fold(Dual::constant(0.0), |acc, x| acc + *x * *x);
        let n = n2.sqrt();
        raw.into_iter().map(|x| x / n).collect()
    }
}

/// Output of [`smooth_curve`].
#[derive(Debug, Clone)]
pub struct SmoothedCurve {
    pub curve: Curve,
    /// Input curve parameters of the rounded corners.
    pub corners: Vec<f64>,
    /// Length cut out of the input around the corners.
    pub removed: f64,
    /// Length of the inserted blends.
    pub inserted: f64,
    /// Growth bound `2δc` of the approximation constant.
    pub epsilon_increase: f64,
}

/// Rounds every corner of `curve`, increasing its length by `delta`.
///
/// Around each of the `K` corners a length `δ/(4K)` is cut from both
/// adjoining pieces (`δ/2` in total) and a [`BlendFamily`] of length
/// `3δ/(2K)` is inserted (`3δ/2` in total). The curve changes on a set of
/// total length `2δ`, so an `(ε, c)`-approximate design becomes at worst
/// `(ε + 2δc, c)`-approximate. Curves without corners are returned as is.
/// The result is parametrized proportionally to arc length.
pub fn smooth_curve(curve: &Curve, delta: f64, c: f64) -> Result<SmoothedCurve> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("smoothing budget must be positive, got {delta}")));
    }
    let lengths = curve.segment_lengths()?;
    if delta >= lengths.iter().sum::<f64>() {
        return Err(Error::BudgetTooSmall { delta });
    }
    let segs = curve.segments();
    let m = segs.len();
    let joints: Vec<usize> = (0..m)
        .filter(|&i| i + 1 < m || curve.is_closed())
        .filter(|&i| is_corner(&segs[i], &segs[(i + 1) % m]))
        .collect();
    if joints.is_empty() {
        return Ok(SmoothedCurve {
            curve: curve.clone(),
            corners: Vec::new(),
            removed: 0.0,
            inserted: 0.0,
            epsilon_increase: 0.0,
        });
    }
    let k = joints.len() as f64;
    let cut = delta / (4.0 * k);
    let blend_len = 6.0 * cut;
    let corner_at_end = |i: usize| joints.contains(&i);
    let corner_at_start = |i: usize| joints.contains(&((i + m - 1) % m)) && (i > 0 || curve.is_closed());

    let mut nodes = NodeAlloc::after(segs);
    let mut trimmed = Vec::with_capacity(m);
    for (i, seg) in segs.iter().enumerate() {
        let a = if corner_at_start(i) { cut } else { 0.0 };
        let b = if corner_at_end(i) { cut } else { 0.0 };
        if a + b >= lengths[i] {
            return Err(Error::BudgetTooSmall { delta });
        }
        let la = lambda_at_length(seg, a, lengths[i])?;
        let lb = lambda_at_length(seg, lengths[i] - b, lengths[i])?;
        let start = if a > 0.0 { nodes.next() } else { seg.start };
        let end = if b > 0.0 { nodes.next() } else { seg.end };
        trimmed.push(seg.restricted(la, lb, start, end));
    }

    let mut out = Vec::with_capacity(m + joints.len());
    for i in 0..m {
        out.push(trimmed[i].clone());
        if corner_at_end(i) {
            let next = &trimmed[(i + 1) % m];
            out.push(blend(&trimmed[i], next, blend_len)?);
        }
    }
    let corners = joints.iter().map(|&i| curve.breakpoints()[i + 1] % 1.0).collect();
    Ok(SmoothedCurve {
        curve: Curve::with_length_weights(out)?,
        corners,
        removed: 2.0 * cut * k,
        inserted: blend_len * k,
        epsilon_increase: 2.0 * delta * c,
    })
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

fn is_corner(a: &Segment, b: &Segment) -> bool {
    let ta = unit(a.jet(1.0).1);
    let tb = unit(b.jet(0.0).1);
    let cos: f64 = ta.iter().zip(&tb).map(|(x, y)| x * y).sum();
    !(cos > (CORNER_ANGLE).cos()) || ta.iter().any(|x| !x.is_finite())
}

/// Local parameter at which the arc length from the start equals `target`.
fn lambda_at_length(seg: &Segment, target: f64, total: f64) -> Result<f64> {
    if target <= 0.0 {
        return Ok(0.0);
    }
    if target >= total {
        return Ok(1.0);
    }
    if seg.as_arc().is_some() {
        return Ok(target / total);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if seg.partial_length(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A blend from the end of `a` to the start of `b` of the given length.
fn blend(a: &Segment, b: &Segment, length: f64) -> Result<Segment> {
    let p0 = a.position(1.0);
    let p1 = b.position(0.0);
    let ta = unit(a.jet(1.0).1);
    let tb = unit(b.jet(0.0).1);
    let make = |h: f64| {
        let fam = BlendFamily {
            p0: p0.clone(),
            a: ta.clone(),
            p1: p1.clone(),
            b: tb.clone(),
            h,
        };
        Segment::formula(Shared::new(fam), 1.0, a.end, b.start)
    };
    let len = |h: f64| make(h).length();
    let mut hi = length;
    let mut tries = 0;
    while len(hi)? < length {
        hi *= 2.0;
        tries += 1;
        if tries > 40 {
            return Err(Error::InvalidArgument("corner blend cannot reach its length budget".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let l = len(mid)?;
        if (l - length).abs() < 1e-13 {
            return Ok(make(mid));
        }
        if l < length {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(make(0.5 * (lo + hi)))
}
