use super::{dist, norm, NodeId, Point, Segment, ENDPOINT_TOL};
use crate::quadrature::{integrate_unit, REL_TOL};
use crate::{Error, Result};

/// A continuous, piecewise smooth curve `[0, 1] → S^d` made of [`Segment`]s.
///
/// Segment `i` occupies the parameter interval `[Λ_{i-1}, Λ_i]` whose width is
/// its `param_weight`.
#[derive(Clone, Debug)]
pub struct Curve {
    segments: Vec<Segment>,
    closed: bool,
    breakpoints: Vec<f64>,
}

impl Curve {
    /// Validates node continuity, endpoint coordinates and the parameter
    /// weights, then normalizes the weights to sum exactly to one.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("curve needs at least one segment".into()));
        }
        let dim = segments[0].dim();
        for s in &segments {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            if !(s.param_weight > 0.0) {
                return Err(Error::InvariantViolation(format!(
                    "segment parameter weight {} must be positive",
                    s.param_weight
                )));
            }
        }
        let total: f64 = segments.iter().map(|s| s.param_weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvariantViolation(format!("parameter weights sum to {total}, expected 1")));
        }
        segments.iter_mut().for_each(|s| s.param_weight /= total);
        for pair in segments.windows(2) {
            check_join(&pair[0], &pair[1])?;
        }
        let closed = segments.last().unwrap().end == segments[0].start;
        if closed {
            check_join(segments.last().unwrap(), &segments[0])?;
        }
        let mut breakpoints = Vec::with_capacity(segments.len() + 1);
        breakpoints.push(0.0);
        let mut acc = 0.0;
        for s in &segments {
            acc += s.param_weight;
            breakpoints.push(acc);
        }
        *breakpoints.last_mut().unwrap() = 1.0;
        Ok(Self {
            segments,
            closed,
            breakpoints,
        })
    }

    /// Like [`Curve::new`] but rescales arbitrary positive weights to sum one.
    pub fn with_normalized_weights(mut segments: Vec<Segment>) -> Result<Self> {
        let total: f64 = segments.iter().map(|s| s.param_weight).sum();
        if !(total > 0.0) {
            return Err(Error::InvariantViolation("parameter weights must be positive".into()));
        }
        segments.iter_mut().for_each(|s| s.param_weight /= total);
        Self::new(segments)
    }

    /// Reweights every segment proportionally to its length, giving a
    /// constant-speed parametrization for geodesic cycles.
    pub fn with_length_weights(segments: Vec<Segment>) -> Result<Self> {
        let mut segs = segments;
        for s in segs.iter_mut() {
            s.param_weight = s.length()?;
        }
        Self::with_normalized_weights(segs)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Cumulative parameter values `Λ_0 = 0, ..., Λ_m = 1`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn dim(&self) -> usize {
        self.segments[0].dim()
    }

    pub fn is_geodesic(&self) -> bool {
        self.segments.iter().all(|s| s.as_arc().is_some())
    }

    /// Segment index and local parameter for the global parameter `s`.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.clamp(0.0, 1.0);
        let i = self.breakpoints.partition_point(|b| *b <= s).saturating_sub(1);
        let i = i.min(self.segments.len() - 1);
        let seg = &self.segments[i];
        let frac = ((s - self.breakpoints[i]) / seg.param_weight).clamp(0.0, 1.0);
        (i, seg.lambda_at_fraction(frac))
    }

    pub fn point_at(&self, s: f64) -> Point {
        let (i, l) = self.locate(s);
        Point::from_raw(self.segments[i].position(l))
    }

    /// Global parameter of local `λ` on segment `i`.
    pub fn param_of(&self, i: usize, lambda: f64) -> f64 {
        let seg = &self.segments[i];
        self.breakpoints[i] + seg.param_weight * seg.fraction_at_lambda(lambda)
    }

    pub fn segment_lengths(&self) -> Result<Vec<f64>> {
        self.segments.iter().map(Segment::length).collect()
    }

    /// `ℓ(γ)`; arcs contribute their exact span.
    pub fn length(&self) -> Result<f64> {
        Ok(self.segment_lengths()?.iter().sum())
    }

    /// `∫_0^1 f(γ(s)) ds` for a vector of test functions at once.
    pub fn param_integrals<F>(&self, dim_out: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&[f64], &mut [f64]),
    {
        self.integrate(dim_out, &f, false)
    }

    /// `∫_γ f = ∫_0^1 f(γ(s)) |γ'(s)| ds` for a vector of test functions.
    pub fn arclength_integrals<F>(&self, dim_out: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&[f64], &mut [f64]),
    {
        self.integrate(dim_out, &f, true)
    }

    pub fn param_integral<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64,
    {
        self.param_integrals(1, |x, out| out[0] = f(x)).map(|v| v[0])
    }

    pub fn arclength_integral<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64,
    {
        self.arclength_integrals(1, |x, out| out[0] = f(x)).map(|v| v[0])
    }

    fn integrate<F>(&self, dim_out: usize, f: &F, by_length: bool) -> Result<Vec<f64>>
    where
        F: Fn(&[f64], &mut [f64]),
    {
        let mut total = vec![0.0; dim_out];
        for seg in &self.segments {
            let part = integrate_unit(dim_out, REL_TOL, |lambda, out| {
                let weight = if by_length {
                    match seg.as_arc() {
                        Some(a) => a.length(),
                        None => norm(&seg.jet(lambda).1),
                    }
                } else {
                    seg.param_density(lambda)
                };
                let x = seg.position(lambda);
                f(&x, out);
                out.iter_mut().for_each(|o| *o *= weight);
            })?;
            total.iter_mut().zip(part).for_each(|(t, p)| *t += p);
        }
        Ok(total)
    }

    /// `n` samples at equally spaced curve parameters `k/(n-1)`.
    pub fn sample_by_param(&self, n: usize) -> Vec<(f64, Point)> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                (s, self.point_at(s))
            })
            .collect()
    }

    /// `n` samples equally spaced in arc length; the reported parameter is
    /// still the curve parameter of each sample.
    pub fn sample_by_arclength(&self, n: usize) -> Result<Vec<(f64, Point)>> {
        let n = n.max(2);
        let lengths = self.segment_lengths()?;
        let total: f64 = lengths.iter().sum();
        let mut out = Vec::with_capacity(n);
        let mut seg = 0;
        let mut before = 0.0;
        for k in 0..n {
            let target = total * k as f64 / (n - 1) as f64;
            while seg + 1 < lengths.len() && before + lengths[seg] < target {
                before += lengths[seg];
                seg += 1;
            }
            let want = (target - before).clamp(0.0, lengths[seg]);
            let s = &self.segments[seg];
            let lambda = if s.as_arc().is_some() {
                if lengths[seg] > 0.0 { want / lengths[seg] } else { 0.0 }
            } else {
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    if s.partial_length(mid)? < want {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            out.push((self.param_of(seg, lambda), Point::from_raw(s.position(lambda))));
        }
        Ok(out)
    }
}

fn check_join(a: &Segment, b: &Segment) -> Result<()> {
    if a.end != b.start {
        return Err(Error::InvariantViolation(format!(
            "segment ends at node {} but the next starts at node {}",
            a.end, b.start
        )));
    }
    let gap = dist(a.end_point().coords(), b.start_point().coords());
    if gap > ENDPOINT_TOL {
        return Err(Error::EndpointMismatch { node: a.end.0, gap });
    }
    Ok(())
}

/// Allocates consecutive node ids.
#[derive(Debug, Default)]
pub(crate) struct NodeAlloc(pub(crate) u64);

impl NodeAlloc {
    /// Continues after the largest id used by `segments`.
    pub(crate) fn after(segments: &[Segment]) -> Self {
        Self(segments.iter().map(|s| s.start.0.max(s.end.0)).max().unwrap_or(0))
    }

    pub(crate) fn next(&mut self) -> NodeId {
        self.0 += 1;
        NodeId(self.0)
    }
}
