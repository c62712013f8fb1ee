use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc as Shared;

use super::{norm, Arc, NodeId, Point};
use crate::dual::Dual;
use crate::quadrature::{integrate_unit_scalar, REL_TOL};
use crate::Result;

/// Change of variables from a family's natural parameter `u ∈ [0, 1]` to the
/// uniform curve-parameter fraction `σ ∈ [0, 1]`.
///
/// `Cosine` (`σ = (1 - cos πu)/2`) is used by families whose first coordinate
/// is `-cos πu` and should be linear in `σ`; in `u` those families are
/// trigonometric, so quadrature in `u` converges geometrically.
/// `SinePower(k)` has density proportional to `sin^k(πu)`; with `k = d - 1`
/// the first coordinate `-cos πu` is distributed like the height of a uniform
/// point on `S^d`. `SinePower(1)` equals `Cosine`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reparam {
    Linear,
    Cosine,
    SinePower(u32),
}

/// `∫_0^φ sin^k`.
fn sine_power_integral(k: u32, phi: f64) -> f64 {
    match k {
        0 => phi,
        1 => 2.0 * (0.5 * phi).sin().powi(2),
        _ => {
            let kf = k as f64;
            -phi.sin().powi(k as i32 - 1) * phi.cos() / kf + (kf - 1.0) / kf * sine_power_integral(k - 2, phi)
        }
    }
}

impl Reparam {
    pub fn sigma(self, u: f64) -> f64 {
        match self {
            Reparam::Linear => u,
            Reparam::Cosine => 0.5 * (1.0 - (PI * u).cos()),
            Reparam::SinePower(k) => sine_power_integral(k, PI * u) / sine_power_integral(k, PI),
        }
    }

    pub fn sigma_dual(self, u: Dual) -> Dual {
        match self {
            Reparam::Linear => u,
            Reparam::Cosine => (-(u * PI).cos() + 1.0) * 0.5,
            Reparam::SinePower(_) => Dual::new(self.sigma(u.v), self.dsigma(u.v) * u.d),
        }
    }

    pub fn dsigma(self, u: f64) -> f64 {
        match self {
            Reparam::Linear => 1.0,
            Reparam::Cosine => 0.5 * PI * (PI * u).sin(),
            Reparam::SinePower(k) => PI * (PI * u).sin().powi(k as i32) / sine_power_integral(k, PI),
        }
    }

    pub fn inverse(self, sigma: f64) -> f64 {
        let sigma = sigma.clamp(0.0, 1.0);
        match self {
            Reparam::Linear => sigma,
            Reparam::Cosine => (1.0 - 2.0 * sigma).acos() / PI,
            Reparam::SinePower(_) => {
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..64 {
                    let mid = 0.5 * (lo + hi);
                    if self.sigma(mid) < sigma {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

/// A closed-form curve piece on the sphere, evaluated on dual numbers so that
/// the tangent comes for free.
pub trait CurveFamily: Debug + Send + Sync {
    /// Short family name used in reports.
    fn name(&self) -> &'static str;
    /// Ambient dimension of the output.
    fn dim(&self) -> usize;
    fn reparam(&self) -> Reparam {
        Reparam::Linear
    }
    /// Position and derivative with respect to the natural parameter `u`.
    fn jet(&self, u: Dual) -> Vec<Dual>;
}

#[derive(Clone, Debug)]
pub enum SegmentKind {
    Arc(Arc),
    Formula(Shared<dyn CurveFamily>),
}

/// One smooth piece of a [`super::Curve`].
///
/// The local parameter `λ ∈ [0, 1]` maps to the family's natural parameter
/// through an optional window and orientation flip. `param_weight` is the
/// share of the curve parameter `[0, 1]` the piece occupies.
#[derive(Clone, Debug)]
pub struct Segment {
    pub kind: SegmentKind,
    window: (f64, f64),
    reversed: bool,
    pub param_weight: f64,
    pub start: NodeId,
    pub end: NodeId,
}

impl Segment {
    pub fn arc(arc: Arc, param_weight: f64, start: NodeId, end: NodeId) -> Self {
        Self {
            kind: SegmentKind::Arc(arc),
            window: (0.0, 1.0),
            reversed: false,
            param_weight,
            start,
            end,
        }
    }

    pub fn formula(
        family: Shared<dyn CurveFamily>,
        param_weight: f64,
        start: NodeId,
        end: NodeId,
    ) -> Self {
        Self {
            kind: SegmentKind::Formula(family),
            window: (0.0, 1.0),
            reversed: false,
            param_weight,
            start,
            end,
        }
    }

    /// Restricts a formula piece to natural parameters `[u0, u1]`.
    pub fn with_window(mut self, u0: f64, u1: f64) -> Self {
        match &self.kind {
            SegmentKind::Arc(a) => {
                let (a0, a1) = self.window;
                let sub = a.sub_arc(a0 + (a1 - a0) * u0, a0 + (a1 - a0) * u1);
                self.kind = SegmentKind::Arc(sub);
                self.window = (0.0, 1.0);
            }
            SegmentKind::Formula(_) => self.window = (u0, u1),
        }
        self
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SegmentKind::Arc(a) => a.dim(),
            SegmentKind::Formula(f) => f.dim(),
        }
    }

    pub fn as_arc(&self) -> Option<&Arc> {
        match &self.kind {
            SegmentKind::Arc(a) => Some(a),
            SegmentKind::Formula(_) => None,
        }
    }

    /// The formula family, if this piece traverses its whole natural range
    /// forwards.
    pub fn plain_family(&self) -> Option<&Shared<dyn CurveFamily>> {
        match &self.kind {
            SegmentKind::Formula(f) if self.window == (0.0, 1.0) && !self.reversed => Some(f),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match &self.kind {
            SegmentKind::Arc(_) => "arc",
            SegmentKind::Formula(f) => f.name(),
        }
    }

    fn reparam(&self) -> Reparam {
        match &self.kind {
            SegmentKind::Arc(_) => Reparam::Linear,
            SegmentKind::Formula(f) => f.reparam(),
        }
    }

    fn natural(&self, lambda: f64) -> f64 {
        let l = if self.reversed { 1.0 - lambda } else { lambda };
        self.window.0 + (self.window.1 - self.window.0) * l
    }

    fn dnatural(&self) -> f64 {
        let w = self.window.1 - self.window.0;
        if self.reversed {
            -w
        } else {
            w
        }
    }

    /// Position and derivative with respect to `λ`.
    pub fn jet(&self, lambda: f64) -> (Vec<f64>, Vec<f64>) {
        let u = self.natural(lambda);
        let du = self.dnatural();
        match &self.kind {
            SegmentKind::Arc(a) => {
                let (t0, t1) = a.span();
                let theta = t0 + (t1 - t0) * u;
                let (s, c) = theta.sin_cos();
                let k = (t1 - t0) * du;
                let pos = a.u().coords().iter().zip(a.v().coords()).map(|(x, y)| x * c + y * s);
                let vel = a.u().coords().iter().zip(a.v().coords()).map(|(x, y)| k * (y * c - x * s));
                (pos.collect(), vel.collect())
            }
            SegmentKind::Formula(f) => {
                let j = f.jet(Dual::var(u));
                (j.iter().map(|d| d.v).collect(), j.iter().map(|d| d.d * du).collect())
            }
        }
    }

    pub fn position(&self, lambda: f64) -> Vec<f64> {
        match &self.kind {
            SegmentKind::Arc(a) => {
                let (t0, t1) = a.span();
                a.point_at_angle(t0 + (t1 - t0) * self.natural(lambda)).into_coords()
            }
            SegmentKind::Formula(f) => f.jet(Dual::constant(self.natural(lambda))).iter().map(|d| d.v).collect(),
        }
    }

    pub fn start_point(&self) -> Point {
        Point::from_raw(self.position(0.0))
    }

    pub fn end_point(&self) -> Point {
        Point::from_raw(self.position(1.0))
    }

    /// `d(curve parameter)/dλ`: the parameter measure density on this piece.
    pub fn param_density(&self, lambda: f64) -> f64 {
        let r = self.reparam();
        let (u0, u1) = self.window;
        let span = r.sigma(u1) - r.sigma(u0);
        self.param_weight * r.dsigma(self.natural(lambda)) * (u1 - u0) / span
    }

    /// Local `λ` at which the fraction `frac` of this piece's parameter weight
    /// has been consumed.
    pub fn lambda_at_fraction(&self, frac: f64) -> f64 {
        let r = self.reparam();
        let (u0, u1) = self.window;
        let (s0, s1) = (r.sigma(u0), r.sigma(u1));
        let f = if self.reversed { 1.0 - frac } else { frac };
        let u = r.inverse(s0 + f * (s1 - s0));
        let l = if u1 > u0 { ((u - u0) / (u1 - u0)).clamp(0.0, 1.0) } else { 0.0 };
        if self.reversed {
            1.0 - l
        } else {
            l
        }
    }

    /// Fraction of the parameter weight reached at local `λ`.
    pub fn fraction_at_lambda(&self, lambda: f64) -> f64 {
        let r = self.reparam();
        let (u0, u1) = self.window;
        let (s0, s1) = (r.sigma(u0), r.sigma(u1));
        let f = (r.sigma(self.natural(lambda)) - s0) / (s1 - s0);
        if self.reversed {
            1.0 - f
        } else {
            f
        }
    }

    /// Arc length of the piece.
    pub fn length(&self) -> Result<f64> {
        match &self.kind {
            SegmentKind::Arc(a) => Ok(a.length()),
            SegmentKind::Formula(_) => self.partial_length(1.0),
        }
    }

    /// Arc length over local parameters `[0, λ]`.
    pub fn partial_length(&self, lambda: f64) -> Result<f64> {
        if let SegmentKind::Arc(a) = &self.kind {
            return Ok(a.length() * lambda);
        }
        Ok(lambda * integrate_unit_scalar(REL_TOL, |x| norm(&self.jet(x * lambda).1))?)
    }

    /// The same image traversed in the opposite direction.
    pub fn reversed(&self) -> Segment {
        let mut s = self.clone();
        match &self.kind {
            SegmentKind::Arc(a) => s.kind = SegmentKind::Arc(a.reversed()),
            SegmentKind::Formula(_) => s.reversed = !self.reversed,
        }
        s.start = self.end;
        s.end = self.start;
        s
    }

    /// The sub-piece over local parameters `[a, b]`, carrying its share of
    /// the parameter weight.
    pub fn restricted(&self, a: f64, b: f64, start: NodeId, end: NodeId) -> Segment {
        let weight = self.param_weight * (self.fraction_at_lambda(b) - self.fraction_at_lambda(a)).abs();
        let (na, nb) = (self.natural(a), self.natural(b));
        let (lo, hi) = if na <= nb { (na, nb) } else { (nb, na) };
        let mut s = match &self.kind {
            SegmentKind::Arc(arc) => {
                let (t0, t1) = arc.span();
                let sub = Arc::new(
                    arc.u().clone(),
                    arc.v().clone(),
                    t0 + (t1 - t0) * lo,
                    t0 + (t1 - t0) * hi,
                )
                .expect("sub-arc of a valid arc");
                let seg = Segment::arc(sub, weight, start, end);
                if self.reversed {
                    seg.reversed()
                } else {
                    seg
                }
            }
            SegmentKind::Formula(f) => Segment {
                kind: SegmentKind::Formula(f.clone()),
                window: (lo, hi),
                reversed: self.reversed,
                param_weight: weight,
                start,
                end,
            },
        };
        s.start = start;
        s.end = end;
        s
    }
}
