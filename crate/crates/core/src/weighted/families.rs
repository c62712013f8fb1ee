use std::f64::consts::{PI, TAU};
use std::sync::Arc as Shared;

use super::{PhaseFunction, RotationPath};
use crate::dual::Dual;
use crate::sphere::{Arc, CurveFamily, Reparam};

/// One piece of `w_{X,M}`: the first coordinate sweeps between the poles
/// (linearly in the curve parameter) while the rest follows
/// `sqrt(1 - w^2) M(w) x_i`.
#[derive(Debug)]
pub struct WxmPiece {
    pub(crate) x: Vec<f64>,
    /// `+1` sweeps `-1 → 1`, `-1` sweeps back.
    pub(crate) sign: f64,
    pub(crate) rotation: Shared<RotationPath>,
    pub(crate) reparam: Reparam,
}

impl CurveFamily for WxmPiece {
    fn name(&self) -> &'static str {
        "wxm-piece"
    }

    fn dim(&self) -> usize {
        self.x.len() + 1
    }

    fn reparam(&self) -> Reparam {
        self.reparam
    }

    fn jet(&self, u: Dual) -> Vec<Dual> {
        let a = u * PI;
        let w = a.cos() * -self.sign;
        let r = a.sin();
        let mut out = Vec::with_capacity(self.dim());
        out.push(w);
        out.extend(self.rotation.apply(w, &self.x).into_iter().map(|m| m * r));
        out
    }
}

/// Piece `k` of the explicit `S^2` curve:
/// `α_1 = ±(2σ - 1)`, `α_2 + iα_3 = sqrt(1 - α_1^2) e^{i(πk/t + θ_1(α_1))}`.
#[derive(Debug)]
pub struct ExplicitS2Piece {
    pub(crate) t: usize,
    pub(crate) k: usize,
    pub(crate) theta1: PhaseFunction,
}

impl CurveFamily for ExplicitS2Piece {
    fn name(&self) -> &'static str {
        "explicit-s2-piece"
    }

    fn dim(&self) -> usize {
        3
    }

    fn reparam(&self) -> Reparam {
        Reparam::Cosine
    }

    fn jet(&self, u: Dual) -> Vec<Dual> {
        let a = u * PI;
        let sign = if self.k % 2 == 0 { 1.0 } else { -1.0 };
        let a1 = a.cos() * -sign;
        let r = a.sin();
        let phi = self.theta1.eval_dual(a1) + PI * self.k as f64 / self.t as f64;
        vec![a1, r * phi.cos(), r * phi.sin()]
    }
}

/// A great-circle arc as a formula family, so that it can be lifted.
#[derive(Debug)]
pub struct ArcFamily(pub(crate) Arc);

impl CurveFamily for ArcFamily {
    fn name(&self) -> &'static str {
        "arc"
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn jet(&self, u: Dual) -> Vec<Dual> {
        let (t0, t1) = self.0.span();
        let th = u * (t1 - t0) + t0;
        let (c, s) = (th.cos(), th.sin());
        self.0
            .u()
            .coords()
            .iter()
            .zip(self.0.v().coords())
            .map(|(x, y)| c * *x + s * *y)
            .collect()
    }
}

/// Hopf lift of one base piece to `S^3 ⊂ C^2`:
///
/// `γ(s) = (1/√2) (sqrt(1 + α_R(r)), conj(α_C(r))/sqrt(1 + α_R(r))) e^{i(2πs + θ(r))}`
/// with `r = freq * s - traversal`, output interleaved as
/// `(Re z0, Im z0, Re z1, Im z1)`. The base piece spans base parameters
/// `r ∈ [r0, r0 + weight]`.
#[derive(Debug)]
pub struct LiftPiece {
    pub(crate) base: Shared<dyn CurveFamily>,
    /// Base coordinates used as `(α_R, Re α_C, Im α_C)`.
    pub(crate) axes: [usize; 3],
    pub(crate) r0: f64,
    pub(crate) weight: f64,
    pub(crate) freq: f64,
    pub(crate) traversal: f64,
    pub(crate) theta: PhaseFunction,
}

impl CurveFamily for LiftPiece {
    fn name(&self) -> &'static str {
        "lift-s3-piece"
    }

    fn dim(&self) -> usize {
        4
    }

    fn reparam(&self) -> Reparam {
        self.base.reparam()
    }

    fn jet(&self, u: Dual) -> Vec<Dual> {
        let a = self.base.jet(u);
        let (ar, a2, a3) = (a[self.axes[0]], a[self.axes[1]], a[self.axes[2]]);
        let r = self.base.reparam().sigma_dual(u) * self.weight + self.r0;
        let s = (r + self.traversal) * (1.0 / self.freq);
        let phi = s * TAU + self.theta.eval_dual(r);
        let (c, sn) = (phi.cos(), phi.sin());
        let one_plus = ar + 1.0;
        let amp0 = (one_plus * 0.5).sqrt();
        let amp1 = Dual::constant(1.0) / (one_plus * 2.0).sqrt();
        vec![
            amp0 * c,
            amp0 * sn,
            amp1 * (a2 * c + a3 * sn),
            amp1 * (a2 * sn - a3 * c),
        ]
    }
}
