use std::f64::consts::TAU;

use super::{dot, norm, CurveFamily, Point};
use crate::dual::Dual;
use crate::{Error, Result};

/// The planar section `θ ↦ c + r(u cos θ + v sin θ)` of the sphere, with
/// `c ⊥ u, v` and `r = sqrt(1 - |c|^2)`; the natural parameter maps to
/// `θ ∈ [θ0, θ0 + 2π]`.
#[derive(Clone, Debug)]
pub struct SmallCircle {
    center: Vec<f64>,
    radius: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    theta0: f64,
}

impl SmallCircle {
    pub fn new(center: Vec<f64>, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let c2 = dot(&center, &center);
        if c2 >= 1.0 {
            return Err(Error::InvalidArgument(format!("circle center norm {} must be < 1", c2.sqrt())));
        }
        let ortho = [dot(&center, &u), dot(&center, &v), dot(&u, &v)];
        if ortho.iter().any(|x| x.abs() > 1e-10) || (norm(&u) - 1.0).abs() > 1e-10 || (norm(&v) - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument("circle frame must be orthonormal and orthogonal to the center".into()));
        }
        Ok(Self {
            center,
            radius: (1.0 - c2).sqrt(),
            u,
            v,
            theta0: 0.0,
        })
    }

    /// The circle through three or more coplanar points of the sphere, with
    /// `θ = 0` at the first point and orientation towards the second.
    pub fn through(points: &[Point]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidArgument("need at least three points for a circle".into()));
        }
        let dim = points[0].dim();
        let n = points.len() as f64;
        let mut centroid = vec![0.0; dim];
        for p in points {
            for (c, x) in centroid.iter_mut().zip(p.coords()) {
                *c += x / n;
            }
        }
        let rel = |p: &Point| -> Vec<f64> { p.coords().iter().zip(&centroid).map(|(x, c)| x - c).collect() };
        let d0 = rel(&points[0]);
        let r = norm(&d0);
        let u: Vec<f64> = d0.iter().map(|x| x / r).collect();
        let d1 = rel(&points[1]);
        let k = dot(&d1, &u);
        let w: Vec<f64> = d1.iter().zip(&u).map(|(a, b)| a - k * b).collect();
        let wn = norm(&w);
        if wn < 1e-12 {
            return Err(Error::InvalidArgument("points are collinear".into()));
        }
        let v: Vec<f64> = w.iter().map(|x| x / wn).collect();
        for p in points {
            let d = rel(p);
            let (a, b) = (dot(&d, &u), dot(&d, &v));
            let out: f64 = d.iter().zip(u.iter().zip(&v)).map(|(x, (ui, vi))| (x - a * ui - b * vi).powi(2)).sum();
            if out.sqrt() > 1e-9 || ((a * a + b * b).sqrt() - r).abs() > 1e-9 {
                return Err(Error::InvalidArgument("points are not on a common circle".into()));
            }
        }
        Self::new(centroid, u, v)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Angular position of `p` on the circle.
    pub fn angle_of(&self, p: &[f64]) -> f64 {
        let d: Vec<f64> = p.iter().zip(&self.center).map(|(x, c)| x - c).collect();
        dot(&d, &self.v).atan2(dot(&d, &self.u))
    }

    pub fn length(&self) -> f64 {
        TAU * self.radius
    }
}

impl CurveFamily for SmallCircle {
    fn name(&self) -> &'static str {
        "circle"
    }

    fn dim(&self) -> usize {
        self.center.len()
    }

    fn jet(&self, u: Dual) -> Vec<Dual> {
        let theta = u * TAU + self.theta0;
        let (c, s) = (theta.cos(), theta.sin());
        self.center
            .iter()
            .zip(self.u.iter().zip(&self.v))
            .map(|(ci, (ui, vi))| (c * (self.radius * ui)) + (s * (self.radius * vi)) + *ci)
            .collect()
    }
}
