//! Hybrid designs: a point set and a curve averaged with a balancing weight.
//!
//! `(X, γ, ρ)` is a hybrid `t`-design when
//! `ρ/|X| Σ_{x∈X} f(x) + (1-ρ)/ℓ(γ) ∫_γ f = ∫_{S^d} f dσ` for every `f` of
//! degree `<= t`.

use std::f64::consts::TAU;
use std::sync::Arc as Shared;

use serde::{Deserialize, Serialize};

use crate::design_sets::{verify_weighted_design_set, WeightedDesignSet};
use crate::poly::{monomial_basis, MonomialSet};
use crate::projective::{fiber_curve, verify_projective_design, ProjectiveDesignSet};
use crate::sphere::{Curve, NodeId, Point, Segment, SmallCircle};
use crate::{DesignReport, Error, Result};

#[derive(Clone, Debug)]
pub struct HybridDesign {
    pub points: Vec<Point>,
    pub curve: Curve,
    pub rho: f64,
    pub strength: usize,
}

impl HybridDesign {
    pub fn new(points: Vec<Point>, curve: Curve, rho: f64, strength: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidArgument(format!("balancing constant {rho} outside [0, 1]")));
        }
        if points.is_empty() && rho != 0.0 {
            return Err(Error::InvalidArgument("an empty point set needs rho = 0".into()));
        }
        if !curve.is_closed() {
            return Err(Error::InvalidArgument("hybrid curve must be closed".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != curve.dim()) {
            return Err(Error::DimensionMismatch {
                expected: curve.dim(),
                found: p.dim(),
            });
        }
        Ok(Self {
            points,
            curve,
            rho,
            strength,
        })
    }

    pub fn dim(&self) -> usize {
        self.curve.dim()
    }

    pub fn record(&self) -> Result<HybridRecord> {
        Ok(HybridRecord {
            dimension: self.dim(),
            strength: self.strength,
            points: self.points.iter().map(|p| p.coords().to_vec()).collect(),
            rho: self.rho,
            curve_length: self.curve.length()?,
            curve_segments: self.curve.segments().len(),
            curve_families: self.curve.segments().iter().map(|s| s.family_name().to_string()).collect(),
        })
    }
}

/// JSON view of a hybrid design: the point set, `rho` and a summary of the
/// curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridRecord {
    pub dimension: usize,
    pub strength: usize,
    pub points: Vec<Vec<f64>>,
    pub rho: f64,
    pub curve_length: f64,
    pub curve_segments: usize,
    pub curve_families: Vec<String>,
}

/// Per-monomial absolute defect of the mixed functional.
pub fn verify_hybrid(h: &HybridDesign, t: usize, tolerance: f64) -> Result<DesignReport> {
    let dim = h.dim();
    let set = MonomialSet::new(dim, t);
    let length = h.curve.length()?;
    let ints = h.curve.arclength_integrals(set.len(), |x, out| set.eval_into(x, out))?;
    let mut mixed: Vec<f64> = ints.iter().map(|i| (1.0 - h.rho) * i / length).collect();
    if !h.points.is_empty() {
        let w = h.rho / h.points.len() as f64;
        let mut vals = vec![0.0; set.len()];
        for p in &h.points {
            set.eval_into(p.coords(), &mut vals);
            mixed.iter_mut().zip(&vals).for_each(|(m, v)| *m += w * v);
        }
    }
    let defects: Vec<f64> = mixed.iter().zip(set.averages()).map(|(m, a)| (m - a).abs()).collect();
    let mut r = DesignReport::from_defects(t, &monomial_basis(dim, t), &defects, tolerance);
    r.length = Some(length);
    Ok(r)
}

/// A full circle as a one-segment closed curve at constant speed.
pub fn circle_curve(circle: SmallCircle) -> Curve {
    Curve::new(vec![Segment::formula(Shared::new(circle), 1.0, NodeId(0), NodeId(0))])
        .expect("a circle closes on itself")
}

/// Fibers of `Y ∖ {y₀}` are replaced by `t+1` equally spaced points each;
/// the fiber over `y₀` stays as the curve, with `ρ = 1 - 1/|Y|`.
pub fn konig_hybrid(y: &ProjectiveDesignSet, y0: usize, t: usize, tolerance: f64) -> Result<HybridDesign> {
    if y0 >= y.len() {
        return Err(Error::InvalidArgument(format!("base index {y0} out of range for {} points", y.len())));
    }
    let check = verify_projective_design(y, t / 2, tolerance);
    if !check.pass {
        return Err(Error::StrengthViolation {
            t: t / 2,
            max_defect: check.max_defect,
        });
    }
    let k = t + 1;
    let points = y
        .points()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != y0)
        .flat_map(|(_, p)| (0..k).map(move |j| p.fiber_point(TAU * j as f64 / k as f64)))
        .collect();
    let rho = 1.0 - 1.0 / y.len() as f64;
    HybridDesign::new(points, fiber_curve(&y.points()[y0]), rho, t)
}

/// Removes a regular `s`-gon (given by member indices) from a uniform design
/// set and replaces it with its circle, `ρ = 1 - s/|X|`.
pub fn gon_split_hybrid(set: &WeightedDesignSet, gon: &[usize], t: usize, tolerance: f64) -> Result<HybridDesign> {
    let n = set.len();
    let s = gon.len();
    if s <= t {
        return Err(Error::InvalidArgument(format!("a {s}-gon cannot carry strength {t}; need s > t")));
    }
    if set.weights().iter().any(|w| (w * n as f64 - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidArgument("gon splitting needs uniform weights".into()));
    }
    let mut sorted = gon.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s || sorted.last().is_some_and(|&i| i >= n) {
        return Err(Error::GonNotSubset("indices must be distinct members of the set".into()));
    }
    let check = verify_weighted_design_set(set, t, tolerance);
    if !check.pass {
        return Err(Error::StrengthViolation {
            t,
            max_defect: check.max_defect,
        });
    }
    let members: Vec<Point> = gon.iter().map(|&i| set.points()[i].clone()).collect();
    let circle = SmallCircle::through(&members).map_err(|e| Error::GonNotSubset(e.to_string()))?;
    let mut angles: Vec<f64> = members.iter().map(|p| circle.angle_of(p.coords()).rem_euclid(TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let step = TAU / s as f64;
    if angles.iter().enumerate().any(|(j, a)| (a - angles[0] - step * j as f64).abs() > 1e-9) {
        return Err(Error::GonNotSubset("points are not equally spaced on their circle".into()));
    }
    let rest = (0..n).filter(|i| !gon.contains(i)).map(|i| set.points()[i].clone()).collect();
    HybridDesign::new(rest, circle_curve(circle), 1.0 - s as f64 / n as f64, t)
}

/// `X = {(0,0,-1)}`, the circle at height `1/3`, `ρ = 1/4`: a hybrid 2-design.
pub fn ehler_first() -> HybridDesign {
    let circle = SmallCircle::new(vec![0.0, 0.0, 1.0 / 3.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0])
        .expect("valid circle");
    HybridDesign::new(vec![Point::basis(3, 2).neg()], circle_curve(circle), 0.25, 2).expect("valid triple")
}

/// `X = {±e₃}`, the equator, `ρ = 1/3`: a hybrid 3-design.
pub fn ehler_second() -> HybridDesign {
    let circle = SmallCircle::new(vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).expect("valid circle");
    HybridDesign::new(
        vec![Point::basis(3, 2), Point::basis(3, 2).neg()],
        circle_curve(circle),
        1.0 / 3.0,
        3,
    )
    .expect("valid triple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::empirical_defect;
    use crate::design_sets::Builtin;
    use crate::poly::monomial_sup;
    use crate::projective::builtin_projective_set;
    use crate::DESIGN_TOLERANCE;

    #[test]
    fn ehler_examples() {
        let first = ehler_first();
        assert!((first.curve.length().unwrap() - TAU * 8f64.sqrt() / 3.0).abs() < 1e-12);
        assert!(verify_hybrid(&first, 2, 1e-10).unwrap().pass);
        let r = verify_hybrid(&first, 3, 1e-10).unwrap();
        assert!(!r.pass);
        // ∫x₃³ = 0 on S², mixed value ρ(-1) + (1-ρ)/27.
        assert!((r.defect_of(&[0, 0, 3]).unwrap() - (0.25 - 0.75 / 27.0)).abs() < 1e-12);
        assert!(verify_hybrid(&ehler_second(), 3, 1e-10).unwrap().pass);
        assert!(!verify_hybrid(&ehler_second(), 4, 1e-10).unwrap().pass);
    }

    #[test]
    fn konig_octahedron() {
        let y = builtin_projective_set("cp1-octahedron").unwrap();
        let h = konig_hybrid(&y, 0, 7, DESIGN_TOLERANCE).unwrap();
        assert_eq!(h.points.len(), 40);
        assert!((h.rho - 5.0 / 6.0).abs() < 1e-15);
        assert!(verify_hybrid(&h, 7, DESIGN_TOLERANCE).unwrap().pass);
        let h8 = konig_hybrid(&y, 0, 8, DESIGN_TOLERANCE);
        assert!(matches!(h8, Err(Error::StrengthViolation { .. })));
        let h6 = konig_hybrid(&y, 2, 6, DESIGN_TOLERANCE).unwrap();
        assert!(!verify_hybrid(&h6, 8, DESIGN_TOLERANCE).unwrap().pass);
    }

    #[test]
    fn konig_all_cp1_builtins() {
        for (name, t) in [("cp1-octahedron", 7), ("cp1-tetrahedron", 5), ("cp1-cross-polytope:3", 7), ("cp1-simplex:3", 4)] {
            let y = builtin_projective_set(name).unwrap();
            for y0 in 0..y.len() {
                let h = konig_hybrid(&y, y0, t, DESIGN_TOLERANCE).unwrap();
                assert!(verify_hybrid(&h, t, DESIGN_TOLERANCE).unwrap().max_defect < 1e-9, "{name}");
            }
        }
    }

    #[test]
    fn konig_single_point_is_rejected_above_one() {
        let y = ProjectiveDesignSet::new(vec![builtin_projective_set("cp1-octahedron").unwrap().points()[0].clone()], 0)
            .unwrap();
        assert!(konig_hybrid(&y, 0, 2, DESIGN_TOLERANCE).is_err());
        let h = konig_hybrid(&y, 0, 1, DESIGN_TOLERANCE).unwrap();
        assert_eq!(h.rho, 0.0);
        assert!(verify_hybrid(&h, 1, DESIGN_TOLERANCE).unwrap().pass);
    }

    #[test]
    fn gon_splits() {
        let cross = Builtin::CrossPolytope(3).build().unwrap();
        let h = gon_split_hybrid(&cross, &[0, 2, 1, 3], 3, DESIGN_TOLERANCE).unwrap();
        assert!((h.rho - 1.0 / 3.0).abs() < 1e-15);
        assert!(verify_hybrid(&h, 3, 1e-10).unwrap().pass);

        let simplex = Builtin::Simplex(3).build().unwrap();
        let h = gon_split_hybrid(&simplex, &[0, 1, 2], 2, DESIGN_TOLERANCE).unwrap();
        assert!((h.rho - 0.25).abs() < 1e-15);
        assert!(verify_hybrid(&h, 2, 1e-10).unwrap().pass);

        assert!(matches!(
            gon_split_hybrid(&simplex, &[0, 1, 2], 3, DESIGN_TOLERANCE),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            gon_split_hybrid(&cross, &[0, 1, 2, 4], 3, DESIGN_TOLERANCE),
            Err(Error::GonNotSubset(_))
        ));
    }

    #[test]
    fn reductions() {
        let circle = SmallCircle::new(vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]).unwrap();
        let curve = circle_curve(circle);
        let h = HybridDesign::new(vec![], curve.clone(), 0.0, 2).unwrap();
        let a = verify_hybrid(&h, 2, DESIGN_TOLERANCE).unwrap();
        let l = curve.length().unwrap();
        let b = empirical_defect(&curve, 2, 1.0 / l, None, DESIGN_TOLERANCE).unwrap();
        assert_eq!(a.pass, b.pass);
        for (x, y) in a.defects.iter().zip(&b.defects) {
            assert!((x.defect - y.defect * monomial_sup(&x.exponents)).abs() < 1e-12);
        }

        let oct = Builtin::Octahedron.build().unwrap();
        let h = HybridDesign::new(oct.points().to_vec(), curve, 1.0, 3).unwrap();
        let a = verify_hybrid(&h, 4, DESIGN_TOLERANCE).unwrap();
        let b = verify_weighted_design_set(&oct, 4, DESIGN_TOLERANCE);
        assert_eq!(a.pass, b.pass);
        for (x, y) in a.defects.iter().zip(&b.defects) {
            assert!((x.defect - y.defect).abs() < 1e-12);
        }
    }

    #[test]
    fn record_round_trip() {
        let rec = ehler_second().record().unwrap();
        let back: HybridRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        assert_eq!(rec, back);
        assert_eq!(rec.curve_families, vec!["circle"]);
    }
}
