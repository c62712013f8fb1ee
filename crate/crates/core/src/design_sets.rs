//! Weighted t-design point sets: built-in families, verification and JSON
//! persistence.

use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::poly::{monomial_basis, sphere_average, MonomialSet};
use crate::sphere::Point;
use crate::{DesignReport, Error, Result};

/// Points `x_i` on `S^{D-1}` with positive weights summing to one, claimed to
/// average every polynomial of degree `<= strength` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDesignSet {
    points: Vec<Point>,
    weights: Vec<f64>,
    strength: usize,
}

impl WeightedDesignSet {
    pub fn new(points: Vec<Point>, weights: Vec<f64>, strength: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("design set needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        let dim = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w > 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::WeightInvariantViolation { sum });
        }
        Ok(Self {
            points,
            weights,
            strength,
        })
    }

    /// Equal weights `1/|X|`.
    pub fn uniform(points: Vec<Point>, strength: usize) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let n = points.len();
        Self::new(points, vec![w; n], strength)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension `D` (points lie on `S^{D-1}`).
    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// `Λ_0 = 0, Λ_i = λ(x_1) + ... + λ(x_i)`, with `Λ_{|X|} = 1` exactly.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(0.0);
        let mut acc = 0.0;
        for w in &self.weights {
            acc += w;
            out.push(acc);
        }
        *out.last_mut().unwrap() = 1.0;
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = SetFile {
            dimension: self.dim(),
            strength: self.strength,
            points: self.points.iter().map(|p| p.coords().to_vec()).collect(),
            weights: self.weights.clone(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }
}

impl FromStr for WeightedDesignSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let file: SetFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if file.points.len() != file.weights.len() {
            return Err(Error::Parse(format!(
                "{} points but {} weights",
                file.points.len(),
                file.weights.len()
            )));
        }
        let mut points = Vec::with_capacity(file.points.len());
        for row in file.points {
            if row.len() != file.dimension {
                return Err(Error::DimensionMismatch {
                    expected: file.dimension,
                    found: row.len(),
                });
            }
            let p = Point::new(row).map_err(|e| Error::InvariantViolation(e.to_string()))?;
            points.push(p);
        }
        Self::new(points, file.weights, file.strength).map_err(|e| match e {
            Error::WeightInvariantViolation { .. } => Error::InvariantViolation(e.to_string()),
            other => other,
        })
    }
}

/// On-disk form; `dimension` is the ambient dimension, i.e. the row length.
#[derive(Serialize, Deserialize)]
struct SetFile {
    dimension: usize,
    strength: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Named configurations with known strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Regular `s`-gon on `S^1`, vertex `k` at angle `2πk/s`.
    Polygon(usize),
    /// Regular simplex in `R^D`.
    Simplex(usize),
    /// `±e_i` in `R^D`, ordered `+e_1, -e_1, +e_2, ...`.
    CrossPolytope(usize),
    Octahedron,
    Tetrahedron,
}

impl Builtin {
    pub fn build(self) -> Result<WeightedDesignSet> {
        let (points, strength) = match self {
            Builtin::Polygon(s) => {
                if s == 0 {
                    return Err(Error::InvalidArgument("polygon needs at least one vertex".into()));
                }
                let pts = (0..s)
                    .map(|k| {
                        let a = TAU * k as f64 / s as f64;
                        Point::from_raw(vec![a.cos(), a.sin()])
                    })
                    .collect();
                (pts, s - 1)
            }
            Builtin::Simplex(d) => {
                if d < 2 {
                    return Err(Error::InvalidArgument("simplex needs ambient dimension >= 2".into()));
                }
                (simplex(d).into_iter().map(Point::from_raw).collect(), 2)
            }
            Builtin::CrossPolytope(d) => {
                if d < 2 {
                    return Err(Error::InvalidArgument(
                        "cross-polytope needs ambient dimension >= 2".into(),
                    ));
                }
                let pts = (0..d)
                    .flat_map(|i| [Point::basis(d, i), Point::basis(d, i).neg()])
                    .collect();
                (pts, 3)
            }
            Builtin::Octahedron => return Builtin::CrossPolytope(3).build(),
            Builtin::Tetrahedron => return Builtin::Simplex(3).build(),
        };
        WeightedDesignSet::uniform(points, strength)
    }
}

/// `D + 1` vertices in `R^D`: the simplex in `R^{D-1}` shrunk onto the
/// latitude `x_D = 1/D`, plus the south pole.
fn simplex(d: usize) -> Vec<Vec<f64>> {
    if d == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    let h = 1.0 / d as f64;
    let r = (1.0 - h * h).sqrt();
    let mut out: Vec<Vec<f64>> = simplex(d - 1)
        .into_iter()
        .map(|p| {
            let mut q: Vec<f64> = p.iter().map(|x| r * x).collect();
            q.push(h);
            q
        })
        .collect();
    let mut south = vec![0.0; d];
    south[d - 1] = -1.0;
    out.push(south);
    out
}

impl FromStr for Builtin {
    type Err = Error;

    /// `octahedron`, `tetrahedron`, `polygon:S`, `simplex:D`, `cross-polytope:D`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::UnknownFamily(format!("{s} (missing size)")))?
                .parse()
                .map_err(|_| Error::UnknownFamily(s.to_string()))
        };
        match name {
            "octahedron" if arg.is_none() => Ok(Builtin::Octahedron),
            "tetrahedron" if arg.is_none() => Ok(Builtin::Tetrahedron),
            "polygon" => Ok(Builtin::Polygon(num(arg)?)),
            "simplex" => Ok(Builtin::Simplex(num(arg)?)),
            "cross-polytope" => Ok(Builtin::CrossPolytope(num(arg)?)),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Polygon(s) => write!(f, "polygon:{s}"),
            Builtin::Simplex(d) => write!(f, "simplex:{d}"),
            Builtin::CrossPolytope(d) => write!(f, "cross-polytope:{d}"),
            Builtin::Octahedron => write!(f, "octahedron"),
            Builtin::Tetrahedron => write!(f, "tetrahedron"),
        }
    }
}

pub fn builtin_set(name: &str) -> Result<WeightedDesignSet> {
    name.parse::<Builtin>()?.build()
}

/// Defect `|Σ λ(x) x^α - avg(x^α)|` for every monomial of degree `<= t`.
pub fn verify_weighted_design_set(set: &WeightedDesignSet, t: usize, tolerance: f64) -> DesignReport {
    let dim = set.dim();
    let basis = MonomialSet::new(dim, t);
    let mut sums = vec![0.0; basis.len()];
    let mut vals = vec![0.0; basis.len()];
    for (p, w) in set.points().iter().zip(set.weights()) {
        basis.eval_into(p.coords(), &mut vals);
        sums.iter_mut().zip(&vals).for_each(|(s, v)| *s += w * v);
    }
    let defects: Vec<f64> = sums
        .iter()
        .zip(basis.basis())
        .map(|(s, a)| (s - sphere_average(a, dim - 1)).abs())
        .collect();
    DesignReport::from_defects(t, &monomial_basis(dim, t), &defects, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DESIGN_TOLERANCE;

    #[test]
    fn builtins_pass_at_strength_and_fail_above() {
        let cases = [
            Builtin::Polygon(2),
            Builtin::Polygon(4),
            Builtin::Polygon(7),
            Builtin::Octahedron,
            Builtin::Tetrahedron,
            Builtin::Simplex(2),
            Builtin::Simplex(4),
            Builtin::Simplex(5),
            Builtin::CrossPolytope(2),
            Builtin::CrossPolytope(4),
        ];
        for b in cases {
            let set = b.build().unwrap();
            let t = set.strength();
            let ok = verify_weighted_design_set(&set, t, DESIGN_TOLERANCE);
            assert!(ok.pass, "{b} at {t}: {}", ok.max_defect);
            assert!(ok.max_defect < 1e-12, "{b}");
            let bad = verify_weighted_design_set(&set, t + 1, DESIGN_TOLERANCE);
            assert!(!bad.pass, "{b} at {}", t + 1);
        }
    }

    #[test]
    fn simplex_vertices_are_regular() {
        for d in 2..=6 {
            let set = Builtin::Simplex(d).build().unwrap();
            assert_eq!(set.len(), d + 1);
            for (i, p) in set.points().iter().enumerate() {
                assert!((p.dot(p) - 1.0).abs() < 1e-14);
                for q in &set.points()[i + 1..] {
                    assert!((p.dot(q) + 1.0 / d as f64).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn octahedron_fails_on_fourth_power() {
        let set = builtin_set("octahedron").unwrap();
        let r = verify_weighted_design_set(&set, 4, DESIGN_TOLERANCE);
        let d = r.defect_of(&[4, 0, 0]).unwrap();
        assert!((d - 2.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn single_point_is_a_zero_design() {
        let set = WeightedDesignSet::uniform(vec![Point::basis(3, 2)], 0).unwrap();
        assert!(verify_weighted_design_set(&set, 0, DESIGN_TOLERANCE).pass);
    }

    #[test]
    fn json_round_trip() {
        let set = builtin_set("tetrahedron").unwrap();
        let back: WeightedDesignSet = set.to_json().parse().unwrap();
        for (p, q) in set.points().iter().zip(back.points()) {
            for (a, b) in p.coords().iter().zip(q.coords()) {
                assert!((a - b).abs() <= 1e-15);
            }
        }
        assert_eq!(set.weights(), back.weights());
        assert_eq!(back.strength(), 2);
    }

    #[test]
    fn invalid_files_are_rejected() {
        let bad_weights = r#"{"dimension":2,"strength":1,"points":[[1,0],[-1,0]],"weights":[0.45,0.45]}"#;
        assert!(matches!(bad_weights.parse::<WeightedDesignSet>(), Err(Error::InvariantViolation(_))));
        let non_unit = r#"{"dimension":2,"strength":1,"points":[[1,0],[-0.9,0]],"weights":[0.5,0.5]}"#;
        assert!(matches!(non_unit.parse::<WeightedDesignSet>(), Err(Error::InvariantViolation(_))));
        assert!(matches!("{".parse::<WeightedDesignSet>(), Err(Error::Parse(_))));
    }

    #[test]
    fn names_parse() {
        assert_eq!("polygon:6".parse::<Builtin>().unwrap(), Builtin::Polygon(6));
        assert_eq!("cross-polytope:5".parse::<Builtin>().unwrap(), Builtin::CrossPolytope(5));
        assert!(matches!("icosahedron".parse::<Builtin>(), Err(Error::UnknownFamily(_))));
        for b in [Builtin::Octahedron, Builtin::Simplex(4), Builtin::Polygon(3)] {
            assert_eq!(b.to_string().parse::<Builtin>().unwrap(), b);
        }
    }

    #[test]
    fn partial_sums_end_at_one() {
        let set = builtin_set("polygon:3").unwrap();
        let l = set.partial_sums();
        assert_eq!(l.len(), 4);
        assert_eq!(l[3], 1.0);
        assert!((l[1] - 1.0 / 3.0).abs() < 1e-16);
    }
}
