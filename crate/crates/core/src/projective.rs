//! Complex projective space `CP^n` as the quotient of `S^{2n+1} ⊂ C^{n+1}` by
//! unit scalars, with fibers, the Fubini-Study distance and projective
//! designs verified through pulled-back real monomials.
//!
//! Real coordinates of `C^{n+1}` are interleaved: `(Re z_0, Im z_0, Re z_1, ...)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::design_sets::Builtin;
use crate::poly::{monomial_basis, MonomialSet, MultiIndex};
use crate::sphere::{great_arc, Arc, Curve, NodeId, Point, Segment, UNIT_TOL};
use crate::{DesignReport, Error, Result};

/// Coordinates below this modulus are skipped when fixing the phase.
const PHASE_TOL: f64 = 1e-12;
/// Points closer than this are the same projective point.
pub const SAME_POINT_TOL: f64 = 1e-9;

/// A point of `CP^n`, stored as the unit representative whose first
/// non-negligible coordinate is real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint {
    rep: Vec<Complex64>,
}

impl ProjPoint {
    /// Normalizes any nonzero vector of `C^{n+1}`, `n >= 1`.
    pub fn from_complex(mut z: Vec<Complex64>) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: z.len(),
            });
        }
        let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("zero vector has no projective class".into()));
        }
        let lead = z.iter().find(|c| c.norm() > PHASE_TOL).copied().expect("nonzero vector");
        let phase = lead.conj() / lead.norm();
        z.iter_mut().for_each(|c| *c = *c * phase / n);
        Ok(Self { rep: z })
    }

    /// From interleaved real coordinates; the vector must be a unit vector.
    pub fn from_real(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: x.len() + 1,
                found: x.len(),
            });
        }
        let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Self::from_complex(to_complex(x))
    }

    /// `n` in `CP^n`.
    pub fn n(&self) -> usize {
        self.rep.len() - 1
    }

    pub fn rep(&self) -> &[Complex64] {
        &self.rep
    }

    pub fn to_real(&self) -> Vec<f64> {
        to_real(&self.rep)
    }

    /// The representative as a point of `S^{2n+1}`.
    pub fn point(&self) -> Point {
        Point::from_raw(self.to_real())
    }

    /// `rep · e^{iθ}`.
    pub fn fiber_point(&self, theta: f64) -> Point {
        let z = Complex64::from_polar(1.0, theta);
        Point::from_raw(to_real(&self.rep.iter().map(|c| c * z).collect::<Vec<_>>()))
    }

    pub fn same_as(&self, other: &ProjPoint) -> bool {
        cp_distance(self, other) <= SAME_POINT_TOL
    }
}

/// `Σ conj(a_i) b_i`.
pub fn hermitian(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

pub fn to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// The complex projective map `ω ↦ [ω]`.
pub fn proj(omega: &Point) -> Result<ProjPoint> {
    ProjPoint::from_real(omega.coords())
}

/// Fubini-Study distance `arccos |⟨p, q⟩| ∈ [0, π/2]`, evaluated as
/// `atan2(|q - ⟨p, q⟩ p|, |⟨p, q⟩|)` to stay accurate near zero.
pub fn cp_distance(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let c = hermitian(&p.rep, &q.rep);
    let perp = q
        .rep
        .iter()
        .zip(&p.rep)
        .map(|(b, a)| (b - c * a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    perp.atan2(c.norm()).min(FRAC_PI_2)
}

/// The fiber great circle `{rep · e^{iθ}}` as two half-circle arcs.
pub fn fiber_curve(p: &ProjPoint) -> Curve {
    let (u, v) = fiber_frame(p);
    let a = Arc::new(u.clone(), v.clone(), 0.0, PI).expect("orthonormal frame");
    let b = Arc::new(u, v, PI, TAU).expect("orthonormal frame");
    Curve::new(vec![
        Segment::arc(a, 0.5, NodeId(0), NodeId(1)),
        Segment::arc(b, 0.5, NodeId(1), NodeId(0)),
    ])
    .expect("fiber halves join")
}

/// Orthonormal frame `(rep, i · rep)` of the fiber plane.
pub fn fiber_frame(p: &ProjPoint) -> (Point, Point) {
    let i_rep: Vec<Complex64> = p.rep.iter().map(|c| c * Complex64::i()).collect();
    (p.point(), Point::from_raw(to_real(&i_rep)))
}

/// `(1/2π) ∮ x^α(rep e^{iθ}) dθ` by the `2k+3`-node trapezoid rule, exact for
/// a monomial of degree `k`.
pub fn fiber_average(alpha: &MultiIndex, p: &ProjPoint) -> f64 {
    let n = 2 * alpha.degree() as usize + 3;
    (0..n)
        .map(|j| alpha.eval(p.fiber_point(TAU * j as f64 / n as f64).coords()))
        .sum::<f64>()
        / n as f64
}

/// Fiber averages of a whole monomial set at once.
pub fn fiber_averages(set: &MonomialSet, p: &ProjPoint, max_degree: usize) -> Vec<f64> {
    let n = 2 * max_degree + 3;
    let mut acc = vec![0.0; set.len()];
    let mut vals = vec![0.0; set.len()];
    for j in 0..n {
        set.eval_into(p.fiber_point(TAU * j as f64 / n as f64).coords(), &mut vals);
        acc.iter_mut().zip(&vals).for_each(|(a, v)| *a += v);
    }
    acc.iter_mut().for_each(|a| *a /= n as f64);
    acc
}

/// Inverse of [`s2_from_cp1`].
pub fn cp1_from_s2(p: &Point) -> Result<ProjPoint> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: p.dim(),
        });
    }
    let (x, y, z) = (p.coords()[0], p.coords()[1], p.coords()[2]);
    let (z0, z1) = if x >= 0.0 {
        let z0 = ((1.0 + x) / 2.0).sqrt();
        (Complex64::new(z0, 0.0), Complex64::new(y, -z) / (2.0 * z0))
    } else {
        let z1 = ((1.0 - x) / 2.0).sqrt();
        (Complex64::new(y, z) / (2.0 * z1), Complex64::new(z1, 0.0))
    };
    ProjPoint::from_complex(vec![z0, z1])
}

/// `[z_0 : z_1] ↦ (|z_0|^2 - |z_1|^2, 2 Re(z_0 conj z_1), 2 Im(z_0 conj z_1))`,
/// an isometry onto the sphere of radius `1/2` after halving distances.
pub fn s2_from_cp1(q: &ProjPoint) -> Result<Point> {
    if q.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: q.n(),
        });
    }
    let (a, b) = (q.rep[0], q.rep[1]);
    let w = a * b.conj();
    Ok(Point::from_raw(vec![a.norm_sqr() - b.norm_sqr(), 2.0 * w.re, 2.0 * w.im]))
}

/// Great-circle arc from `z_start` to the representative `z_q` of `q` with
/// `⟨z_start, z_q⟩` real and positive. It is horizontal (orthogonal to the
/// fibers) and projects onto the geodesic from `[z_start]` to `q`, with the
/// same length.
pub fn horizontal_lift(z_start: &Point, q: &ProjPoint) -> Result<Arc> {
    let z = to_complex(z_start.coords());
    if z.len() != q.rep.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            found: q.rep.len(),
        });
    }
    let c = hermitian(&z, &q.rep);
    let m = c.norm();
    if m < 1e-9 {
        return Err(Error::OrthogonalFibers);
    }
    if m > 1.0 - 1e-15 {
        return Err(Error::SameFiber);
    }
    let phase = c.conj() / m;
    let target: Vec<Complex64> = q.rep.iter().map(|x| x * phase).collect();
    great_arc(z_start, &Point::from_raw(to_real(&target)))
}

/// A finite set `Y ⊂ CP^n` claimed to be a projective `t`-design.
#[derive(Clone, Debug)]
pub struct ProjectiveDesignSet {
    points: Vec<ProjPoint>,
    strength: usize,
}

impl ProjectiveDesignSet {
    pub fn new(points: Vec<ProjPoint>, strength: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("projective design needs at least one point".into()));
        }
        let n = points[0].n();
        if let Some(p) = points.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.n(),
            });
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].same_as(&points[j]) {
                    return Err(Error::DuplicatePoints(i, j));
                }
            }
        }
        Ok(Self { points, strength })
    }

    /// Image of an `S^2` design under `S^2 ≅ CP^1`; strength carries over.
    pub fn from_s2_set(set: &crate::design_sets::WeightedDesignSet) -> Result<Self> {
        let pts = set.points().iter().map(cp1_from_s2).collect::<Result<Vec<_>>>()?;
        Self::new(pts, set.strength())
    }

    /// The coordinate lines `[e_0], ..., [e_n]`, a projective 1-design.
    pub fn coordinate_lines(n: usize) -> Result<Self> {
        let pts = (0..=n)
            .map(|i| {
                let mut z = vec![Complex64::new(0.0, 0.0); n + 1];
                z[i] = Complex64::new(1.0, 0.0);
                ProjPoint::from_complex(z)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts, 1)
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
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

    pub fn n(&self) -> usize {
        self.points[0].n()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = ProjFile {
            n: self.n(),
            strength: self.strength,
            points: self.points.iter().map(ProjPoint::to_real).collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }
}

impl FromStr for ProjectiveDesignSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let file: ProjFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let pts = file
            .points
            .iter()
            .map(|row| {
                if row.len() != 2 * file.n + 2 {
                    return Err(Error::DimensionMismatch {
                        expected: 2 * file.n + 2,
                        found: row.len(),
                    });
                }
                ProjPoint::from_real(row).map_err(|e| Error::InvariantViolation(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts, file.strength)
    }
}

#[derive(Serialize, Deserialize)]
struct ProjFile {
    n: usize,
    strength: usize,
    points: Vec<Vec<f64>>,
}

/// `cp1-<name>` for an `S^2` builtin (e.g. `cp1-octahedron`) or
/// `coordinate-lines:<n>`.
pub fn builtin_projective_set(name: &str) -> Result<ProjectiveDesignSet> {
    if let Some(rest) = name.strip_prefix("cp1-") {
        let b: Builtin = rest.parse()?;
        let set = b.build()?;
        if set.dim() != 3 {
            return Err(Error::UnknownFamily(format!("{name} (not a set on S^2)")));
        }
        return ProjectiveDesignSet::from_s2_set(&set);
    }
    if let Some(n) = name.strip_prefix("coordinate-lines:") {
        let n = n.parse().map_err(|_| Error::UnknownFamily(name.to_string()))?;
        return ProjectiveDesignSet::coordinate_lines(n);
    }
    Err(Error::UnknownFamily(name.to_string()))
}

/// Compares `(1/|Y|) Σ_y fiber_average(x^α, y)` with the `S^{2n+1}` average
/// for every real monomial of degree `<= 2t + 1`.
pub fn verify_projective_design(y: &ProjectiveDesignSet, t: usize, tolerance: f64) -> DesignReport {
    let dim = 2 * y.n() + 2;
    let deg = 2 * t + 1;
    let set = MonomialSet::new(dim, deg);
    let mut acc = vec![0.0; set.len()];
    for p in y.points() {
        let f = fiber_averages(&set, p, deg);
        acc.iter_mut().zip(f).for_each(|(a, v)| *a += v);
    }
    let defects: Vec<f64> = acc
        .iter()
        .zip(set.averages())
        .map(|(a, s)| (a / y.len() as f64 - s).abs())
        .collect();
    DesignReport::from_defects(t, &monomial_basis(dim, deg), &defects, tolerance)
}
