use nalgebra::DMatrix;

use super::PhaseFunction;
use crate::dual::Dual;
use crate::{Error, Result};

const ORTHO_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-6;

/// A piecewise smooth path `M : [-1, 1] → O(n)`.
#[derive(Clone, Debug)]
pub enum RotationPath {
    Constant(DMatrix<f64>),
    /// Rotation by `angle(w)` in the coordinate plane `(i, j)`.
    PlaneSpin {
        dim: usize,
        i: usize,
        j: usize,
        angle: PhaseFunction,
    },
    /// Entrywise linear interpolation between orthogonal knot matrices,
    /// projected back onto `O(n)` by polar decomposition.
    Interpolated { knots: Vec<(f64, DMatrix<f64>)> },
}

impl RotationPath {
    pub fn identity(dim: usize) -> Self {
        RotationPath::Constant(DMatrix::identity(dim, dim))
    }

    pub fn constant(m: DMatrix<f64>) -> Result<Self> {
        check_orthogonal(&m)?;
        Ok(RotationPath::Constant(m))
    }

    /// Spin by `rate * w` in the plane `(i, j)`.
    pub fn spin(dim: usize, i: usize, j: usize, rate: f64) -> Result<Self> {
        if i == j || i >= dim || j >= dim {
            return Err(Error::InvalidArgument(format!("bad spin plane ({i}, {j}) in dimension {dim}")));
        }
        Ok(RotationPath::PlaneSpin {
            dim,
            i,
            j,
            angle: PhaseFunction::Linear {
                offset: 0.0,
                slope: rate,
            },
        })
    }

    /// Knots must be strictly increasing, start at -1 and end at 1.
    pub fn interpolated(knots: Vec<(f64, DMatrix<f64>)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidArgument("need at least two knots".into()));
        }
        if knots[0].0 != -1.0 || knots[knots.len() - 1].0 != 1.0 || knots.windows(2).any(|k| k[1].0 <= k[0].0) {
            return Err(Error::InvalidArgument("knots must increase from -1 to 1".into()));
        }
        let n = knots[0].1.nrows();
        for (_, m) in &knots {
            if m.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.nrows(),
                });
            }
            check_orthogonal(m)?;
        }
        Ok(RotationPath::Interpolated { knots })
    }

    pub fn dim(&self) -> usize {
        match self {
            RotationPath::Constant(m) => m.nrows(),
            RotationPath::PlaneSpin { dim, .. } => *dim,
            RotationPath::Interpolated { knots } => knots[0].1.nrows(),
        }
    }

    pub fn matrix(&self, w: f64) -> DMatrix<f64> {
        match self {
            RotationPath::Constant(m) => m.clone(),
            RotationPath::PlaneSpin { dim, i, j, angle } => {
                let (s, c) = angle.eval(w).sin_cos();
                let mut m = DMatrix::identity(*dim, *dim);
                m[(*i, *i)] = c;
                m[(*j, *j)] = c;
                m[(*j, *i)] = s;
                m[(*i, *j)] = -s;
                m
            }
            RotationPath::Interpolated { knots } => {
                let w = w.clamp(-1.0, 1.0);
                let k = knots.partition_point(|(x, _)| *x <= w).clamp(1, knots.len() - 1);
                let (x0, m0) = &knots[k - 1];
                let (x1, m1) = &knots[k];
                let f = (w - x0) / (x1 - x0);
                polar(&(m0 * (1.0 - f) + m1 * f))
            }
        }
    }

    /// `M(w) x` with its derivative along `w`.
    pub fn apply(&self, w: Dual, x: &[f64]) -> Vec<Dual> {
        match self {
            RotationPath::Constant(m) => (0..m.nrows())
                .map(|r| Dual::constant((0..x.len()).map(|c| m[(r, c)] * x[c]).sum()))
                .collect(),
            RotationPath::PlaneSpin { i, j, angle, .. } => {
                let a = angle.eval_dual(w);
                let (s, c) = (a.sin(), a.cos());
                let mut out: Vec<Dual> = x.iter().map(|&v| Dual::constant(v)).collect();
                out[*i] = c * x[*i] - s * x[*j];
                out[*j] = s * x[*i] + c * x[*j];
                out
            }
            RotationPath::Interpolated { .. } => {
                let at = |v: f64| self.matrix(v) * nalgebra::DVector::from_column_slice(x);
                let val = at(w.v);
                let (lo, hi) = ((w.v - FD_STEP).max(-1.0), (w.v + FD_STEP).min(1.0));
                let der = (at(hi) - at(lo)) / (hi - lo);
                val.iter().zip(der.iter()).map(|(v, d)| Dual::new(*v, d * w.d)).collect()
            }
        }
    }
}

fn check_orthogonal(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("rotation matrix must be square".into()));
    }
    let err = (m.transpose() * m - DMatrix::identity(m.nrows(), m.nrows())).amax();
    if err > ORTHO_TOL {
        return Err(Error::InvariantViolation(format!("matrix is not orthogonal (error {err:e})")));
    }
    Ok(())
}

/// Orthogonal factor `U V^T` of the polar decomposition.
fn polar(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested") * svd.v_t.expect("requested")
}
