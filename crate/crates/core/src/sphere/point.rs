use std::fmt;

use serde::{Deserialize, Serialize};

use super::{dot, norm};
use crate::{Error, Result};

/// Accepted deviation from unit norm.
pub const UNIT_TOL: f64 = 1e-12;

/// Identifier of a segment endpoint. Topology is decided by ids, never by
/// comparing coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A unit vector in `R^D`, `D >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: coords.len(),
            });
        }
        let n = norm(&coords);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self(coords))
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let n = norm(&coords);
        if coords.len() < 2 || n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize vector of norm {n} in dimension {}",
                coords.len()
            )));
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Ok(Self(coords))
    }

    /// Standard basis vector `e_i` in `R^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Self(c)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Great-circle distance.
    pub fn angle(&self, other: &Point) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    pub fn neg(&self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
