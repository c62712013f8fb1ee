//! Certification records.

use serde::{Deserialize, Serialize};

use crate::poly::MultiIndex;

/// Defect of one basis monomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDefect {
    pub exponents: MultiIndex,
    pub defect: f64,
}

/// Result of checking a design functional against sphere averages over the
/// monomial basis of degree at most `strength`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub strength: usize,
    pub defects: Vec<BasisDefect>,
    pub max_defect: f64,
    /// Monomial attaining `max_defect`.
    pub worst: Option<MultiIndex>,
    pub length: Option<f64>,
    pub epsilon_claimed: Option<f64>,
    pub epsilon_empirical: Option<f64>,
    pub c: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl DesignReport {
    /// Builds a report from per-monomial defects; passes iff the maximum is
    /// within `tolerance`.
    pub fn from_defects(strength: usize, basis: &[MultiIndex], defects: &[f64], tolerance: f64) -> Self {
        let mut max_defect = 0.0;
        let mut worst = None;
        for (m, &d) in basis.iter().zip(defects) {
            if d > max_defect || worst.is_none() {
                max_defect = d;
                worst = Some(m.clone());
            }
        }
        Self {
            strength,
            defects: basis
                .iter()
                .zip(defects)
                .map(|(m, &d)| BasisDefect {
                    exponents: m.clone(),
                    defect: d,
                })
                .collect(),
            max_defect,
            worst,
            length: None,
            epsilon_claimed: None,
            epsilon_empirical: None,
            c: None,
            tolerance,
            pass: max_defect <= tolerance,
        }
    }

    pub fn defect_of(&self, exponents: &[u32]) -> Option<f64> {
        self.defects
            .iter()
            .find(|d| d.exponents.exponents() == exponents)
            .map(|d| d.defect)
    }
}
