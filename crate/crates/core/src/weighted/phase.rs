use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dual::Dual;
use crate::{Error, Result};

/// Tolerance for `θ(0) - θ(1) ∈ 2πZ`.
pub const CLOSURE_TOL: f64 = 1e-10;

const FD_STEP: f64 = 1e-6;

/// A real phase function `θ`, continuous and piecewise smooth.
#[derive(Clone)]
pub enum PhaseFunction {
    Constant(f64),
    /// `θ(x) = offset + slope * x`.
    Linear { offset: f64, slope: f64 },
    /// Arbitrary user function; derivatives by central differences.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl PhaseFunction {
    pub fn zero() -> Self {
        PhaseFunction::Constant(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PhaseFunction::Constant(c) => *c,
            PhaseFunction::Linear { offset, slope } => offset + slope * x,
            PhaseFunction::Custom(f) => f(x),
        }
    }

    pub fn eval_dual(&self, x: Dual) -> Dual {
        match self {
            PhaseFunction::Constant(c) => Dual::constant(*c),
            PhaseFunction::Linear { offset, slope } => x * *slope + *offset,
            PhaseFunction::Custom(f) => {
                let d = (f(x.v + FD_STEP) - f(x.v - FD_STEP)) / (2.0 * FD_STEP);
                Dual::new(f(x.v), d * x.d)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            PhaseFunction::Constant(_) => true,
            PhaseFunction::Linear { slope, .. } => *slope == 0.0,
            PhaseFunction::Custom(_) => false,
        }
    }

    /// Checks `θ(0) - θ(1) ∈ 2πZ`, required of phases driven by a periodic
    /// argument on `[0, 1]`.
    pub fn check_closure(&self) -> Result<()> {
        let gap = self.eval(0.0) - self.eval(1.0);
        let off = gap - TAU * (gap / TAU).round();
        if off.abs() > CLOSURE_TOL {
            return Err(Error::PhaseClosureViolation { gap });
        }
        Ok(())
    }
}

impl fmt::Debug for PhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseFunction::Constant(c) => write!(f, "Constant({c})"),
            PhaseFunction::Linear { offset, slope } => write!(f, "Linear({offset} + {slope} x)"),
            PhaseFunction::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl FromStr for PhaseFunction {
    type Err = Error;

    /// `const:v` or `linear:a,b` (meaning `a + b x`); numbers may be written
    /// with `pi`, e.g. `pi/3`, `-2pi`, `3*pi/4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("phase `{s}`: expected const:v or linear:a,b"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => Ok(PhaseFunction::Constant(parse_angle(rest)?)),
            "linear" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Ok(PhaseFunction::Linear {
                    offset: parse_angle(a)?,
                    slope: parse_angle(b)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// Parses a float or a rational multiple of `pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot read `{s}` as a number"));
    let Some(idx) = s.find("pi") else {
        return s.parse().map_err(|_| bad());
    };
    let coef = s[..idx].trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let tail = s[idx + 2..].trim();
    let div = match tail.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if tail.is_empty() => 1.0,
        None => return Err(bad()),
    };
    Ok(coef * PI / div)
}
