//! Forward-mode dual numbers.
//!
//! Curve segments are evaluated on `Dual` so that every closed-form family
//! yields its exact tangent alongside the position.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub const fn new(v: f64, d: f64) -> Self {
        Self { v, d }
    }

    pub const fn constant(v: f64) -> Self {
        Self { v, d: 0.0 }
    }

    /// The independent variable at `v`.
    pub const fn var(v: f64) -> Self {
        Self { v, d: 1.0 }
    }

    pub fn sin(self) -> Self {
        Self::new(self.v.sin(), self.d * self.v.cos())
    }

    pub fn cos(self) -> Self {
        Self::new(self.v.cos(), -self.d * self.v.sin())
    }

    /// Square root of `max(self, 0)`. The derivative is infinite at zero.
    pub fn sqrt(self) -> Self {
        if self.v <= 0.0 {
            return Self::new(0.0, if self.d == 0.0 { 0.0 } else { f64::INFINITY });
        }
        let r = self.v.sqrt();
        Self::new(r, self.d / (2.0 * r))
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.v * k, self.d * k)
    }
}

impl From<f64> for Dual {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(self, o: f64) -> Dual {
        Dual::new(self.v + o, self.d)
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(self, o: f64) -> Dual {
        Dual::new(self.v - o, self.d)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, o: f64) -> Dual {
        self.scale(o)
    }
}

impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        o.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let f = |x: Dual| (x * x).sin() * x.cos() + (x + 2.0).sqrt() / (x * 3.0 + 1.0);
        let g = |x: f64| (x * x).sin() * x.cos() + (x + 2.0).sqrt() / (x * 3.0 + 1.0);
        for &x in &[0.1, 0.7, 1.3, 2.9] {
            let h = 1e-6;
            let fd = (g(x + h) - g(x - h)) / (2.0 * h);
            let d = f(Dual::var(x));
            assert!((d.v - g(x)).abs() < 1e-15);
            assert!((d.d - fd).abs() < 1e-7, "{} vs {}", d.d, fd);
        }
    }

    #[test]
    fn sqrt_clamps_negative_input() {
        assert_eq!(Dual::constant(-1e-17).sqrt().v, 0.0);
    }
}
