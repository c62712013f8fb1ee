//! Composite Gauss-Legendre quadrature with panel doubling.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Nodes per panel.
pub const GL_ORDER: usize = 32;
/// Default relative tolerance for curve integrals.
pub const REL_TOL: f64 = 1e-10;
/// Panels are doubled at most this many times.
pub const MAX_DOUBLINGS: u32 = 11;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Composite rule with `panels` equal panels on `[0, 1]`.
fn composite<F>(panels: usize, dim: usize, f: &mut F, sum: &mut [f64], abs: &mut [f64])
where
    F: FnMut(f64, &mut [f64]),
{
    let (x, w) = rule();
    let h = 1.0 / panels as f64;
    let mut buf = vec![0.0; dim];
    sum.iter_mut().for_each(|v| *v = 0.0);
    abs.iter_mut().for_each(|v| *v = 0.0);
    for p in 0..panels {
        let a = p as f64 * h;
        for (xi, wi) in x.iter().zip(w) {
            let u = a + 0.5 * h * (xi + 1.0);
            f(u, &mut buf);
            let wt = 0.5 * h * wi;
            for k in 0..dim {
                sum[k] += wt * buf[k];
                abs[k] += wt * buf[k].abs();
            }
        }
    }
}

/// Integrates the vector-valued `f` over `[0, 1]`, doubling the number of
/// panels until every component of two successive estimates agrees to
/// `rel_tol` relative to that component's absolute mass.
pub fn integrate_unit<F>(dim: usize, rel_tol: f64, mut f: F) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut prev = vec![0.0; dim];
    let mut abs = vec![0.0; dim];
    composite(1, dim, &mut f, &mut prev, &mut abs);
    let mut cur = vec![0.0; dim];
    let mut panels = 1;
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        composite(panels, dim, &mut f, &mut cur, &mut abs);
        let converged = cur
            .iter()
            .zip(&prev)
            .zip(&abs)
            .all(|((c, p), a)| (c - p).abs() <= rel_tol * a.max(f64::MIN_POSITIVE));
        if converged {
            return Ok(cur);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Err(Error::QuadratureNonconvergence {
        tolerance: rel_tol,
        panels,
    })
}

/// Scalar convenience wrapper around [`integrate_unit`].
pub fn integrate_unit_scalar<F>(rel_tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_unit(1, rel_tol, |u, out| out[0] = f(u)).map(|v| v[0])
}
