//! Monomial basis of `P_t(S^d)`, exact sphere averages and sup-norms.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Exponent vector `α` of the monomial `x^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&a, &xi)| xi.powi(a as i32)).product()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }
}

/// All multi-indices in `dim` variables of degree at most `t`, graded, and
/// lexicographically descending within each degree.
pub fn monomial_basis(dim: usize, t: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for deg in 0..=t as u32 {
        let mut cur = vec![0u32; dim];
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        cur[pos] = a;
        fill(cur, pos + 1, remaining - a, out);
    }
    cur[pos] = 0;
}

/// `C(t + dim, dim)`, the size of [`monomial_basis`].
pub fn basis_size(dim: usize, t: usize) -> usize {
    let (n, k) = ((t + dim) as u128, dim.min(t) as u128);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r as usize
}

/// Normalized average of `x^α` over `S^d` (`α` has `d + 1` entries):
/// zero if some exponent is odd, otherwise
/// `∏ (α_i - 1)!! / ∏_{j=1}^{k} (d + 2j - 1)` with `|α| = 2k`.
pub fn sphere_average(alpha: &MultiIndex, d: usize) -> f64 {
    assert_eq!(alpha.dim(), d + 1, "multi-index length must be d + 1");
    if !alpha.is_even() {
        return 0.0;
    }
    let k = alpha.degree() / 2;
    let mut num: u128 = 1;
    for &a in alpha.exponents() {
        let mut j = a as u128;
        while j > 1 {
            j -= 1;
            num *= j;
            j -= 1;
        }
    }
    let mut den: u128 = 1;
    for j in 1..=k as u128 {
        den *= d as u128 + 2 * j - 1;
    }
    let g = gcd(num, den);
    (num / g) as f64 / (den / g) as f64
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `sup_{S^d} x^α = ∏ (α_i / k)^{α_i / 2}` for `|α| = k ≥ 1`, and 1 for the
/// constant. Odd exponents do not matter since coordinate signs can be flipped.
pub fn monomial_sup(alpha: &MultiIndex) -> f64 {
    let k = alpha.degree() as f64;
    if k == 0.0 {
        return 1.0;
    }
    alpha
        .exponents()
        .iter()
        .filter(|&&a| a > 0)
        .map(|&a| (a as f64 / k).powf(a as f64 / 2.0))
        .product()
}

/// The point where [`monomial_sup`] is attained: `x_i = sqrt(α_i / k)`.
pub fn monomial_maximizer(alpha: &MultiIndex) -> Vec<f64> {
    let k = alpha.degree() as f64;
    if k == 0.0 {
        let mut x = vec![0.0; alpha.dim()];
        x[0] = 1.0;
        return x;
    }
    alpha.exponents().iter().map(|&a| (a as f64 / k).sqrt()).collect()
}

/// Evaluates a whole basis at a point, sharing the coordinate powers.
#[derive(Clone, Debug)]
pub struct MonomialSet {
    dim: usize,
    max_degree: usize,
    basis: Vec<MultiIndex>,
}

impl MonomialSet {
    pub fn new(dim: usize, t: usize) -> Self {
        Self {
            dim,
            max_degree: t,
            basis: monomial_basis(dim, t),
        }
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let stride = self.max_degree + 1;
        let mut pw = vec![1.0; self.dim * stride];
        for i in 0..self.dim {
            for k in 1..stride {
                pw[i * stride + k] = pw[i * stride + k - 1] * x[i];
            }
        }
        for (o, m) in out.iter_mut().zip(&self.basis) {
            *o = m
                .exponents()
                .iter()
                .enumerate()
                .map(|(i, &a)| pw[i * stride + a as usize])
                .product();
        }
    }

    pub fn averages(&self) -> Vec<f64> {
        self.basis.iter().map(|m| sphere_average(m, self.dim - 1)).collect()
    }

    pub fn sups(&self) -> Vec<f64> {
        self.basis.iter().map(monomial_sup).collect()
    }
}

/// A uniformly distributed point on `S^{dim-1}` (Box-Muller normals).
pub fn random_sphere_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim)
            .map(|_| {
                let u1: f64 = 1.0 - rng.gen::<f64>();
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
            })
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            v.iter_mut().for_each(|x| *x /= n);
            return v;
        }
    }
}

/// Monte-Carlo estimate of the `L^p(σ)` norm of `x^α` from given sphere samples.
pub fn lp_norm_estimate(alpha: &MultiIndex, p: u32, samples: &[Vec<f64>]) -> f64 {
    let mean = samples.iter().map(|x| alpha.eval(x).abs().powi(p as i32)).sum::<f64>() / samples.len() as f64;
    mean.powf(1.0 / p as f64)
}
