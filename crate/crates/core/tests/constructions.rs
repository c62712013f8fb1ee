use std::f64::consts::{PI, TAU};

use design_curves::design_sets::builtin_set;
use design_curves::poly::{lp_norm_estimate, monomial_basis, monomial_sup, random_sphere_point, MultiIndex};
use design_curves::weighted::{build_wxm, explicit_s2, verify_weighted_curve, PhaseFunction, RotationPath};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn explicit_s2_is_wxm_of_a_spun_polygon() {
    for t in 1..=3 {
        let theta = PhaseFunction::Linear { offset: 0.3, slope: 0.5 };
        let a = explicit_s2(t, theta.clone()).unwrap();
        let set = builtin_set(&format!("polygon:{}", 2 * t)).unwrap();
        let m = RotationPath::PlaneSpin {
            dim: 2,
            i: 0,
            j: 1,
            angle: theta,
        };
        let b = build_wxm(&set, m).unwrap();
        for k in 0..=400 {
            let s = k as f64 / 400.0;
            let (p, q) = (a.point_at(s), b.point_at(s));
            let gap: f64 = p.coords().iter().zip(q.coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-12, "t = {t}, s = {s}: gap {gap}");
        }
    }
}

/// `∫_0^1 f(γ(s)) ds = ½ ∫_{-1}^{1} Σ λ_i f(w, √(1-w²) M(w) x_i) dw`, with the
/// right side evaluated independently after `w = -cos θ`.
#[test]
fn wxm_integral_identity() {
    let set = builtin_set("octahedron").unwrap();
    let m = RotationPath::spin(3, 0, 1, 0.7).unwrap();
    let curve = build_wxm(&set, m.clone()).unwrap();
    let n = 4000;
    for alpha in monomial_basis(4, 4) {
        let lhs = curve.param_integral(|x| alpha.eval(x)).unwrap();
        let mut rhs = 0.0;
        for k in 0..=n {
            let theta = PI * k as f64 / n as f64;
            let w = -theta.cos();
            let r = theta.sin();
            let rot = m.matrix(w);
            let mut acc = 0.0;
            for (x, lambda) in set.points().iter().zip(set.weights()) {
                let v = &rot * nalgebra::DVector::from_column_slice(x.coords());
                let mut p = vec![w];
                p.extend(v.iter().map(|c| r * c));
                acc += lambda * alpha.eval(&p);
            }
            let simpson = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            rhs += simpson * acc * theta.sin();
        }
        rhs *= PI / n as f64 / 3.0 * 0.5;
        assert!((lhs - rhs).abs() < 1e-9, "{:?}: {lhs} vs {rhs}", alpha.exponents());
    }
}

#[test]
fn wxm_passes_through_the_poles_at_breakpoints() {
    let set = builtin_set("octahedron").unwrap();
    let curve = build_wxm(&set, RotationPath::spin(3, 1, 2, 1.3).unwrap()).unwrap();
    for (i, &s) in curve.breakpoints().iter().enumerate() {
        let p = curve.point_at(s);
        let expected = if i % 2 == 0 { -1.0 } else { 1.0 };
        assert!((p.coords()[0] - expected).abs() < 1e-12, "breakpoint {i}: {:?}", p.coords());
        assert!(p.coords()[1..].iter().all(|c| c.abs() < 1e-7));
    }
}

#[test]
fn spun_wxm_stays_a_design_on_s2() {
    let set = builtin_set("polygon:6").unwrap();
    for rate in [0.0, 0.4, 2.5] {
        let c = build_wxm(&set, RotationPath::spin(2, 0, 1, rate).unwrap()).unwrap();
        assert!(verify_weighted_curve(&c, 5, 1e-9).unwrap().pass);
        assert!(!verify_weighted_curve(&c, 6, 1e-9).unwrap().pass);
    }
    let full = explicit_s2(3, PhaseFunction::zero()).unwrap();
    assert!((full.length().unwrap() - 3.0 * TAU).abs() < 1e-9);
}

#[test]
fn lp_norms_are_monotone_and_below_the_sup() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<Vec<f64>> = (0..20_000).map(|_| random_sphere_point(4, &mut rng)).collect();
    for e in [[2, 0, 0, 0], [1, 1, 0, 0], [2, 1, 1, 0], [0, 3, 0, 1]] {
        let a = MultiIndex::new(e.to_vec());
        let norms: Vec<f64> = [1, 2, 4, 8, 32].iter().map(|&p| lp_norm_estimate(&a, p, &samples)).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1] + 1e-15), "{e:?}: {norms:?}");
        assert!(*norms.last().unwrap() <= monomial_sup(&a) + 1e-15);
    }
    // ∫ x_1^2 dσ on S^3 is 1/4, so the L^1 norm of x_1^2 is 1/4.
    let l1 = lp_norm_estimate(&MultiIndex::new(vec![2, 0, 0, 0]), 1, &samples);
    assert!((l1 - 0.25).abs() < 0.01);
}
