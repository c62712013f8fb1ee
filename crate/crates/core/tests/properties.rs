use std::f64::consts::{FRAC_PI_2, PI};

use design_curves::assembly::{assemble_gamma, build_mst};
use design_curves::design_sets::{builtin_set, verify_weighted_design_set, WeightedDesignSet};
use design_curves::poly::{monomial_sup, sphere_average, MultiIndex};
use design_curves::projective::{
    builtin_projective_set, cp_distance, horizontal_lift, proj, ProjPoint, ProjectiveDesignSet,
};
use design_curves::sphere::Point;
use nalgebra::{Matrix3, Rotation3, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;

fn unit(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, dim)
        .prop_filter("away from the origin", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
}

fn cp(n: usize) -> impl Strategy<Value = ProjPoint> {
    unit(2 * (n + 1)).prop_map(|x| ProjPoint::from_real(&x).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `Σ_i x_i^2 = 1` on the sphere.
    #[test]
    fn sphere_average_trace_identity(e in prop::collection::vec(0u32..4, 2..6)) {
        let d = e.len() - 1;
        let base = sphere_average(&MultiIndex::new(e.clone()), d);
        let sum: f64 = (0..e.len())
            .map(|i| {
                let mut f = e.clone();
                f[i] += 2;
                sphere_average(&MultiIndex::new(f), d)
            })
            .sum();
        prop_assert!((sum - base).abs() <= 1e-15 * base.abs().max(1.0));
    }

    #[test]
    fn sup_bounds_every_point(e in prop::collection::vec(0u32..5, 3), x in unit(3)) {
        let a = MultiIndex::new(e);
        prop_assert!(a.eval(&x).abs() <= monomial_sup(&a) + 1e-15);
    }

    #[test]
    fn cp_metric_axioms(p in cp(2), q in cp(2), r in cp(2), phase in 0.0..6.3f64) {
        let d = cp_distance(&p, &q);
        prop_assert!((0.0..=FRAC_PI_2 + 1e-15).contains(&d));
        prop_assert!((d - cp_distance(&q, &p)).abs() < 1e-12);
        prop_assert!(cp_distance(&p, &r) <= d + cp_distance(&q, &r) + 1e-12);
        let z = Complex64::from_polar(1.0, phase);
        let rotated = ProjPoint::from_complex(p.rep().iter().map(|c| c * z).collect()).unwrap();
        prop_assert!(rotated.same_as(&p));
        prop_assert!(cp_distance(&p, &p) < 1e-7);
    }

    #[test]
    fn horizontal_lift_realises_the_distance(p in cp(2), q in cp(2), phase in 0.0..6.3f64) {
        let d = cp_distance(&p, &q);
        prop_assume!(d > 1e-6 && d < FRAC_PI_2 - 1e-6);
        let arc = horizontal_lift(&p.fiber_point(phase), &q).unwrap();
        prop_assert!((arc.length() - d).abs() < 1e-9);
        prop_assert!(proj(&arc.end_point()).unwrap().same_as(&q));
        prop_assert!(proj(&arc.start_point()).unwrap().same_as(&p));
    }

    #[test]
    fn rotated_octahedron_is_a_three_design(a in 0.0..PI, b in 0.0..PI, c in 0.0..PI) {
        let rot: Matrix3<f64> = Rotation3::from_euler_angles(a, b, c).into_inner();
        let set = builtin_set("octahedron").unwrap();
        let pts = set
            .points()
            .iter()
            .map(|p| {
                let v = rot * Vector3::from_column_slice(p.coords());
                Point::normalized(v.iter().copied().collect()).unwrap()
            })
            .collect();
        let rotated = WeightedDesignSet::uniform(pts, 3).unwrap();
        prop_assert!(verify_weighted_design_set(&rotated, 3, 1e-9).pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn assembly_conserves_length(delta in 0.001..3.0f64, seed in 0u64..1000) {
        for name in ["cp1-octahedron", "cp1-tetrahedron"] {
            let y = builtin_projective_set(name).unwrap();
            let tree = build_mst(&y).unwrap();
            let a = assemble_gamma(&y, &tree, delta, None, seed).unwrap();
            let expected = 2.0 * PI * y.len() as f64 + a.constants.w - delta;
            prop_assert!((a.curve.length().unwrap() - expected).abs() < 1e-9);
            prop_assert!(a.simplicity.simple);
        }
    }
}

#[test]
fn json_round_trips() {
    let set = builtin_set("cross-polytope:4").unwrap();
    let back: WeightedDesignSet = set.to_json().parse().unwrap();
    assert_eq!(back.points(), set.points());
    assert_eq!(back.weights(), set.weights());
    let y = builtin_projective_set("cp1-octahedron").unwrap();
    let back: ProjectiveDesignSet = y.to_json().parse().unwrap();
    assert_eq!(back.len(), y.len());
    for (p, q) in back.points().iter().zip(y.points()) {
        assert!(p.same_as(q));
    }
}
