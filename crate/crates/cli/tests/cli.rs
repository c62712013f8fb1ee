use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_design-curves"));
    c.env_remove("DESIGN_CURVES_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn explicit_s2_report() {
    let out = run(&["gen-explicit-s2", "--t", "2", "--verify", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["length"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-9);
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["report"]["defects"].as_array().unwrap().len(), 20);
    assert!(v["spin_rate"].is_null());
}

#[test]
fn failing_verification_exits_one() {
    let out = run(&["verify", "--set", "octahedron", "--t", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["kind"], "set");
    assert_eq!(v["report"]["pass"], false);
    assert_eq!(run(&["verify", "--set", "octahedron", "--t", "3"]).status.code(), Some(0));
    let p = run(&["verify", "--set", "cp1-octahedron", "--t", "3"]);
    assert_eq!(p.status.code(), Some(0));
    assert_eq!(json(&p)["kind"], "projective");
}

#[test]
fn approx_report_fields() {
    let out = run(&["gen-approx", "--set", "cp1-octahedron", "--t", "7", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["t", "Y_size", "W", "delta", "length", "c", "eps_apriori", "eps_empirical", "simple", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["simple"], true);
    assert!(v["eps_empirical"].as_f64().unwrap() <= v["eps_apriori"].as_f64().unwrap());
    assert!((v["length"].as_f64().unwrap() - (12.0 * PI + 2.5 * PI - 0.1)).abs() < 1e-9);
}

#[test]
fn same_seed_is_bit_identical() {
    let args = ["gen-approx", "--set", "cp1-tetrahedron", "--t", "3", "--delta", "0.2", "--seed", "17"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--set", "octahedron"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--set", "octahedron", "--t", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--set", "no-such-set", "--t", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gen-explicit-s2", "--t", "2", "--theta1", "cubic:1"]).status.code(), Some(2));
    assert_eq!(
        run(&["gen-approx", "--set", "cp1-octahedron", "--t", "7", "--delta", "100"]).status.code(),
        Some(2)
    );
}

#[test]
fn io_errors_exit_three() {
    let out = run(&["verify", "--set", "/definitely/missing.json", "--t", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["verify", "--set", bad.to_str().unwrap(), "--t", "2"]).status.code(), Some(3));
}

#[test]
fn tolerance_flag_and_env() {
    // The octahedron's t = 4 defect is 2/15.
    assert_eq!(run(&["verify", "--set", "octahedron", "--t", "4", "--tol", "0.2"]).status.code(), Some(0));
    let out = bin()
        .args(["verify", "--set", "octahedron", "--t", "4"])
        .env("DESIGN_CURVES_TOL", "0.2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["tolerance"], 0.2);
}

#[test]
fn out_file_and_report_verb() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["verify", "--set", "octahedron", "--t", "4", "--out", p]).status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verb"], "verify");
    let out = run(&["report", p]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result: fail") && text.contains("worst monomial"));
}

#[test]
fn user_sets_load_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    let h = 0.5f64.sqrt();
    let body = format!(
        r#"{{"dimension": 2, "strength": 3, "points": [[1,0],[{h},{h}],[0,1],[-{h},{h}],[-1,0],[-{h},-{h}],[0,-1],[{h},-{h}]], "weights": [0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125]}}"#
    );
    std::fs::write(&path, body).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["verify", "--set", p, "--t", "7"]).status.code(), Some(0));
    let out = run(&["gen-weighted", "--set", p, "--verify", "7"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn weighted_length_targeting() {
    let target = 6.0 * PI + 1.0;
    let out = run(&[
        "gen-weighted",
        "--set",
        "octahedron",
        "--profile",
        "marginal",
        "--target-length",
        &target.to_string(),
        "--verify",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["length"].as_f64().unwrap() - target).abs() < 1e-6);
    assert!(v["spin_rate"].as_f64().unwrap() > 0.0);
}

#[test]
fn mst_and_hybrid() {
    let v = json(&run(&["mst", "--set", "cp1-octahedron", "--delta", "0.1"]));
    assert!((v["W"].as_f64().unwrap() - 2.5 * PI).abs() < 1e-12);
    assert_eq!(v["N"], 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
    assert!((v["delta_tilde"].as_f64().unwrap() - 0.01).abs() < 1e-15);

    for args in [
        vec!["hybrid", "--kind", "ehler1"],
        vec!["hybrid", "--kind", "ehler2"],
        vec!["hybrid", "--kind", "konig", "--set", "cp1-octahedron", "--t", "7"],
        vec!["hybrid", "--kind", "gon-split", "--set", "cross-polytope:3", "--t", "3", "--gon", "0,2,1,3"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(json(&out)["design"]["rho"].is_number());
    }
    assert_eq!(run(&["hybrid", "--kind", "ehler1", "--t", "3"]).status.code(), Some(1));
}

#[test]
fn csv_samples() {
    let out = run(&["export-samples", "--curve", "explicit-s2", "--t", "2", "--samples", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,x1,x2,x3");
    assert_eq!(lines.len(), 12);
    for line in &lines[1..] {
        let vals: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(vals.len(), 4);
        let n: f64 = vals[1..].iter().map(|x| x * x).sum();
        assert!((n - 1.0).abs() < 1e-12);
        // 17 significant digits.
        assert!(line.split(',').all(|f| f.split('e').next().unwrap().replace(['-', '.'], "").len() == 17));
    }
    let arc = run(&[
        "export-samples",
        "--curve",
        "approx",
        "--set",
        "cp1-octahedron",
        "--t",
        "7",
        "--delta",
        "0.1",
        "--samples",
        "5",
        "--by-arclength",
    ]);
    assert_eq!(arc.status.code(), Some(0));
    assert!(String::from_utf8(arc.stdout).unwrap().starts_with("s,x1,x2,x3,x4\n"));
}
