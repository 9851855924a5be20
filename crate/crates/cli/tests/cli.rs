use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tanglie_cli::{run_command, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_command(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = run(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}\n{err}"));
    (code, v)
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn heisenberg_sectional() {
    let (code, v) = run_json(&["sectional", "heisenberg", "--plane", "Y^v,Z^v"]);
    assert_eq!(code, EXIT_OK);
    let k = v["result"]["sectional"].as_f64().unwrap();
    assert!((k - 0.125).abs() < 1e-10, "{k}");
    assert_eq!(v["status"], "pass");
}

#[test]
fn solvable_sectional() {
    let (code, v) = run_json(&["sectional", "solvable_rr2", "--plane", "Z^v,X^v"]);
    assert_eq!(code, EXIT_OK);
    let k = v["result"]["sectional"].as_f64().unwrap();
    assert!((k - 1.0 / 12.0).abs() < 1e-10, "{k}");
}

#[test]
fn sectional_is_scale_invariant() {
    let (_, a) = run_json(&["sectional", "heisenberg", "--plane", "X^v + Y^c,Z^v"]);
    let (_, b) = run_json(&[
        "sectional",
        "heisenberg",
        "--plane",
        "-2*X^v - 2*Y^c,0.5*Z^v + 3*X^v + 3*Y^c",
    ]);
    let ka = a["result"]["sectional"].as_f64().unwrap();
    let kb = b["result"]["sectional"].as_f64().unwrap();
    assert!((ka - kb).abs() < 1e-10);
}

#[test]
fn base_sectional_reports_both_metrics() {
    let (code, v) = run_json(&["sectional", "heisenberg", "--plane", "X,Y"]);
    assert_eq!(code, EXIT_OK);
    // Milnor: K(X,Y) = -3/4 for g = I on the Heisenberg algebra
    let k1 = v["result"]["sectional[g1]"].as_f64().unwrap();
    assert!((k1 + 0.75).abs() < 1e-12);
    assert!(v["result"]["sectional[g2]"].is_number());
}

#[test]
fn abelian_lift_connection_vanishes() {
    let (code, v) = run_json(&["connection", "abelian3", "--metric", "lift"]);
    assert_eq!(code, EXIT_OK);
    let t = &v["result"]["christoffel"];
    assert_eq!(t["shape"], serde_json::json!([6, 6, 6]));
    assert!(t["data"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x.as_f64() == Some(0.0)));
    assert!(t["index_convention"].as_str().unwrap().contains("lambda"));
}

#[test]
fn connection_methods_agree() {
    let mut tensors = Vec::new();
    for m in ["koszul", "closed", "structconst"] {
        let (code, v) = run_json(&["connection", "solvable_rr2", "--method", m]);
        assert_eq!(code, EXIT_OK);
        tensors.push(v["result"]["christoffel"]["data"].clone());
    }
    for t in &tensors[1..] {
        for (a, b) in t
            .as_array()
            .unwrap()
            .iter()
            .zip(tensors[0].as_array().unwrap())
        {
            assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn base_metric_only_supports_koszul() {
    let (code, _, err) = run(&["connection", "su2", "--metric", "g1", "--method", "closed"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("lift"));
    let (code, _, _) = run(&["connection", "su2", "--metric", "g1"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn curvature_compare_passes_with_corrected_blocks() {
    let (code, v) = run_json(&["curvature", "solvable_rr2", "--compare"]);
    assert_eq!(code, EXIT_OK);
    let blocks = v["result"]["block_deviation"].as_array().unwrap();
    assert_eq!(blocks.len(), 6);
    assert!(v["residuals"]["block[vvc->c].as_printed"].as_f64().unwrap() > 1e-3);
}

#[test]
fn check_reports_lift_residuals() {
    let (code, v) = run_json(&["check", &data("heisenberg.json")]);
    assert_eq!(code, EXIT_OK);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"lift.connection.closed_vs_koszul"));
    // residuals are reported even when zero
    assert_eq!(v["residuals"]["jacobi"].as_f64(), Some(0.0));
    assert_eq!(
        v["input"]["source"].as_str().unwrap(),
        data("heisenberg.json")
    );
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn field_vertical_center() {
    let (code, v) = run_json(&["field", "heisenberg", "--vector", "Z^v"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["killing"], true);
    let (code, v) = run_json(&["field", "heisenberg", "--vector", "X^v"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["killing"], false);
    assert_eq!(v["result"]["base_central"], false);
}

#[test]
fn equiv_heisenberg() {
    let (code, v) = run_json(&["equiv", "heisenberg", "--tau", "tau", "--tau2", "tau"]);
    assert_eq!(code, EXIT_OK);
    assert!(v["residuals"]["lift.pullback_identity"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["result"]["lift_automorphism"], true);

    // diag(2,3,1) is not an automorphism of the Heisenberg algebra
    let body = heis(
        r#"{"i":0,"j":1,"k":2,"value":1}"#,
        "[[2,0,0],[0,2,0],[0,0,1]]",
    )
    .replace(
        "}}",
        r#"}, "automorphisms": {"bad": [[2,0,0],[0,3,0],[0,0,1]]}}"#,
    );
    let (_d, p) = corrupted(&body);
    let (code, v) = run_json(&["equiv", &p, "--tau", "bad"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert_eq!(v["status"], "fail");
}

#[test]
fn symplectic_lift() {
    let (code, v) = run_json(&["symplectic", "aff1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["closedness"].as_array().unwrap().len(), 8);
    assert!(v["result"]["smallest_singular_value"].as_f64().unwrap() > 1e-6);
}

#[test]
fn lift_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lift.json");
    let p = path.to_str().unwrap();
    let (code, v) = run_json(&["lift", "solvable_rr2", "--output", p]);
    assert_eq!(code, EXIT_OK);
    assert!(v["residuals"]["round_trip.connection"].as_f64().unwrap() <= 1e-9);

    let (code, v) = run_json(&["check", p]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["dim"], 6);

    let (code, v) = run_json(&["connection", p, "--metric", "g"]);
    assert_eq!(code, EXIT_OK);
    let (_, w) = run_json(&["connection", "solvable_rr2"]);
    let a = v["result"]["christoffel"]["data"].as_array().unwrap();
    let b = w["result"]["christoffel"]["data"].as_array().unwrap();
    for (x, y) in a.iter().zip(b) {
        assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn lift_without_output_prints_document() {
    let (code, out, _) = run(&["lift", "heisenberg"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "tanglie/1");
    assert_eq!(v["name"], "heisenberg_lift");
    assert_eq!(v["lift"]["lambdas"], serde_json::json!([1.0, 2.0, 2.0]));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["curvature", "heisenberg", "--compare", "--json"][..],
        &["lift", "solvable_rr2"][..],
        &["check", "su2"][..],
    ] {
        let (_, a, _) = run(args);
        let (_, b, _) = run(args);
        assert_eq!(a, b);
    }
}

#[test]
fn tolerance_flag_changes_verdict() {
    // rounding-level residuals fail at zero tolerance
    let (code, _, _) = run(&["curvature", "solvable_rr2", "--compare", "--tol", "0"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    let (code, _, _) = run(&["check", "abelian3", "--tol", "-1"]);
    assert_eq!(code, EXIT_INPUT);
}

fn corrupted(body: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, body).unwrap();
    let p = path.to_string_lossy().into_owned();
    (dir, p)
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tanglie"))
        .args(args)
        .output()
        .unwrap()
}

const HEIS: &str = r#"{"schema": "tanglie/1", "name": "h", "dim": 3, "basis": ["X", "Y", "Z"],
 "brackets": [BRACKETS],
 "metrics": {"g1": [[1,0,0],[0,1,0],[0,0,1]], "g2": G2}}"#;

fn heis(brackets: &str, g2: &str) -> String {
    HEIS.replace("BRACKETS", brackets).replace("G2", g2)
}

#[test]
fn exit_codes_for_corrupted_fixtures() {
    let ok = heis(
        r#"{"i":0,"j":1,"k":2,"value":1}"#,
        "[[2,0,0],[0,2,0],[0,0,1]]",
    );
    let (_d0, good) = corrupted(&ok);
    assert_eq!(binary(&["check", &good]).status.code(), Some(EXIT_OK));

    let (_d1, truncated) = corrupted(&ok[..ok.len() / 2]);
    let o = binary(&["check", &truncated]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
    assert!(!o.stderr.is_empty());

    let (_d2, dup) = corrupted(&heis(
        r#"{"i":0,"j":1,"k":2,"value":1},{"i":1,"j":0,"k":2,"value":1}"#,
        "[[2,0,0],[0,2,0],[0,0,1]]",
    ));
    let o = binary(&["check", &dup]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));

    let (_d3, indef) = corrupted(&heis(
        r#"{"i":0,"j":1,"k":2,"value":1}"#,
        "[[1,0,0],[0,-1,0],[0,0,1]]",
    ));
    let o = binary(&["check", &indef]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive"));

    // [X,Y]=Z, [Y,Z]=X, [X,Z]=X violates Jacobi
    let (_d4, jac) = corrupted(&heis(
        r#"{"i":0,"j":1,"k":2,"value":1},{"i":1,"j":2,"k":0,"value":1},{"i":0,"j":2,"k":0,"value":1}"#,
        "[[2,0,0],[0,2,0],[0,0,1]]",
    ));
    assert_eq!(binary(&["check", &jac]).status.code(), Some(EXIT_INPUT));

    assert_eq!(
        binary(&["check", "/no/such/file.json"]).status.code(),
        Some(EXIT_INPUT)
    );
    assert_eq!(
        binary(&["sectional", "heisenberg", "--plane", "X^w,Y^v"])
            .status
            .code(),
        Some(EXIT_INPUT)
    );
    assert_eq!(
        binary(&["sectional", "heisenberg", "--plane", "X^v,X^v"])
            .status
            .code(),
        Some(EXIT_INPUT)
    );
    assert_eq!(
        binary(&["sectional", "heisenberg", "--plane", "X^v,Y"])
            .status
            .code(),
        Some(EXIT_INPUT)
    );
    assert_eq!(
        binary(&["symplectic", "heisenberg"]).status.code(),
        Some(EXIT_INPUT)
    );
    assert_eq!(binary(&["bogus"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(binary(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn odd_dimensional_symplectic_input_is_rejected() {
    let body = r#"{"schema": "tanglie/1", "name": "odd", "dim": 3, "basis": ["X", "Y", "Z"],
 "brackets": [],
 "metrics": {"g1": [[1,0,0],[0,1,0],[0,0,1]], "g2": [[1,0,0],[0,1,0],[0,0,1]]},
 "symplectic": {"w1": [[0,1,0],[-1,0,0],[0,0,0]], "w2": [[0,1,0],[-1,0,0],[0,0,0]]}}"#;
    let (_d, p) = corrupted(body);
    let o = binary(&["symplectic", &p]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&o.stderr).contains("symplectic"));
}

#[test]
fn expression_error_names_column() {
    let (code, _, err) = run(&["field", "heisenberg", "--vector", "X^v + Q^c"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("column"), "{err}");
}
