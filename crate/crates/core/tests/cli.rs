//! End-to-end checks of the command-line interface: exit codes, report
//! schema, and byte stability across invocations.

use std::process::{Command, Output};

fn dlchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlchar"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn verify_theorem_smallest_config_exits_zero_with_json_report() {
    let out = dlchar(&["verify-theorem", "--n", "1", "--q", "2", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["summary"]["total"], 3);
    assert_eq!(report["vacuous"], false);
    assert_eq!(report["manifest"]["kind"], "verify-theorem");
    // matrices serialize as coefficient vectors and the moduli are echoed
    assert!(report["cases"][0]["s_tilde"].is_array());
    assert!(report["manifest"]["moduli"].is_array());
    let case = &report["cases"][0];
    assert!(case["lhs"]["conductor"].is_u64());
    assert!(case["lhs"]["coeffs"].is_array());
    assert!(case["match"].is_boolean());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify-theorem", "--n", "2", "--q", "2", "--ell", "2"];
    let a = dlchar(&args);
    let b = dlchar(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn budget_guard_exits_three() {
    let out = dlchar(&[
        "verify-theorem",
        "--q",
        "11",
        "--n",
        "3",
        "--ell",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error["), "stable one-line error code, got: {err}");
}

#[test]
fn usage_error_exits_two() {
    let out = dlchar(&["verify-theorem", "--q", "4", "--mode", "transpose-inverse"]);
    assert_eq!(out.status.code(), Some(2));
    let out2 = dlchar(&["dl-value", "--q", "3", "--partition", "1,1,1", "--element", "1,0;0,2"]);
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn dl_value_matches_spec_example() {
    // the split-torus value at diag(1,2) with theta = (1,0) over GF(3)
    let out = dlchar(&[
        "dl-value",
        "--n",
        "2",
        "--q",
        "3",
        "--partition",
        "1,1",
        "--theta",
        "1,0",
        "--element",
        "1,0;0,2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let values: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(values[0]["theta_exponents"], serde_json::json!([1, 0]));
    assert!(values[0]["value"]["coeffs"].is_array());
}

#[test]
fn counterexample_exits_zero_when_found() {
    let out = dlchar(&["counterexample", "--mode", "transpose-inverse", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["expect_mismatch"], true);
    assert_eq!(report["objective_met"], true);
    assert!(report["summary"]["failed"].as_u64().unwrap() >= 1);
}

#[test]
fn list_tori_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tori.json");
    let out = dlchar(&[
        "list-tori",
        "--n",
        "2",
        "--q",
        "2",
        "--ell",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(body.as_array().unwrap().len(), 2);
    assert_eq!(body[0]["centralizer_epsilon_stable"], true);
}

#[test]
fn tsv_format_renders_rows() {
    let out = dlchar(&[
        "verify-theorem",
        "--n",
        "1",
        "--q",
        "2",
        "--ell",
        "2",
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind\t"));
    assert_eq!(text.lines().count(), 1 + 3 + 1);
}

#[test]
fn trials_flag_appends_lift_independence_report_as_json_array() {
    let out = dlchar(&[
        "verify-theorem",
        "--n",
        "1",
        "--q",
        "2",
        "--ell",
        "2",
        "--trials",
        "3",
        "--seed",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = reports.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["manifest"]["kind"], "verify-theorem");
    assert_eq!(arr[1]["manifest"]["kind"], "verify-lift-independence");
    assert_eq!(arr[1]["summary"]["failed"], 0);
}

#[test]
fn vanishing_vacuous_run_reports_vacuous_not_pass() {
    let out = dlchar(&["verify-vanishing", "--n", "1", "--q", "3", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["vacuous"], true);
    assert_eq!(report["summary"]["total"], 0);
}
