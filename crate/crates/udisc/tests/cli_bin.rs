//! End-to-end tests of the `udisc` binary.

use std::path::Path;
use std::process::{Command, Output};

fn udisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udisc")).args(args).output().expect("binary runs")
}

fn write_diagonal_problem(path: &Path) {
    let text = r#"{
  "schema_version": "udisc-1",
  "dim": 3,
  "p0": 0.5,
  "p1": 0.5,
  "rho0": [
    [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.5, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
  ],
  "rho1": [
    [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.5, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]
  ]
}
"#;
    std::fs::write(path, text).unwrap();
}

#[test]
fn solve_prints_the_exact_diagonal_answer() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("problem.json");
    write_diagonal_problem(&input);

    let out = udisc(&["solve", input.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("exact             yes"), "stdout:\n{stdout}");
    assert!(stdout.contains("P_lower           0.5"), "stdout:\n{stdout}");
    assert!(stdout.contains("P_upper           0.5"), "stdout:\n{stdout}");
    assert!(stdout.contains("orthogonal-kernels"), "stdout:\n{stdout}");
}

#[test]
fn machine_report_can_be_fed_back_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("problem.json");
    write_diagonal_problem(&input);

    let first = udisc(&["solve", input.to_str().unwrap(), "--format", "machine"]);
    assert!(first.status.success());
    let report: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["schema_version"], "udisc-report-1");
    assert_eq!(report["exact"], true);

    let echo = dir.path().join("report.json");
    std::fs::write(&echo, &first.stdout).unwrap();
    let second = udisc(&["solve", echo.to_str().unwrap(), "--format", "machine"]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout, "report echo must solve identically");
}

#[test]
fn random_output_is_byte_identical_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let spec = ["--dim", "3", "--rank0", "1", "--rank1", "2", "--seed", "11"];

    let mut args = vec!["random", a.to_str().unwrap()];
    args.extend_from_slice(&spec);
    assert!(udisc(&args).status.success());
    let mut args = vec!["random", b.to_str().unwrap()];
    args.extend_from_slice(&spec);
    assert!(udisc(&args).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = udisc(&["verify", a.to_str().unwrap(), "--restarts", "6", "--format", "machine"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let verdict: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["ok"], true);
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("nope.json");
    assert_eq!(udisc(&["solve", missing.to_str().unwrap()]).status.code(), Some(4));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(udisc(&["solve", garbage.to_str().unwrap()]).status.code(), Some(2));

    let bad_schema = dir.path().join("schema.json");
    write_diagonal_problem(&bad_schema);
    let text = std::fs::read_to_string(&bad_schema).unwrap().replace("udisc-1", "udisc-0");
    std::fs::write(&bad_schema, text).unwrap();
    assert_eq!(udisc(&["solve", bad_schema.to_str().unwrap()]).status.code(), Some(2));

    let bad_trace = dir.path().join("trace.json");
    write_diagonal_problem(&bad_trace);
    let text = std::fs::read_to_string(&bad_trace).unwrap().replacen("0.5", "0.9", 1);
    std::fs::write(&bad_trace, text).unwrap();
    assert_eq!(udisc(&["solve", bad_trace.to_str().unwrap()]).status.code(), Some(3));

    assert_eq!(udisc(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn compare_reports_one_minus_fidelity_exactly() {
    let out = udisc(&["compare", "--psi1", "[1, 0]", "--psi2", "[0.6, 0.8]", "--format", "machine"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact"], true);
    let closed = v["p_closed_form"].as_f64().unwrap();
    let lower = v["p_lower"].as_f64().unwrap();
    let fid = v["fidelity"].as_f64().unwrap();
    assert!((closed - lower).abs() < 1e-9);
    assert!((closed - (1.0 - fid)).abs() < 1e-12);
}

#[test]
fn filter_matches_its_closed_form() {
    let out = udisc(&[
        "filter",
        "--target",
        "[1, 0, 0]",
        "--other",
        "[0, 1, 0]",
        "--other",
        "[[0, 0], [0.6, 0], [0, 0.8]]",
        "--etas",
        "[0.4, 0.3, 0.3]",
        "--format",
        "machine",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let closed = v["p_closed_form"].as_f64().unwrap();
    let lower = v["p_lower"].as_f64().unwrap();
    assert!((closed - lower).abs() < 1e-9, "closed {closed} vs pipeline {lower}");
    assert!(v["branch"].is_string());
}

#[test]
fn compare_rejects_bad_vectors_with_parse_exit() {
    assert_eq!(udisc(&["compare", "--psi1", "[1, 0]", "--psi2", "oops"]).status.code(), Some(2));
    let out = udisc(&["compare", "--psi1", "[1, 0]", "--psi2", "[1, 0]"]);
    assert_eq!(out.status.code(), Some(3), "identical states cannot be compared");
}
