use std::fs;
use std::process::{Command, Output};

fn gl4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gl4"))
        .args(args)
        .env_remove("GL4_SUITE")
        .env_remove("GL4_SEED")
        .env_remove("GL4_TOL")
        .env_remove("GL4_OUT")
        .env_remove("GL4_CONFIG")
        .env_remove("GL4_REPORT")
        .output()
        .expect("spawn gl4")
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let a = gl4(&["run", "--suite", "hecke", "--seed", "11"]);
    let b = gl4(&["run", "--suite", "hecke", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tight_tolerance_gives_fail_exit() {
    let out = gl4(&["run", "--suite", "hecke", "--tol", "hecke_relation_residual=-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_tolerance_is_a_usage_error() {
    let out = gl4(&["run", "--suite", "hecke", "--tol", "no_equals_sign"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NAME=VALUE"));
}

#[test]
fn unknown_config_key_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(&path, "{\n  \"suite\": \"hecke\",\n  \"sede\": 3\n}\n").unwrap();
    let out = gl4(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sede") && err.contains("line 3"), "{err}");
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let report = dir.path().join("report.json");
    fs::write(&cfg, "{\"suite\": \"special\", \"seed\": 4}").unwrap();
    let out = gl4(&["run", "--config", cfg.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"special\""));
    let csv = gl4(&["emit-table", "--report", report.to_str().unwrap(), "--table", "checks"]);
    assert_eq!(csv.status.code(), Some(0));
    let csv = String::from_utf8(csv.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("suite,name"));
    assert!(lines.next().is_some());
}

#[test]
fn missing_report_is_an_error() {
    let out = gl4(&["emit-table", "--report", "/nonexistent/report.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn harness_report_round_trips_through_emit_table() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("harness.json");
    let out = gl4(&["run", "--suite", "harness", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let scaling = gl4(&["emit-table", "--report", report.to_str().unwrap(), "--table", "scaling"]);
    assert_eq!(scaling.status.code(), Some(0), "{}", String::from_utf8_lossy(&scaling.stderr));
    let text = String::from_utf8(scaling.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("T,I,exponent"));
    assert_eq!(text.lines().count(), 4);
    let checks = gl4(&["emit-table", "--report", report.to_str().unwrap(), "--format", "json"]);
    assert_eq!(checks.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&checks.stdout).contains("scaling_exponent"));
}
