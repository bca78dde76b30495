//! The `ncverify` binary: exit codes, report formats and flag handling.

use std::process::{Command, Output};

use ncverify::report::{RunReport, Status, SCHEMA_VERSION};

fn ncverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncverify")).args(args).env_remove("NCVERIFY_SUITE").output().expect("binary runs")
}

fn json(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

#[test]
fn racah_passes_with_json_report() {
    let out = ncverify(&["--suite", "racah", "--format", "json", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    assert_eq!(r.seed, 5);
    assert!(r.pass);
    assert_eq!(r.suites.len(), 1);
    let s = &r.suites[0];
    assert_eq!(s.suite, "racah");
    assert_eq!(s.summary.checks, s.checks.len());
    assert!(s.checks.iter().all(|c| c.status == Status::Verified && c.residual_terms == 0));
}

#[test]
fn gating_failure_exits_one() {
    let out = ncverify(&["--suite", "hahn"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL hahn.e.delta2"), "{text}");
}

#[test]
fn informative_failures_do_not_gate() {
    let out = ncverify(&["--suite", "qhahn", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let s = &r.suites[0];
    assert!(s.checks.iter().any(|c| c.informative && c.status == Status::Failed));
    assert_eq!(s.summary.gating_failed, 0);
}

#[test]
fn fit_cap_zero_fails_the_closure() {
    let out = ncverify(&["--suite", "aw", "--fit-cap", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let s = &json(&out).suites[0];
    assert_eq!(s.context.fit_cap, Some(0));
    let c = s.check("aw.closure.2").expect("closure check");
    assert_eq!(c.status, Status::Failed);
    assert!(c.residual_terms > 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ncverify(&["--suite", "wilson"]).status.code(), Some(2));
    assert_eq!(ncverify(&["--suite", "racah", "--modes", "4"]).status.code(), Some(2));
    assert_eq!(ncverify(&["--jobs", "0"]).status.code(), Some(2));
    let out = ncverify(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("--fit-cap"));
}

#[test]
fn environment_selects_the_suite() {
    let out = Command::new(env!("CARGO_BIN_EXE_ncverify"))
        .args(["--format", "json"])
        .env("NCVERIFY_SUITE", "racah")
        .output()
        .expect("binary runs");
    assert_eq!(json(&out).suites[0].suite, "racah");
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = ncverify(&["--suite", "racah", "--format", "json", "--out", path.to_str().unwrap(), "--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.pass);
}

#[test]
fn unwritable_out_is_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let out = ncverify(&["--suite", "racah", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
