use std::path::PathBuf;
use std::process::{Command, Output};

use formring::verify::{without_timing, CheckReport, ReportStatus};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn formring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formring")).args(args).output().expect("binary runs")
}

fn verify(config: &str, report: &std::path::Path, extra: &[&str]) -> Output {
    let config = scenario(config);
    let mut args = vec!["verify", "--config", config.to_str().unwrap(), "--report", report.to_str().unwrap()];
    args.extend_from_slice(extra);
    formring(&args)
}

fn reports(path: &std::path::Path) -> Vec<CheckReport> {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn empty_scenario_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = verify("empty.json", &report, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), "[]");
}

#[test]
fn injected_failure_has_replayable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = verify("injected-invalid.json", &report, &[]);
    assert_eq!(out.status.code(), Some(1));
    let r = reports(&report);
    assert_eq!(r[0].status, ReportStatus::Fail);
    assert!(r[0].witness.as_ref().unwrap().matrix.is_some());

    let config = scenario("injected-invalid.json");
    let out = formring(&["verify", "--config", config.to_str().unwrap(), "--replay", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("reproduced"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "ring": {"kind": "zmod", "m": 4}, "lambda": 3, "n": 3, "checks": [{"name": "nope"}]}"#).unwrap();
    let report = dir.path().join("r.json");
    let out = formring(&["verify", "--config", bad.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = formring(&["verify", "--config", "/nonexistent.json", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = verify("f2-orthogonal.json", &report, &["--budget", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(reports(&report).iter().any(|r| r.status == ReportStatus::BudgetExceeded));
    assert!(reports(&report).iter().all(|r| r.status != ReportStatus::Fail));
}

#[test]
fn enumerate_and_ideals() {
    let config = scenario("f2-orthogonal.json");
    let cfg = config.to_str().unwrap();
    for (group, size) in [("E", "20160"), ("G", "40320"), ("F", "20160")] {
        let out = formring(&["enumerate", "--config", cfg, "--group", group, "--ideal", "A"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), size);
    }
    let z4 = scenario("z4-symplectic.json");
    let out = formring(&["ideals", "--config", z4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().any(|l| l.starts_with("I0 ")));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(verify("f2-orthogonal.json", &a, &["--seed", "5"]).status.code(), Some(0));
    assert_eq!(verify("f2-orthogonal.json", &b, &["--seed", "5"]).status.code(), Some(0));
    assert_eq!(without_timing(&reports(&a)), without_timing(&reports(&b)));

    let text = dir.path().join("a.txt");
    assert_eq!(verify("f2-orthogonal.json", &text, &["--format", "text"]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&text).unwrap().starts_with("validate"));
}
