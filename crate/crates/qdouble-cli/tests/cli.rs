//! End-to-end runs of the `qdouble` binary: spec-level examples, exit
//! codes, override warnings, and report reproducibility.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

fn qdouble() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qdouble"));
    // pin the enumeration budget so results do not depend on the ambient
    // environment
    cmd.env("QDOUBLE_MAX_CONFIGS", "10000000");
    cmd
}

static DIR_SEQ: AtomicU32 = AtomicU32::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let n = DIR_SEQ.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!(
        "qdouble-cli-{tag}-{}-{n}",
        std::process::id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout_reports(out: &Output) -> Vec<Value> {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str::<Vec<Value>>(&text)
        .unwrap_or_else(|e| panic!("stdout is not a report array: {e}\n{text}"))
}

fn record<'a>(reports: &'a [Value], name: &str) -> &'a Value {
    reports
        .iter()
        .map(|env| &env["record"])
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no record named {name}"))
}

#[test]
fn s3_gsd_report_contains_eight() {
    let dir = scratch_dir("s3-gsd");
    let cfg = write_config(&dir, r#"{"group": {"builtin": "S3"}, "experiments": ["gsd"]}"#);
    let out = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_reports(&out);
    let rec = record(&reports, "gsd");
    assert_eq!(rec["values"]["formula"], 8);
    assert_eq!(rec["values"]["brute_orbits"], 8);
    assert_eq!(rec["verdict"], "pass");
    assert_eq!(reports[0]["schema_version"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn d4_gsd_report_contains_twenty_two() {
    let dir = scratch_dir("d4-gsd");
    let cfg = write_config(&dir, r#"{"group": {"builtin": "D4"}, "experiments": ["gsd"]}"#);
    let out = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reports = stdout_reports(&out);
    let rec = record(&reports, "gsd");
    assert_eq!(rec["values"]["formula"], 22);
    assert_eq!(rec["values"]["brute_orbits"], 22);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn z1_extremal_reports_one_trivially_passing_point() {
    let dir = scratch_dir("z1-extremal");
    let cfg = write_config(&dir, r#"{"group": {"builtin": "Z1"}, "experiments": ["extremal"]}"#);
    let out = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_reports(&out);
    let rec = record(&reports, "extremal");
    assert_eq!(rec["values"]["points"], 1);
    assert_eq!(rec["verdict"], "pass");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_experiment_is_rejected_before_anything_runs() {
    let dir = scratch_dir("unknown-exp");
    let cfg = write_config(&dir, r#"{"group": {"builtin": "S3"}, "experiments": ["teleport"]}"#);
    let out = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("teleport"), "{err}");
    assert!(out.stdout.is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_group_is_a_config_error() {
    let dir = scratch_dir("no-group");
    let cfg = write_config(&dir, r#"{"experiments": ["gsd"]}"#);
    let out = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("group"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn enumeration_budget_refusal_exits_two_with_an_explanatory_record() {
    let dir = scratch_dir("budget");
    let cfg = write_config(
        &dir,
        r#"{"group": {"builtin": "S3"}, "lattice": {"lx": 3, "ly": 3}, "experiments": ["gsd"]}"#,
    );
    let out = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_reports(&out);
    let rec = record(&reports, "gsd");
    assert_eq!(rec["verdict"], "capacity");
    assert_eq!(rec["values"]["needed_configurations"], "30233088");
    assert_eq!(rec["values"]["budget_limit"], 10000000);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn flag_conflicts_warn_and_the_config_wins() {
    let dir = scratch_dir("conflict");
    let cfg = write_config(&dir, r#"{"group": {"builtin": "S3"}, "experiments": ["gsd"]}"#);
    let out = qdouble().arg("run").arg(&cfg).args(["--group", "D4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("warning") && err.contains("config wins"), "{err}");
    let reports = stdout_reports(&out);
    assert_eq!(reports[0]["group"], "S3");
    assert_eq!(record(&reports, "gsd")["values"]["formula"], 8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn audit_shorthand_matches_the_dephasing_verdict_pattern() {
    let out = qdouble()
        .args(["audit", "--group", "Z2", "--lattice", "2x2", "--channel", "z", "--edges", "0,6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_reports(&out);
    let rec = record(&reports, "symmetry-audit");
    assert_eq!(rec["values"]["counts"]["strong"], 8);
    assert_eq!(rec["values"]["counts"]["weak"], 2);
    assert_eq!(rec["values"]["counts"]["broken"], 0);
    assert_eq!(rec["verdict"], "pass");
}

/// Lines carrying wall-clock readings; everything else must reproduce
/// byte for byte.
fn strip_timing(text: &str) -> String {
    text.lines()
        .filter(|line| !line.contains("timestamp_unix_ms") && !line.contains("runtime_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_byte_reproduce_modulo_timing_fields() {
    let dir = scratch_dir("repro");
    let cfg = write_config(
        &dir,
        &format!(
            r#"{{"group": {{"builtin": "Z2"}}, "experiments": ["gsd", "smatrix", "fusion"],
                "output": "{}"}}"#,
            dir.join("reports").display()
        ),
    );
    let first = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let mut snapshots = Vec::new();
    for name in ["gsd", "smatrix", "fusion"] {
        let path = dir.join("reports").join(format!("{name}.json"));
        snapshots.push(std::fs::read_to_string(&path).unwrap());
    }
    std::thread::sleep(std::time::Duration::from_millis(5));
    let second = qdouble().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(second.status.code(), Some(0));
    for (name, before) in ["gsd", "smatrix", "fusion"].iter().zip(&snapshots) {
        let path = dir.join("reports").join(format!("{name}.json"));
        let after = std::fs::read_to_string(&path).unwrap();
        assert_eq!(strip_timing(before), strip_timing(&after), "{name} report drifted");
        assert!(after.contains("\"schema_version\": 1"));
    }
    std::fs::remove_dir_all(&dir).ok();
}
