use std::path::Path;
use std::process::{Command, Output};

use fpp_core::report::ConfigSet;
use fpp_core::surface::Case;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpp-verify"))
        .args(args)
        .output()
        .unwrap()
}

fn shipped_dir(dir: &Path) {
    ConfigSet::embedded(&Case::ALL).write_dir(dir).unwrap();
}

fn claims_without_timestamp(stdout: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(stdout).unwrap();
    v.as_object_mut().unwrap().remove("generated_at");
    v
}

#[test]
fn run_all_on_embedded_data() {
    let out = run(&["run", "--case", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], "1");
    let claims = v["claims"].as_array().unwrap();
    assert!(claims.len() >= 40);
    let c2 = claims.iter().find(|c| c["claim_id"] == "Z.c2").unwrap();
    assert_eq!(
        (c2["status"].as_str(), c2["computed"].as_str()),
        (Some("verified"), Some("3"))
    );
}

#[test]
fn output_is_deterministic() {
    let a = run(&["run"]);
    let b = run(&["run"]);
    assert_eq!(claims_without_timestamp(&a.stdout), claims_without_timestamp(&b.stdout));
    let strip = |s: &[u8]| -> String {
        String::from_utf8_lossy(s)
            .lines()
            .filter(|l| !l.contains("\"generated_at\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn markdown_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let out = run(&[
        "run",
        "--case",
        "II",
        "--format",
        "md",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let md = std::fs::read_to_string(&path).unwrap();
    assert!(md.starts_with("# Verification report"));
    assert!(md.contains("`X.glue.caseII`"));
    assert!(!md.contains("caseI`"));
}

#[test]
fn shipped_directory_verifies() {
    let dir = tempfile::tempdir().unwrap();
    shipped_dir(dir.path());
    let out = run(&["run", "--config", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn edited_section_entry_fails_feasibility() {
    let dir = tempfile::tempdir().unwrap();
    shipped_dir(dir.path());
    let path = dir.path().join("X_caseI.json");
    let x = fpp_core::surface::SurfaceConfig::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::write(&path, x.with_pairing("E1", "A3", 3).unwrap().to_json_pretty()).unwrap();
    let out = run(&["run", "--case", "I", "--config", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["claim_id"] == "X.feasibility.caseI")
        .unwrap();
    assert_eq!(c["status"], "failed");
}

#[test]
fn empty_config_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    shipped_dir(dir.path());
    std::fs::write(dir.path().join("X_caseI.json"), "").unwrap();
    let out = run(&["run", "--config", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("X_caseI.json"));
}

#[test]
fn missing_config_is_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", "--config", dir.path().join("absent").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_report_is_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("no/such/dir/report.json");
    let out = run(&["run", "--report", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_format_is_rejected() {
    let out = run(&["run", "--format", "xml"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn log_level_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fpp-verify"))
        .args(["run", "--case", "I"])
        .env("FPP_VERIFY_LOG", "debug")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("claim Z.c2 verified"));
}
