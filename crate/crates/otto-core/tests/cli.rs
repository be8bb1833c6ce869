//! Black-box tests of the `otto` binary: exit codes, override handling,
//! subcommand behavior, and output files.

use std::path::Path;
use std::process::{Command, Output};

fn otto(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("failed to spawn otto")
}

#[test]
fn defaults_run_a_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = otto(&["nelc"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // the default config is a single fixed point: one per-point line
    assert!(stdout.contains("Q_h="), "stdout: {stdout}");
    assert!(stdout.contains("regime=engine"), "stdout: {stdout}");
}

#[test]
fn set_overrides_change_the_result() {
    let dir = tempfile::tempdir().unwrap();
    let base = otto(&["gslc"], dir.path());
    // swap the coupling ratios: the engine point becomes a refrigerator
    let flipped = otto(&["gslc", "--set", "g_h=5.0", "--set", "g_c=0.2"], dir.path());
    assert!(base.status.success() && flipped.status.success());
    let base = String::from_utf8(base.stdout).unwrap();
    let flipped = String::from_utf8(flipped.stdout).unwrap();
    assert!(base.contains("regime=engine"), "stdout: {base}");
    assert!(flipped.contains("regime=refrigerator"), "stdout: {flipped}");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"bogus.key\": 1}").unwrap();
    let out = otto(&["phase", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus.key"));
}

#[test]
fn bad_override_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = otto(&["nelc", "--set", "omega_h=-1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn declared_outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{
            "mode": "gslc",
            "grid.axis1.name": "g_h", "grid.axis1.min": 0.5,
            "grid.axis1.max": 4.5, "grid.axis1.count": 5,
            "grid.axis2.name": "g_c", "grid.axis2.min": 0.2,
            "grid.axis2.max": 1.0, "grid.axis2.count": 4,
            "output.csv": "out.csv",
            "output.json": "out.json",
            "output.svg": "out.svg"
        }"#,
    )
    .unwrap();
    let out = otto(&["phase", "--config", "run.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert!(csv.starts_with("g_h,g_c,Q_h,Q_c,W,regime"), "csv: {csv}");
    assert_eq!(csv.lines().count(), 1 + 20);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.json")).unwrap())
            .unwrap();
    assert_eq!(json["meta"]["mode"], "gslc");
    assert_eq!(json["points"].as_array().unwrap().len(), 20);
    let svg = std::fs::read_to_string(dir.path().join("out.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn tau_scan_reports_asymptotes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("scan.json"),
        r#"{
            "grid.axis1.name": "tau", "grid.axis1.min": 100.0,
            "grid.axis1.max": 10000.0, "grid.axis1.count": 3,
            "grid.axis1.scale": "log"
        }"#,
    )
    .unwrap();
    let out = otto(&["tau-scan", "--config", "scan.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("reference gslc_w"), "stdout: {stdout}");
    assert!(stdout.contains("reference elc_eta"), "stdout: {stdout}");
}

#[test]
fn check_subcommand_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = otto(&["check"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS")), "stdout: {stdout}");
}
