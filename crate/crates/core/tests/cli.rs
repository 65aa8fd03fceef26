//! End-to-end runs of the binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn forge(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riccati-forge"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("RICCATI_FORGE_SEED_TOL")
        .output()
        .expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn transform_osc71_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["transform", "--example", "osc-7.1", "--l", "-1.25", "--b", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("osc-7.1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,V0,V_intermediate,V_image,phi_in,phi_out"));
    assert_eq!(csv.lines().count(), 2001);
    assert!(lines.all(|l| l.split(',').count() == 6));
    let r = report(&dir.path().join("osc-7.1.report.json"));
    assert_eq!(r["status"], "PASSED");
    for (stage, v) in r["max_residuals"].as_object().unwrap() {
        assert!(v.as_f64().unwrap() <= 1e-5, "{stage}");
    }
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["transform", "--example", "coul-7.3", "--l", "-1.2", "--samples", "300"];
    forge(&args, a.path());
    forge(&args, b.path());
    let read = |d: &Path| std::fs::read(d.join("coul-7.3.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn coul72_report_norm() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["transform", "--example", "coul-7.2", "--l", "2", "--q", "-1", "--k", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("coul-7.2.report.json"));
    let n = r["norms"]["eta_sq"].as_f64().unwrap();
    assert!((n - 2.0 / 3.0).abs() < 1e-6, "{n}");
}

#[test]
fn intertwine_reports_shape_invariance() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["transform", "--family", "oscillator", "--theorem", "INTERTWINE", "--l", "0", "--b", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("oscillator-intertwine.report.json"));
    assert!((r["diagnostics"]["shape_invariance_constant"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let csv = std::fs::read_to_string(dir.path().join("oscillator-intertwine.csv")).unwrap();
    assert!(csv.starts_with("x,V0,V_image,phi_in,phi_out\n"));
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["verify", "--suite", "group-law"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = forge(
        &["verify", "--suite", "orthonormality", "--family", "oscillator", "--l", "0", "--b", "2", "--kmax", "4"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("suite-orthonormality.verify.json"));
    assert!(r["norms"]["gram.deviation"].as_f64().unwrap() <= 2e-4);
}

#[test]
fn verify_coul74_reports_one_node() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["verify", "--example", "coul-7.4", "--l", "-1.25", "--q", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("coul-7.4.verify.json"));
    assert_eq!(r["diagnostics"]["eta_zero_count"], 1);
    let x0 = r["diagnostics"]["eta_zeros"][0].as_f64().unwrap();
    assert!((x0 - 0.1875).abs() < 1e-9);
    assert!(!dir.path().join("coul-7.4.csv").exists());
}

fn sweep_norms(example: &str, dir: &Path) -> Vec<f64> {
    let out = forge(
        &["sweep", "--example", example, "--param", "l", "--grid", "-1.45,-1.4,-1.35,-1.3,-1.25,-1.2,-1.15,-1.1,-1.05"],
        dir,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.join(format!("{example}-sweep-l.csv"))).unwrap();
    assert_eq!(csv.lines().next(), Some("l,norm,max_residual,status,message"));
    csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect()
}

#[test]
fn sweeps_are_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let up = sweep_norms("coul-7.3", dir.path());
    assert!(up.windows(2).all(|w| w[1] > w[0]), "{up:?}");
    let down = sweep_norms("coul-7.4", dir.path());
    assert!(down.windows(2).all(|w| w[1] < w[0]), "{down:?}");
}

#[test]
fn single_point_sweep_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["sweep", "--example", "osc-7.1", "--param", "l", "--grid", "-1.3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("osc-7.1-sweep-l.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn out_of_range_sweep_point_is_recorded_in_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["sweep", "--example", "osc-7.1", "--param", "l", "--grid", "-1.3,-0.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("osc-7.1-sweep-l.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains(",PASSED,"));
    assert!(rows[2].contains(",ERROR,") && rows[2].contains("-3/2 < l < -1"));
}

#[test]
fn validation_errors_name_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&["transform", "--family", "oscillator", "--b", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b > 0"));
    let out = forge(&["transform", "--example", "coul-7.2", "--l", "0.5", "--k", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("l > k - 1"));
}

#[test]
fn failing_threshold_still_writes_marked_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_riccati-forge"))
        .args(["transform", "--example", "osc-7.1", "--out-dir"])
        .arg(dir.path())
        .env("RICCATI_FORGE_SEED_TOL", "1e-16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(dir.path().join("osc-7.1.csv").exists());
    let r = report(&dir.path().join("osc-7.1.report.json"));
    assert_eq!(r["status"], "FAILED");
    assert!(!r["failures"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"example": "osc-7.1", "params": {"l": -1.45, "b": 2}, "samples": 50}"#).unwrap();
    let out = forge(&["transform", "--config", cfg.to_str().unwrap(), "--l", "-1.15"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("osc-7.1.report.json"));
    assert_eq!(r["parameters"]["l"], -1.15);
    assert_eq!(r["parameters"]["samples"], 50);
    let csv = std::fs::read_to_string(dir.path().join("osc-7.1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
}

#[test]
fn report_keys_are_in_stable_order() {
    let dir = tempfile::tempdir().unwrap();
    forge(&["transform", "--example", "osc-7.1", "--samples", "10"], dir.path());
    let text = std::fs::read_to_string(dir.path().join("osc-7.1.report.json")).unwrap();
    let order = ["\"command\"", "\"status\"", "\"pipeline\"", "\"parameters\"", "\"max_residuals\"", "\"norms\"", "\"checks\""];
    let pos: Vec<usize> = order.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}
