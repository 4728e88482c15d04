//! End-to-end runs of the `thermospec` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thermospec"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn unit_disk_coefficients() {
    let cfg = config("unit_disk.json");
    let v = json(&run(&["coeffs", "--config", cfg.to_str().unwrap()]));
    let a0 = v["a0"].as_f64().unwrap();
    // π/(4π) · (1/μ + 1/(λ+2μ) + 1/α) with λ=0, μ=α=1.
    assert!((a0 - 0.625).abs() < 1e-14, "a0 = {a0}");
    let a1 = v["a1_dirichlet"].as_f64().unwrap();
    let expected = -0.25 * 2.0 * std::f64::consts::PI / (4.0 * std::f64::consts::PI).sqrt() * (1.0 + 1.0 / 2f64.sqrt() + 1.0);
    assert!((a1 - expected).abs() < 1e-13, "a1 = {a1}");
}

#[test]
fn invalid_parameter_is_reported_by_name() {
    let cfg = config("unit_disk.json");
    let out = run(&["coeffs", "--config", cfg.to_str().unwrap(), "--mu", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("params.mu"), "stderr: {stderr}");
}

#[test]
fn coupled_parameters_need_the_experimental_flag() {
    let cfg = config("coupled_square.json");
    let text = std::fs::read_to_string(&cfg).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["experimental"]["allow_coupled"] = serde_json::Value::Bool(false);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coupled.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = run(&["coeffs", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.beta"));
    let out = run(&["coeffs", "--config", path.to_str().unwrap(), "--allow-coupled"]);
    assert!(out.status.success());
}

#[test]
fn flags_override_the_file() {
    let cfg = config("unit_disk.json");
    let cfg = cfg.to_str().unwrap();
    let base = json(&run(&["coeffs", "--config", cfg]));
    let wider = json(&run(&["coeffs", "--config", cfg, "--domain", "disk:2", "--alpha", "4"]));
    // a0 scales with the area; the heat channel drops from 1/α = 1 to 1/4.
    let expected = 4.0 * std::f64::consts::PI / (4.0 * std::f64::consts::PI) * (1.0 + 0.5 + 0.25);
    assert!((wider["a0"].as_f64().unwrap() - expected).abs() < 1e-13);
    assert_ne!(base["a0"], wider["a0"]);
    assert_eq!(wider["domain"], "disk:2");
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let cfg = config("unit_square.json");
    let cfg = cfg.to_str().unwrap();
    for sub in ["symbol-check", "spectrum", "fit"] {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let mut contents = Vec::new();
        for dir in &dirs {
            let out = run(&[sub, "--config", cfg, "--out", dir.path().to_str().unwrap()]);
            assert!(out.status.success(), "{sub}: {}", String::from_utf8_lossy(&out.stderr));
            let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
            assert_eq!(files.len(), 1, "{sub} wrote {files:?}");
            contents.push(std::fs::read(&files[0]).unwrap());
        }
        assert!(!contents[0].is_empty());
        assert_eq!(contents[0], contents[1], "{sub} output differs between runs");
    }
}

#[test]
fn spectrum_csv_has_header_and_sorted_values() {
    let cfg = config("interval.json");
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--cutoff", "100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,multiplicity"));
    let values: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(!values.is_empty());
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values.iter().all(|v| *v <= 100.0));
}

#[test]
fn rigidity_with_explicit_geometry() {
    let cfg = config("unit_disk.json");
    let cfg = cfg.to_str().unwrap();
    let pi = std::f64::consts::PI;
    let ball = json(&run(&["rigidity", "--config", cfg, "--vol", &pi.to_string(), "--vol-boundary", &(2.0 * pi).to_string()]));
    assert_eq!(ball["verdict"], "ball");
    let square = json(&run(&["rigidity", "--config", cfg, "--vol", "1", "--vol-boundary", "4"]));
    assert_eq!(square["verdict"], "not-ball");
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.json");
    std::fs::write(&path, r#"{"params": {"lambda": 0, "mu": 1, "alpha": 1}, "domain": "disk:1", "cutof": 10}"#).unwrap();
    let out = run(&["coeffs", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cutof"));
}
