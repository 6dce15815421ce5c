use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qgauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgauge")).args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn scenario(gauge: &str, field: f64, x0: f64, out: &Path) -> String {
    format!(
        r#"{{
  "params": {{"mass": 1, "charge": 1, "field": {field}, "hbar": 1}},
  "grid": {{"x_min": -30, "x_max": 30, "n": 2048}},
  "gauge": "{gauge}",
  "initial": {{"gaussian": {{"x0": {x0}, "p0": 0, "sigma": 1}}}},
  "propagator": {{"dt": 0.001, "n_steps": 2000, "boundary": "dirichlet", "record_every": 250}},
  "outputs": [{{"path": "{}", "format": "csv"}}]
}}"#,
        out.display()
    )
}

#[test]
fn theorem_suite_passes() {
    let out = qgauge(&["verify", "--suite", "theorem"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn corrupted_airy_constant_is_caught() {
    let out = qgauge(&["verify", "--suite", "solutions", "--corrupt-airy-constant"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL airy/oracle"));
}

#[test]
fn full_json_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = qgauge(&["verify", "--json", path.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    for c in checks {
        for key in ["name", "measured", "tolerance", "comparison", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(report["seed"], 42);
    assert_eq!(report["passed"].as_bool(), Some(out.status.success()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn free_packet_keeps_its_norm() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.csv");
    let cfg = write_config(&dir, "free.json", &scenario("free-frame", 0.0, 0.0, &trace));
    let out = qgauge(&["simulate", "--config", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("t,norm,mean_x,canonical_p,kinetic_p,var_x\n"));
    let data = rows(&text);
    assert_eq!(data.len(), 9);
    for r in &data {
        assert!((r[1] - data[0][1]).abs() <= 1e-10);
    }
}

#[test]
fn static_packet_falls_like_a_classical_particle() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.csv");
    let cfg = write_config(&dir, "static.json", &scenario("static", 0.5, -5.0, &trace));
    assert!(qgauge(&["simulate", "--config", &cfg]).status.success());
    let last = rows(&std::fs::read_to_string(&trace).unwrap()).pop().unwrap();
    assert!((last[0] - 2.0).abs() < 1e-12);
    assert!((last[2] - -4.0).abs() <= 1e-3, "mean_x = {}", last[2]);
}

#[test]
fn empty_config_names_the_missing_field() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "empty.json", "");
    let out = qgauge(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("params"), "{}", stderr(&out));
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let body = scenario("static", 0.5, -5.0, &dir.path().join("t.csv")).replace("\"n\": 2048", "\"n\": 2048, \"dx\": 0.1");
    let out = qgauge(&["simulate", "--config", &write_config(&dir, "c.json", &body)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dx"));
}

#[test]
fn overflowing_run_exits_with_blowup() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.csv");
    // the potential qE0·x overflows to infinity at the grid ends
    let cfg = write_config(&dir, "inf.json", &scenario("static", 1e308, 0.0, &trace));
    let out = qgauge(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("last good state at t = 0"), "{}", stderr(&out));
}

#[test]
fn airy_table_at_origin() {
    let out = qgauge(&["table", "--function", "airy", "--from", "0", "--to", "0", "--step", "0.1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,ai,ai_prime\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 1);
    assert!((r[0][1] - 0.355_028_05).abs() < 1e-8);
}

#[test]
fn berry_balazs_is_real_at_time_zero() {
    let out = qgauge(&["table", "--function", "BerryBalazs", "--from", "-4", "--to", "4", "--step", "0.5", "--t", "0"]);
    assert!(out.status.success());
    let r = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(r.len(), 17);
    assert!(r.iter().all(|row| row[2] == 0.0));
}

#[test]
fn plane_wave_has_unit_density() {
    let out = qgauge(&["table", "--function", "FreePlaneWave", "--from", "-3", "--to", "3", "--step", "0.25", "--t", "1.3", "--p", "0.7"]);
    assert!(out.status.success());
    for row in rows(&String::from_utf8(out.stdout).unwrap()) {
        assert!((row[3] - 1.0).abs() < 1e-15);
    }
}

#[test]
fn bad_range_and_unknown_function_exit_2() {
    assert_eq!(qgauge(&["table", "--function", "airy", "--from", "1", "--to", "0", "--step", "0.1"]).status.code(), Some(2));
    assert_eq!(qgauge(&["table", "--function", "airy", "--from", "0", "--to", "1", "--step", "0"]).status.code(), Some(2));
    assert_eq!(qgauge(&["table", "--function", "bessel", "--from", "0", "--to", "1", "--step", "0.1"]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let mut seen = Vec::new();
    for i in 0..2 {
        let trace = dir.path().join(format!("trace{i}.csv"));
        let cfg = write_config(&dir, &format!("c{i}.json"), &scenario("dynamic", 0.5, -5.0, &trace));
        assert!(qgauge(&["simulate", "--config", &cfg]).status.success());
        seen.push(std::fs::read(&trace).unwrap());
    }
    assert_eq!(seen[0], seen[1]);
    let a = qgauge(&["table", "--function", "Psi1Static", "--from", "-5", "--to", "5", "--step", "0.1", "--t", "0.3"]);
    let b = qgauge(&["table", "--function", "Psi1Static", "--from", "-5", "--to", "5", "--step", "0.1", "--t", "0.3"]);
    assert_eq!(a.stdout, b.stdout);
}
