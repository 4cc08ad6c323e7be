use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn geogate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geogate")).args(args).output().expect("binary runs")
}

fn summary(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("summary line is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synthesize_orange_slice_summary() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("p.csv");
    let s = summary(&geogate(&["synthesize", "--path", "orange-slice", "-o", path_str(&csv)]));
    assert_eq!(s["total_time_tau0"], 2.0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t_tau0,omega_r,phi_pulse,delta,signed_direction,segment");
    assert_eq!(text.lines().count(), 1 + 2 * 1000 + 1);
}

#[test]
fn synthesize_unconventional_phases() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("u.csv");
    let s = summary(&geogate(&["synthesize", "--path", "unconventional-triangle", "-o", path_str(&out)]));
    assert!((s["gamma_g"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert!((s["gamma_total"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn pulse_file_round_trip_is_bitwise() {
    let dir = TempDir::new().unwrap();
    let pulse = dir.path().join("pulse.json");
    let traj = dir.path().join("t.csv");
    summary(&geogate(&["synthesize", "--path", "conventional-triangle", "--format", "json", "-o", path_str(&pulse)]));
    let common = ["--dt-per-tau0", "2000", "-o", path_str(&traj)];
    let inline = geogate(&[&["simulate", "--path", "conventional-triangle"][..], &common].concat());
    let reread = geogate(&[&["simulate", "--pulse", path_str(&pulse)][..], &common].concat());
    assert!(inline.status.success() && reread.status.success());
    assert_eq!(inline.stdout, reread.stdout);
}

#[test]
fn physical_and_normalized_units_agree() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    let run = |extra: &[&str]| {
        let base = ["simulate", "--path", "orange-slice", "--dt-per-tau0", "1000", "-o", path_str(&out)];
        let o = geogate(&[&base[..], extra].concat());
        (summary(&o), std::fs::read(&out).unwrap())
    };
    let physical = run(&["--omega0", "20", "--delta0", "20", "--gamma1", "4e4", "--gamma2", "4e4"]);
    let normalized = run(&["--units", "normalized", "--delta0", "1", "--gamma1", "2e-3", "--gamma2", "2e-3"]);
    assert_eq!(physical, normalized);
}

#[test]
fn closed_system_simulation_is_perfect() {
    let s = summary(&geogate(&[
        "simulate",
        "--path",
        "unconventional-triangle",
        "--gamma1",
        "0",
        "--gamma2",
        "0",
        "--dt-per-tau0",
        "1000",
        "-o",
        "/dev/null",
    ]));
    assert!((s["final_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn empty_path_file_is_not_closed() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("empty.json");
    std::fs::write(&file, "").unwrap();
    let out = geogate(&["synthesize", "--path-file", path_str(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PathNotClosed"));
}

#[test]
fn custom_path_file_is_scheduled() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("loop.json");
    let quarter = std::f64::consts::FRAC_PI_2;
    std::fs::write(
        &file,
        format!(
            r#"{{"eta": 1.0, "segments": [
                {{"kind": "meridian", "theta_start": 0, "theta_end": {quarter}, "phi_start": 0, "phi_end": 0}},
                {{"kind": "arc", "theta_start": {quarter}, "theta_end": {quarter}, "phi_start": 0, "phi_end": {quarter}}},
                {{"kind": "meridian", "theta_start": {quarter}, "theta_end": 0, "phi_start": {quarter}, "phi_end": {quarter}}}
            ]}}"#
        ),
    )
    .unwrap();
    let s = summary(&geogate(&["synthesize", "--path-file", path_str(&file), "-o", "/dev/null"]));
    assert_eq!(s["path"], "loop");
    assert!((s["total_time_tau0"].as_f64().unwrap() - 1.5).abs() < 1e-12);
}

#[test]
fn infeasible_physics_exit_code() {
    let out = geogate(&["optimize", "--delta0", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = geogate(&["synthesize", "--path", "conventional-triangle", "--delta0", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("segment 1"));
}

#[test]
fn config_error_exit_code() {
    assert_eq!(geogate(&["simulate", "--path", "orange-slice", "--dt-per-tau0", "99"]).status.code(), Some(2));
    assert_eq!(geogate(&["synthesize", "--path", "no-such-path"]).status.code(), Some(2));
    assert_eq!(geogate(&["synthesize"]).status.code(), Some(2));
    assert_eq!(geogate(&["synthesize", "--path", "orange-slice", "--gamma1", "-1"]).status.code(), Some(2));
}

#[test]
fn optimize_reports_scan() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("scan.json");
    let s = summary(&geogate(&["optimize", "--format", "json", "-o", path_str(&out)]));
    assert!((s["total_time_tau0"].as_f64().unwrap() - 1.793).abs() < 2e-3);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(doc["scan"].as_array().unwrap().len() > 1000);
    let wide = summary(&geogate(&["optimize", "--gamma-target", "3.14159", "-o", "/dev/null"]));
    assert!(wide["total_time_tau0"].as_f64().unwrap() > s["total_time_tau0"].as_f64().unwrap());
}

#[test]
fn bench_noiseless_gates() {
    let out = geogate(&["bench", "--gamma1", "0", "--gamma2", "0", "--dt-per-tau0", "2000", "--format", "json"]);
    assert!(out.status.success());
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let times: Vec<f64> = rows.iter().map(|r| r["time_tau0"].as_f64().unwrap()).collect();
    assert!((times[0] - 2.0).abs() < 1e-12 && (times[1] - 11.0 / 6.0).abs() < 1e-12 && (times[2] - 1.5).abs() < 1e-12);
    assert!(rows.iter().all(|r| r["gate_distance"].as_f64().unwrap() < 1e-6));
}
