//! Black-box tests of the grasspoly binary: exit codes, output schemas, and
//! determinism across invocations.

use std::process::{Command, Output};

fn grasspoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grasspoly"))
        .args(args)
        .env_remove("GRASSPOLY_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn estimate_obtuse_reports_and_exits_zero() {
    let out = grasspoly(&[
        "estimate", "--name", "obtuse", "--samples", "200000", "--seed", "7", "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let line = stdout(&out);
    let report: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(report["schema"], "grasspoly/1");
    assert_eq!(report["name"], "obtuse");
    assert_eq!(report["seed"], 7);
    let z = report["z_score"].as_f64().unwrap();
    assert!(z.abs() < 4.0);
}

#[test]
fn estimate_is_deterministic_for_fixed_seed() {
    let args = [
        "estimate", "--name", "area", "--samples", "50000", "--seed", "11", "--format", "json",
    ];
    let a = stdout(&grasspoly(&args));
    let b = stdout(&grasspoly(&args));
    assert_eq!(a, b);
}

#[test]
fn env_seed_is_used_and_flag_wins() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_grasspoly"))
        .args(["sample", "--n", "4", "--samples", "1"])
        .env("GRASSPOLY_SEED", "123")
        .output()
        .unwrap();
    let with_flag = grasspoly(&["sample", "--n", "4", "--samples", "1", "--seed", "123"]);
    assert_eq!(stdout(&with_env), stdout(&with_flag));
    let overridden = Command::new(env!("CARGO_BIN_EXE_grasspoly"))
        .args(["sample", "--n", "4", "--samples", "1", "--seed", "5"])
        .env("GRASSPOLY_SEED", "123")
        .output()
        .unwrap();
    assert_ne!(stdout(&overridden), stdout(&with_env));
}

#[test]
fn unknown_experiment_exits_2_with_json_error() {
    let out = grasspoly(&["estimate", "--name", "nonsense", "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "validation");
}

#[test]
fn invalid_n_exits_2() {
    let out = grasspoly(&["sample", "--n", "2", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cells_table_has_96_entries_and_even_split() {
    let out = grasspoly(&[
        "cells", "--samples", "50", "--seed", "7", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], "grasspoly/1");
    assert_eq!(doc["table"]["entries"].as_array().unwrap().len(), 96);
    assert_eq!(doc["class_counts"]["convex"], 32);
    assert_eq!(doc["class_counts"]["reflex"], 32);
    assert_eq!(doc["class_counts"]["self_intersecting"], 32);
    assert_eq!(doc["table"]["orbit24"].as_array().unwrap().len(), 24);
}

#[test]
fn trace_csv_has_header_and_rows() {
    let out = grasspoly(&["trace", "--steps", "8", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theta,Ax,Ay,Bx,By,Cx,Cy,degenerate");
    assert_eq!(lines.count(), 8);
}

#[test]
fn stabilizer_cell_mode_reports_order_4() {
    let out = grasspoly(&["stabilizer", "--n", "4", "--mode", "cell"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["report"]["stabilizer_order"], 4);
    assert_eq!(doc["report"]["orbit_size"], 96);
}

#[test]
fn orbit_chamber_mode_counts_24() {
    let out = grasspoly(&["orbit", "--n", "4", "--mode", "chamber"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["orbit_size"], 24);
}

#[test]
fn render_accepts_polygon_json() {
    let dir = std::env::temp_dir().join("grasspoly-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let poly = dir.join("poly.json");
    std::fs::write(
        &poly,
        r#"{"edges": [[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.0, -0.5]]}"#,
    )
    .unwrap();
    let svg_path = dir.join("poly.svg");
    let out = grasspoly(&[
        "render",
        "--input",
        poly.to_str().unwrap(),
        "--output",
        svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("width=\"512\""));
}

#[test]
fn render_rejects_nonclosed_polygon() {
    let dir = std::env::temp_dir().join("grasspoly-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let poly = dir.join("bad.json");
    std::fs::write(&poly, r#"{"edges": [[0.5, 0.0], [0.0, 0.5], [0.5, 0.0]]}"#).unwrap();
    let out = grasspoly(&["render", "--input", poly.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_group_suite_passes() {
    let out = grasspoly(&["verify", "--suite", "group", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS b4-exhaustive"));
}

#[test]
fn help_lists_experiments_with_targets() {
    let out = grasspoly(&["estimate", "--help"]);
    let text = stdout(&out);
    assert!(text.contains("obtuse"));
    assert!(text.contains("0.8380931995"));
    assert!(text.contains("2/(n-1)!"));
    assert!(text.contains("cell-occupancy"));
}
