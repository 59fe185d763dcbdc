use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn herglotz() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_herglotz"));
    c.env_remove("HERGLOTZ_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    herglotz().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dos_of_free_model_lists_cosine_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("dos.csv");
    let out = run(&["dos", "--model", "free", "--N", "4", "--out", path(&csv_path)]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["lambda", "weight", "k"]);
    let rows: Vec<Vec<f64>> =
        rdr.records().map(|r| r.unwrap().iter().map(|s| s.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    let mut expect: Vec<f64> = (1..=4).map(|j| 2.0 * (j as f64 * std::f64::consts::PI / 5.0).cos()).collect();
    expect.sort_by(f64::total_cmp);
    for (row, e) in rows.iter().zip(&expect) {
        assert!((row[0] - e).abs() < 1e-13, "{} vs {e}", row[0]);
        assert!((row[1] - 0.25).abs() < 1e-15);
    }
    assert!((rows[3][2] - 1.0).abs() < 1e-14);
}

#[test]
fn thouless_check_passes_on_random_model() {
    let out = run(&["thouless-check", "--model", "random:seed=7", "--N", "200,400"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], Value::Bool(true));
}

#[test]
fn equilibrium_of_symmetric_bands() {
    let out = run(&["equilibrium", "--set", "[-2,-1],[1,2]"]);
    assert_eq!(out.status.code(), Some(0));
    let cap = json(&out)["capacity"].as_f64().unwrap();
    assert!((cap - 3f64.sqrt() / 2.0).abs() < 1e-10, "{cap}");
}

#[test]
fn capacity_of_empty_set_is_zero() {
    let out = run(&["capacity", "--set", "empty"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["capacity"].as_f64(), Some(0.0));
}

#[test]
fn malformed_model_is_a_usage_error() {
    let out = run(&["dos", "--model", "periodic:a=1;b=", "--N", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("usage error"), "{err}");
    assert!(err.contains("random:seed"), "grammar missing from: {err}");
}

#[test]
fn unknown_flag_and_missing_source_exit_two() {
    assert_eq!(run(&["capacity", "--sett", "[0,1]"]).status.code(), Some(2));
    assert_eq!(run(&["reflectionless", "--on", "[-1,1]"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn failing_reflectionless_check_exits_one() {
    let out = run(&["reflectionless", "--equilibrium-of", "[-2,-1],[1,2]", "--on", "[-2,2]", "--points", "20"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], Value::Bool(false));
}

#[test]
fn passing_reflectionless_check_exits_zero() {
    let out = run(&["reflectionless", "--equilibrium-of", "[-2,-1],[1,2]", "--on", "[-2,-1],[1,2]", "--points", "20"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn pointmass_only_in_gaps() {
    let gap = json(&run(&["pointmass", "--set", "[-2,-1],[1,2]", "--x", "0"]));
    assert_eq!(gap["possible"], Value::Bool(true));
    assert!(gap["inverse_distance_integral"].as_f64().unwrap().is_finite());
    let band = json(&run(&["pointmass", "--set", "[-2,-1],[1,2]", "--x", "1.5"]));
    assert_eq!(band["possible"], Value::Bool(false));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["lyapunov", "--model", "random:seed=3", "--N", "300", "--points", "64"];
    let one = herglotz().args(["--threads", "1"]).args(args).output().unwrap();
    let four = herglotz().args(["--threads", "4"]).args(args).output().unwrap();
    let env = herglotz().env("HERGLOTZ_THREADS", "3").args(args).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn bad_thread_env_is_a_usage_error() {
    let out = herglotz().env("HERGLOTZ_THREADS", "0").args(["capacity", "--set", "[0,1]"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"command": "thouless-check", "model": {"kind": "periodic", "a": [1, 1], "b": [1, -1]}, "N": [100, 200]}"#,
    )
    .unwrap();
    let via_config = run(&["--config", path(&cfg)]);
    let via_flags = run(&["thouless-check", "--model", "periodic:a=1,1;b=1,-1", "--N", "100,200"]);
    assert_eq!(via_config.status.code(), Some(0), "{}", String::from_utf8_lossy(&via_config.stderr));
    assert_eq!(via_config.stdout, via_flags.stdout);
}

#[test]
fn config_with_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "capacity", "set": "[0,1]"}"#).unwrap();
    assert_eq!(run(&["--config", path(&cfg), "capacity", "--set", "[0,1]"]).status.code(), Some(2));
}

#[test]
fn krein_of_interval_indicator() {
    // xi = 1 on (-1, 1) gives G(z) = (z - 1)/(z + 1), so G(i) = i.
    let dir = tempfile::tempdir().unwrap();
    let xi = dir.path().join("xi.json");
    std::fs::write(&xi, r#"{"breaks": [-1, 1], "values": [0, 1, 0]}"#).unwrap();
    let out = run(&["krein", "from", "--xi", path(&xi), "--z", "0,1;2,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<Vec<f64>> =
        rdr.records().map(|r| r.unwrap().iter().map(|s| s.parse().unwrap()).collect()).collect();
    assert!(rows[0][2].abs() < 1e-12 && (rows[0][3] - 1.0).abs() < 1e-12, "{:?}", rows[0]);
    let z = num_complex::Complex64::new(2.0, 0.5);
    let g = (z - 1.0) / (z + 1.0);
    assert!((rows[1][2] - g.re).abs() < 1e-12 && (rows[1][3] - g.im).abs() < 1e-12);
}

#[test]
fn equilibrium_document_round_trips_through_krein_to() {
    let dir = tempfile::tempdir().unwrap();
    let eq = dir.path().join("eq.json");
    assert_eq!(run(&["equilibrium", "--set", "[-2,2]", "--out", path(&eq)]).status.code(), Some(0));
    let out = run(&["krein", "to", "--measure", path(&eq), "--x-min", "-3", "--x-max", "3", "--points", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    for r in rdr.records() {
        let r = r.unwrap();
        let x: f64 = r[0].parse().unwrap();
        let xi: f64 = r[1].parse().unwrap();
        let expect = if x < -2.0 { 0.0 } else if x > 2.0 { 1.0 } else if x.abs() < 2.0 { 0.5 } else { continue };
        assert!((xi - expect).abs() < 1e-8, "xi({x}) = {xi}");
    }
    let check = run(&["reflectionless", "--measure", path(&eq), "--on", "[-2,2]", "--points", "10"]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["dos", "--model", "qp:lambda=1,alpha=golden,theta=0.3", "--N", "100"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
