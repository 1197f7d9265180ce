use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracgalerkin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn zero_problem_gives_zero_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", r#"{"m": 3, "alpha": 0.6, "n": 65}"#);
    let out = dir.path().join("out");
    let o = run(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&out.join("solution.csv"));
    assert_eq!(header, ["t", "g1", "g2", "g3"]);
    assert_eq!(rows.len(), 65);
    assert!(rows.iter().all(|r| r[1..].iter().all(|&v| v == 0.0)));
    let energy: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("energy.json")).unwrap()).unwrap();
    assert_eq!(energy["all_satisfied"], true);
}

#[test]
fn first_mode_decays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"m": 2, "alpha": 0.75, "n": 257, "u0": {"kind": "sine_mode", "k": 1}, "forcing": {"kind": "zero"}}"#,
    );
    let out = dir.path().join("out");
    let o = run(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv_rows(&out.join("solution.csv"));
    assert_eq!(rows[0][1], 1.0);
    for w in rows.windows(2) {
        assert!(w[1][1] < w[0][1]);
        assert_eq!(w[1][2], 0.0);
    }
}

#[test]
fn malformed_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\"m\": 2, \"alpha\":");
    let o = run(&["solve", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&run(&["solve", "--config", missing.to_str().unwrap()])), 1);
    let out_of_range = write(dir.path(), "a.json", r#"{"m": 2, "alpha": 0.3, "n": 9}"#);
    assert_eq!(code(&run(&["solve", "--config", &out_of_range, "--out", dir.path().to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["solve"])), 1);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["check", "--seed", "minus-one"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn solve_output_is_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"m": 4, "alpha": 0.8, "n": 129, "u0": {"kind": "parabola"}, "forcing": {"kind": "sine_mode_decay", "k": 2, "rate": 1.0}}"#,
    );
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("out{threads}"));
        let o = bin()
            .args(["solve", "--config", &cfg, "--out", out.to_str().unwrap()])
            .env("FRACGALERKIN_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        outputs.push((fs::read(out.join("solution.csv")).unwrap(), fs::read(out.join("energy.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let o = bin()
        .args(["solve", "--config", &cfg])
        .env("FRACGALERKIN_THREADS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn caputo_suite_is_deterministic_and_clean() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run_id in 0..2 {
        let out = dir.path().join(format!("r{run_id}"));
        let o = run(&["check", "--suite", "caputo_energy", "--seed", "20250527", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        files.push(fs::read(out.join("check_caputo_energy.json")).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let v: serde_json::Value = serde_json::from_slice(&files[0]).unwrap();
    assert_eq!(v["total_violations"], 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 300);
    assert!(v["cases"][0]["min_gap"].is_number());
}

#[test]
fn lemma32_on_constant_field_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"n": 129, "cases": 10, "field": {"kind": "constant"}}"#);
    let o = run(&["check", "--suite", "lemma32", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("check_lemma32.json")).unwrap()).unwrap();
    for case in v["cases"].as_array().unwrap() {
        assert_eq!(case["max_abs_gap"], 0.0);
    }
}

#[test]
fn every_suite_runs_on_a_small_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"n": 257, "cases": 8, "alphas": [0.4, 0.6]}"#);
    for suite in ["caputo_energy", "rl_energy", "lemma32", "product_rule"] {
        let o = run(&["check", "--suite", suite, "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{suite}: {}", String::from_utf8_lossy(&o.stdout));
    }
    // a zero tolerance turns rounding noise into violations
    let o = run(&[
        "check",
        "--suite",
        "product_rule",
        "--config",
        &cfg,
        "--tol",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_suite_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["check", "--suite", "energy", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
    assert_eq!(code(&run(&["check", "--out", dir.path().to_str().unwrap()])), 1);
}

#[test]
fn converge_floor_and_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["converge", "--out", out]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv_rows(&dir.path().join("convergence.csv"));
    assert_eq!(header, ["nodes", "h", "error_at_t", "max_error", "order"]);
    assert_eq!(rows.len(), 4);
    assert!(rows[0][4].is_nan());
    assert!(rows[1..].iter().all(|r| r[4] > 0.9));
    assert_eq!(code(&run(&["converge", "--tol", "3.0", "--out", out])), 2);
    assert_eq!(code(&run(&["converge", "--levels", "1", "--out", out])), 1);
}

#[test]
fn mlf_values() {
    let o = run(&["mlf", "--alpha", "1", "--z", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["value"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-12);
    let o = run(&["mlf", "--alpha", "0.5", "--z=-1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["value"].as_f64().unwrap() - 0.427584).abs() < 1e-6);
    assert_eq!(code(&run(&["mlf", "--alpha", "1.5", "--z", "1"])), 1);
    assert_eq!(code(&run(&["mlf", "--alpha", "0.5", "--z", "1e9"])), 1);
}

#[test]
fn bounds_reports() {
    let o = run(&["bounds", "--regime", "p-to-p", "--p", "1", "--function", "exp(-t)"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["satisfied"], true);
    assert_eq!(code(&run(&["bounds", "--alpha", "1.5"])), 1);
    assert_eq!(code(&run(&["bounds", "--regime", "lift", "--alpha", "0.75", "--p", "2"])), 1);
    assert_eq!(code(&run(&["bounds", "--function", "gamma(t)"])), 1);
    let o = run(&["bounds", "--regime", "sup-norm", "--alpha", "0.75", "--p", "2", "--n", "1025"]);
    assert_eq!(code(&o), 0);
}
