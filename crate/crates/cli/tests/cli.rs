use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mogavs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mogavs")).args(args).env_remove("MOGAVS_WORKERS").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = mogavs(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stderr.is_empty(), "unexpected stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Runs a failing command and returns its error code.
fn fails(args: &[&str]) -> String {
    let out = mogavs(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "error should be one line: {stderr:?}");
    let code = stderr.strip_prefix("error[").and_then(|s| s.split_once(']')).expect("error[CODE] prefix").0;
    code.to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn simulate2(dir: &Path, rows: &str, predictors: &str) -> std::path::PathBuf {
    let out = dir.join("sim");
    ok(&["simulate", "--example", "2", "-n", rows, "-p", predictors, "--seed", "3", "--out", p(&out)]);
    out.join("data.csv")
}

#[test]
fn simulate_writes_expected_shapes_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&["simulate", "--example", "1", "-n", "1000", "--seed", "7", "--out", p(out)]);
    }
    let csv = fs::read_to_string(a.join("data.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 26);
    assert_eq!(csv.lines().count(), 1001);
    assert_eq!(csv, fs::read_to_string(b.join("data.csv")).unwrap());
    assert_eq!(fs::read(a.join("truth.json")).unwrap(), fs::read(b.join("truth.json")).unwrap());
    let truth = json(&a.join("truth.json"));
    assert_eq!(truth["mask"].as_str().unwrap().len(), 25);

    let c = dir.path().join("c");
    ok(&["simulate", "--example", "2", "-n", "500", "-p", "100", "--out", p(&c)]);
    let csv = fs::read_to_string(c.join("data.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 101);
    assert_eq!(csv.lines().count(), 501);
}

#[test]
fn run_records_derived_defaults_and_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "150", "12");
    let run = dir.path().join("run");
    ok(&["run", "--data", p(&data), "--iterations", "60", "--snapshot-every", "20", "--seed", "9", "--out", p(&run)]);
    let file = json(&run.join("frontier.json"));
    let config = &file["config"];
    assert_eq!(config["population_size"], 12);
    assert_eq!(config["offspring"], 12);
    assert_eq!(config["mutation_prob"].as_f64().unwrap(), 1.0 / 12.0);
    assert_eq!(config["crossover_prob"].as_f64().unwrap(), 0.9);
    assert_eq!(file["stats"]["models_evaluated"], 12 + 12 * 60);
    let models = file["models"].as_array().unwrap();
    for m in models {
        let mask = m["mask"].as_str().unwrap();
        assert_eq!(mask.chars().filter(|&c| c == '1').count() as u64, m["phi1"].as_u64().unwrap());
        assert_eq!(m["variables"].as_array().unwrap().len(), m["coefficients"].as_array().unwrap().len());
    }
    let gens: Vec<u64> = file["snapshots"].as_array().unwrap().iter().map(|s| s["generation"].as_u64().unwrap()).collect();
    assert_eq!(gens, [0, 1, 20, 40, 60]);
    assert_eq!(fs::read_to_string(run.join("frontier.csv")).unwrap().lines().count(), models.len() + 1);
    assert!(run.join("snapshots.csv").exists());

    let replay = dir.path().join("replay");
    ok(&["run", "--replay", p(&run.join("frontier.json")), "--out", p(&replay)]);
    assert_eq!(fs::read(run.join("frontier.json")).unwrap(), fs::read(replay.join("frontier.json")).unwrap());
}

#[test]
fn defaults_scale_with_predictor_count() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "200", "122");
    let out = dir.path().join("wide");
    ok(&["run", "--data", p(&data), "--iterations", "3", "--bounds", "1:20", "--out", p(&out)]);
    let file = json(&out.join("frontier.json"));
    let config = &file["config"];
    assert_eq!(config["population_size"], 122);
    assert_eq!(config["offspring"], 122);
    assert_eq!(config["mutation_prob"].as_f64().unwrap(), 1.0 / 122.0);
    for m in file["models"].as_array().unwrap() {
        assert!((1..=20).contains(&m["phi1"].as_u64().unwrap()));
    }
    let help = ok(&["run", "--help"]);
    assert!(help.contains("[default: 500]"));
}

#[test]
fn bounds_and_cross_validation() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "120", "15");
    let out = dir.path().join("bounded");
    ok(&["run", "--data", p(&data), "--iterations", "40", "--bounds", "2:5", "--objective", "cv:5", "--out", p(&out)]);
    let file = json(&out.join("frontier.json"));
    assert_eq!(file["config"]["objective"]["kind"], "cross_validation");
    assert_eq!(file["config"]["objective"]["folds"], 5);
    for m in file["models"].as_array().unwrap() {
        assert!((2..=5).contains(&m["phi1"].as_u64().unwrap()));
    }
}

#[test]
fn baselines_and_every_analysis_task() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "150", "10");
    let exh = dir.path().join("exh");
    ok(&["baseline", "--data", p(&data), "--method", "exhaustive", "--out", p(&exh)]);
    let file = json(&exh.join("frontier.json"));
    assert_eq!(file["producer"], "exhaustive");
    assert_eq!(file["models"].as_array().unwrap().len(), 11);

    for method in ["forward", "backward", "stepwise"] {
        let out = dir.path().join(method);
        ok(&["baseline", "--data", p(&data), "--method", method, "--out", p(&out)]);
        let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("0,start,"));
        let steps = json(&out.join("trajectory.json"));
        assert_eq!(steps["method"], method);
    }

    let frontier = exh.join("frontier.json");
    let an = dir.path().join("an");
    let stdout = ok(&["analyze", "--frontier", p(&frontier), "--task", "knee", "--out", p(&an)]);
    assert!(stdout.starts_with("knee at "));
    let knee = json(&an.join("knee.json"));
    assert_eq!(knee["coefficients"].as_u64().unwrap(), knee["complexity"].as_u64().unwrap() + 1);

    let stdout = ok(&["analyze", "--frontier", p(&frontier), "--task", "criteria", "--count-intercept", "--out", p(&an)]);
    assert_eq!(stdout.lines().count(), 12);
    assert!(stdout.contains('*'));

    ok(&["analyze", "--frontier", p(&frontier), "--task", "kappa", "--range", "2:6", "--splits", "2", "--out", p(&an)]);
    let kappa = json(&an.join("kappa.json"));
    assert_eq!(kappa["per_split"].as_array().unwrap().len(), 2);
    assert!(kappa["kappa"].as_f64().unwrap() > 0.0);

    ok(&["analyze", "--frontier", p(&frontier), "--task", "osplot", "--log-y", "--out", p(&an)]);
    let svg = fs::read_to_string(an.join("osplot.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(fs::read_to_string(an.join("osplot.csv")).unwrap().lines().count(), 12);

    let stdout = ok(&["analyze", "--frontier", p(&frontier), "--task", "hsplot", "--range", "1:4", "--out", p(&an)]);
    assert_eq!(stdout.lines().next().unwrap().split_whitespace().collect::<Vec<_>>(), ["variable", "1", "2", "3", "4"]);
    assert!(an.join("hsplot.svg").exists());
}

#[test]
fn errors_are_single_coded_lines() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "60", "10");
    let out = dir.path().join("x");
    let o = p(&out);
    assert_eq!(fails(&["run", "--data", "/definitely/missing.csv", "--out", o]), "E_IO");
    assert_eq!(fails(&["run", "--data", p(&data), "--target", "nope", "--out", o]), "E_TARGET");
    assert_eq!(fails(&["run", "--data", p(&data), "--objective", "cv:1", "--out", o]), "E_PARAM");
    assert_eq!(fails(&["run", "--data", p(&data), "--bounds", "7:3", "--out", o]), "E_USAGE");
    assert_eq!(fails(&["run", "--data", p(&data), "--crossover", "1.5", "--out", o]), "E_PARAM");
    assert_eq!(fails(&["run", "--no-such-flag"]), "E_USAGE");
    assert_eq!(fails(&["simulate", "--example", "3", "--out", o]), "E_USAGE");
    assert_eq!(fails(&["simulate", "--example", "2", "-n", "5", "--out", o]), "E_PARAM");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(fails(&["analyze", "--frontier", p(&bad), "--task", "knee", "--out", o]), "E_JSON");

    let tiny = dir.path().join("tiny");
    ok(&["baseline", "--data", p(&data), "--method", "exhaustive", "--max-complexity", "1", "--out", p(&tiny)]);
    assert_eq!(fails(&["analyze", "--frontier", p(&tiny.join("frontier.json")), "--task", "knee", "--out", o]), "E_PARAM");
}

#[test]
fn worker_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "80", "10");
    let run = |workers: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_mogavs"))
            .args(["run", "--data", p(&data), "--iterations", "20", "--out", p(&dir.path().join(out))])
            .env("MOGAVS_WORKERS", workers)
            .output()
            .unwrap()
    };
    assert!(run("1", "one").status.success());
    assert!(run("3", "three").status.success());
    assert_eq!(
        fs::read(dir.path().join("one/frontier.json")).unwrap(),
        fs::read(dir.path().join("three/frontier.json")).unwrap()
    );
    assert!(!run("0", "zero").status.success());
}

#[test]
fn progress_goes_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate2(dir.path(), "60", "10");
    let out = mogavs(&["run", "--data", p(&data), "--iterations", "5", "--progress", "--out", p(&dir.path().join("r"))]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 6);
    assert!(stderr.lines().last().unwrap().starts_with("generation 5: "));
}
