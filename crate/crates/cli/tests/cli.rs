use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_anneal-emu"));
    c.env_remove("ANNEAL_EMU_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn k2(dir: &Path) -> String {
    let path = dir.join("k2.edges");
    fs::write(&path, "# single edge\nn 2\n0 1\n").unwrap();
    path.to_str().unwrap().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn enumerate_writes_one_file_per_class() {
    let tmp = tempfile::tempdir().unwrap();
    for (n, count) in [(2, 1), (4, 6)] {
        let out = tmp.path().join(format!("n{n}"));
        let o = run(&["enumerate", "--n", &n.to_string(), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let edges = fs::read_dir(&out)
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "edges"))
            .count();
        assert_eq!(edges, count);
        let index = read_json(&out.join("index.json"));
        assert_eq!(index.as_array().unwrap().len(), count);
    }
}

#[test]
fn non_empty_output_needs_force() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("keep.txt"), "x").unwrap();
    let out = tmp.path().to_str().unwrap();
    let o = run(&["enumerate", "--n", "3", "--out", out]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
    assert!(!tmp.path().join("index.json").exists());
    let o = run(&["enumerate", "--n", "3", "--out", out, "--force"]);
    assert_eq!(code(&o), 0);
    assert!(tmp.path().join("index.json").exists());
    assert!(tmp.path().join("keep.txt").exists());
}

#[test]
fn qaoa_opt_k2_is_optimal_and_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k2(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let o = run(&["qaoa-opt", "--graph", &g, "--p", "1", "--seed", "4", "--out", d.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ja = fs::read(a.join("schedule.json")).unwrap();
    assert_eq!(ja, fs::read(b.join("schedule.json")).unwrap());
    assert_eq!(fs::read(a.join("trace.csv")).unwrap(), fs::read(b.join("trace.csv")).unwrap());

    // grid search over <C> = -sin(2γ)·sin(4β), independent of the optimizer
    let mut best = f64::INFINITY;
    for i in 0..=400 {
        for j in 0..=400 {
            let (gamma, beta) = (i as f64 * std::f64::consts::PI / 400.0, j as f64 * std::f64::consts::PI / 400.0);
            best = best.min(-(2.0 * gamma).sin() * (4.0 * beta).sin());
        }
    }
    let grid_ratio = (1.0 - best) / 2.0;
    let level = &read_json(&a.join("schedule.json"))["levels"][0];
    let ratio = level["ratio"].as_f64().unwrap();
    assert!(ratio >= 0.95);
    assert!(ratio >= grid_ratio - 1e-6, "{ratio} vs grid {grid_ratio}");
}

#[test]
fn malformed_graph_reports_line() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.edges");
    fs::write(&path, "n 3\n0 1\n1 two\n").unwrap();
    let o = run(&["qaoa-opt", "--graph", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&["qaoa-opt", "--graph", tmp.path().join("missing.edges").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn poly_opt_defaults_to_powell_and_beats_the_ramp() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k2(tmp.path());
    let out = tmp.path().join("poly");
    let o = bin()
        .args(["poly-opt", "--graph", &g, "--p", "1", "--tf", "2", "--restarts", "1", "--out", out.to_str().unwrap()])
        .env("ANNEAL_EMU_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(&out.join("schedule.json"));
    assert_eq!(j["method"], "powell");
    assert_eq!(j["seed"], 11);
    assert!(j["expectation"].as_f64().unwrap() <= j["ramp_expectation"].as_f64().unwrap());
    assert_eq!(j["clist"].as_array().unwrap().len(), 2);
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,objective,x0,x1\n"));
}

#[test]
fn poly_opt_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k2(tmp.path());
    let o = run(&["poly-opt", "--graph", &g, "--tf", "1", "--seed", "1", "--method", "bfgs"]);
    assert_eq!(code(&o), 1);
    let o = run(&["poly-opt", "--graph", &g, "--tf", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
    let o = run(&["poly-opt", "--graph", &g, "--tf", "1", "--seed", "1", "--p", "0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn emulate_k2_and_single_node() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k2(tmp.path());
    let out = tmp.path().join("emu");
    let o = run(&["emulate", "--graph", &g, "--p", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(&out.join("report.json"));
    assert_eq!(j["status"], "finite");
    let factor = j["J"].as_f64().unwrap();
    assert!((factor - 1.0).abs() <= 0.02, "{factor}");
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("n,p,graph_id,T_b,t_star,factor,worst_margin,status\n"));

    let single = tmp.path().join("one.edges");
    fs::write(&single, "n 1\n").unwrap();
    let o = run(&["emulate", "--graph", single.to_str().unwrap(), "--p", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["J"].as_f64(), Some(1.0));
}

#[test]
fn sweep_baseline_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("spec.json");
    fs::write(&spec, r#"{"instances": 2}"#).unwrap();
    let mut outputs = Vec::new();
    for dir in ["a", "b"] {
        let out = tmp.path().join(dir);
        let o = run(&[
            "sweep",
            spec.to_str().unwrap(),
            "--seed",
            "5",
            "--restarts",
            "0",
            "--jobs",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((fs::read(out.join("sweep.csv")).unwrap(), fs::read(out.join("instances.csv")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let summary = String::from_utf8(outputs[0].0.clone()).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "n,p,t_f,method,instances,failures,mean_ratio,std_ratio");
    assert!(lines[1].starts_with("5,2,1.2,powell,2,0,"), "{}", lines[1]);
    let mean: f64 = lines[1].split(',').nth(6).unwrap().parse().unwrap();
    assert!((0.0..=1.0).contains(&mean));
    let instances = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert_eq!(instances.lines().count(), 3);
}

#[test]
fn sweep_requires_a_seed() {
    let o = run(&["sweep"]);
    assert_eq!(code(&o), 1);
}
