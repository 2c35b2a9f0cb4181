use std::path::Path;

use assert_cmd::Command;
use menger_core::report::strip_timestamp;
use serde_json::Value;
use tempfile::TempDir;

fn menger() -> Command {
    Command::cargo_bin("menger").unwrap()
}

fn run_ok(args: &[&str]) -> Value {
    let out = menger().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn circle(dir: &TempDir) -> String {
    let p = dir.path().join("circle.csv").display().to_string();
    menger().args(["generate", "--kind", "sphere", "--m", "1", "--count", "1000", "--seed", "4", "--output", &p]).assert().success();
    p
}

#[test]
fn constants_closed_forms() {
    let v = run_ok(&["constants", "--E", "1", "--m", "2", "--p", "16", "--delta", "0.25"]);
    assert_eq!(v["command"], "constants");
    assert!((v["results"]["tau"].as_f64().unwrap() - 1.0 / 15.0).abs() < 1e-12);
    assert_eq!(v["results"]["alpha"].as_f64(), Some(0.5));
}

#[test]
fn brute_energy_of_three_points() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.csv", "#menger m=1 n=2\n0,0,1\n1,0,1\n0,1,1\n");
    let v = run_ok(&["energy", "--input", &tri, "--p", "2", "--method", "brute"]);
    assert_eq!(v["results"]["value"].as_f64(), Some(0.1875));
    assert_eq!(v["diagnostics"]["points"], 3);
}

#[test]
fn report_schema_and_resolved_config() {
    let v = run_ok(&["constants", "--E", "1", "--m", "1", "--p", "4"]);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "params", "results", "diagnostics", "tool_version", "timestamp"]);
    let cfg = v["params"]["config"].as_object().unwrap();
    assert_eq!(cfg.len(), 17);
    assert_eq!(cfg["mc.samples"], 100000);
    assert_eq!(v["params"]["args"]["delta"], Value::Null);
    assert_eq!(v["results"]["delta"].as_f64(), Some(0.25));
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.cfg", "# test\nseed = 5\nmc.samples = 3000\nmc.batch = 100\n");
    let cloud = circle(&dir);
    let v = run_ok(&["energy", "--input", &cloud, "--p", "4", "--config", &cfg, "--seed", "7"]);
    assert_eq!(v["params"]["config"]["seed"], 7);
    assert_eq!(v["params"]["config"]["mc.batch"], 100);
    assert_eq!(v["results"]["samples"], 3000);
    let v = run_ok(&["energy", "--input", &cloud, "--p", "4", "--config", &cfg, "--samples", "2000", "--set", "mc.batch=50"]);
    assert_eq!(v["results"]["samples"], 2000);
    assert_eq!(v["params"]["config"]["mc.batch"], 50);
}

#[test]
fn reports_are_deterministic_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let cloud = circle(&dir);
    let run = |threads: &str| {
        let out = menger()
            .args(["gap-scan", "--input", &cloud, "--radii", "0.1:0.3:3", "--centers", "4", "--seed", "11", "--threads", threads])
            .output()
            .unwrap();
        assert!(out.status.success());
        strip_timestamp(&String::from_utf8(out.stdout).unwrap())
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
    let mc = |seed: &str| {
        let out = menger().args(["energy", "--input", &cloud, "--p", "4", "--samples", "5000", "--seed", seed]).output().unwrap();
        strip_timestamp(&String::from_utf8(out.stdout).unwrap())
    };
    assert_eq!(mc("2"), mc("2"));
    assert_ne!(mc("2"), mc("3"));
}

#[test]
fn tables_and_report_files() {
    let dir = TempDir::new().unwrap();
    let cloud = circle(&dir);
    let table = dir.path().join("t.csv");
    let report = dir.path().join("r.json");
    menger()
        .args(["tangent", "--input", &cloud, "--point-index", "0", "--radius", "0.4", "--steps", "4"])
        .arg("--table")
        .arg(&table)
        .arg("--output")
        .arg(&report)
        .assert()
        .success()
        .stdout("");
    let csv = std::fs::read_to_string(&table).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("radius,points,beta_bar,dist_to_prev"));
    let rows = lines.count();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(rows >= 2);
    assert_eq!(v["results"]["table"].as_array().unwrap().len(), rows);
    assert_eq!(v["command"], "tangent");
    assert_eq!(v["params"]["config"]["output.table"], table.display().to_string());
}

#[test]
fn generated_cloud_round_trips() {
    let dir = TempDir::new().unwrap();
    let cloud = circle(&dir);
    assert!(Path::new(&cloud).exists());
    let loaded = menger_core::pointcloud::load_cloud(Path::new(&cloud)).unwrap();
    assert_eq!(loaded.len(), 1000);
    assert!((loaded.weights().iter().sum::<f64>() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn validation_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let cloud = circle(&dir);
    let cases: Vec<Vec<&str>> = vec![
        vec!["beta", "--input", "/nonexistent/cloud.csv", "--point-index", "0", "--radius", "0.1"],
        vec!["beta", "--input", &cloud, "--point-index", "5000", "--radius", "0.1"],
        vec!["beta", "--input", &cloud, "--point-index", "0", "--radius", "-1"],
        vec!["gap-scan", "--input", &cloud, "--radii", "0.3:0.1:2"],
        vec!["energy", "--input", &cloud, "--p", "2", "--method", "nope"],
        vec!["constants", "--E", "1", "--m", "2", "--p", "4"],
        vec!["constants", "--E", "1", "--m", "1", "--p", "4", "--set", "bogus=1"],
        vec!["generate", "--kind", "blob", "--output", "x.csv"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = menger().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn brute_budget_is_enforced() {
    let dir = TempDir::new().unwrap();
    let cloud = circle(&dir);
    let out = menger().args(["energy", "--input", &cloud, "--p", "2", "--method", "brute", "--set", "brute.max_tuples=1000"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn verify_exit_status_follows_the_suite() {
    let out = menger().args(["verify", "--suite", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS criterion  4"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["passed"], true);
    let out = menger().args(["verify", "--suite", "13"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
