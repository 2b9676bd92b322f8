use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lienard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lienard")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("lienard-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn cycles_on_zero_damping() {
    let out = lienard(&["cycles", "--alpha", "0,0,0"]);
    assert!(out.status.success());
    let v = report(&out);
    assert_eq!(v["totals"], serde_json::json!({"origin": 0, "others": 0}));
    assert_eq!(v["config"]["tol"], 1e-9);
}

#[test]
fn certify_lists_exact_determinants() {
    let out = lienard(&["certify", "--k", "2", "--l", "1", "--beta-odd", "-3", "--even-signs", "+"]);
    assert!(out.status.success());
    let v = report(&out);
    let rows = v["determinants"].as_array().unwrap();
    let got: Vec<(&str, &str)> =
        rows.iter().map(|r| (r["param"].as_str().unwrap(), r["determinant"].as_str().unwrap())).collect();
    assert_eq!(got, [("a0", "y^2"), ("a2", "x^2*y^2"), ("a4", "x^4*y^2"), ("b1", "-x^2*y")]);
    assert!(rows.iter().all(|r| r["exact_match"] == true));
}

#[test]
fn construct_k1_l1() {
    let out = lienard(&["construct", "--k", "1", "--l", "1", "--beta-odd", "-3", "--even-signs", "+"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    assert_eq!(v["totals"], serde_json::json!({"origin": 1, "others": 1}));
    assert_eq!(v["alpha_even"].as_array().unwrap().len(), 2);
    assert_eq!(v["reached"], true);
}

#[test]
fn singular_report() {
    let out = lienard(&["singular", "--alpha", "0.1,1,-1", "--beta", "-3,1"]);
    assert!(out.status.success());
    let v = report(&out);
    let kinds: Vec<&str> = v["report"]["finite"].as_array().unwrap().iter().map(|p| p["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds[1], "saddle");
    assert_eq!(v["report"]["alternation"], "pass");
    assert_eq!(v["report"]["ledger"]["balanced"], true);
}

#[test]
fn index_at_saddle() {
    let out = lienard(&["index", "--alpha", "0.1,1,-1", "--beta", "-3,1", "--x", "0.381966", "--radius", "0.1"]);
    assert!(out.status.success());
    assert_eq!(report(&out)["index"], -1);
    let fixed = lienard(&["index", "--alpha", "0", "--samples", "512"]);
    assert_eq!(report(&fixed)["index"], 1);
    assert_eq!(report(&fixed)["method"], "fixed");
}

#[test]
fn index_through_singular_point_is_analysis_failure() {
    let out = lienard(&["index", "--alpha", "0.1,1,-1", "--beta", "-3,1", "--x", "0.2", "--radius", "0.181966011250105", "--samples", "256"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "analysis");
}

#[test]
fn config_errors_exit_2_with_json() {
    for args in [
        vec!["cycles"],
        vec!["cycles", "--alpha", "0", "--tol", "-1"],
        vec!["frobnicate"],
        vec!["cycles", "--alpha", "1,2"],
        vec!["construct", "--k", "1", "--l", "2", "--beta-odd", "1"],
    ] {
        let out = lienard(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("json on stderr");
        assert_eq!(err["error"], "config");
    }
}

#[test]
fn bad_thread_count_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_lienard"))
        .args(["cycles", "--alpha", "0"])
        .env("LIENARD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_lienard"))
            .args(["cycles", "--alpha=-0.001,1,0.1,1,-1"])
            .env("LIENARD_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("4"));
}

#[test]
fn config_file_round_trip() {
    let dir = scratch("config");
    let first = lienard(&["cycles", "--alpha", "0.1,1,-1", "--samples", "32"]);
    let v = report(&first);
    let path = dir.join("run.json");
    fs::write(&path, serde_json::to_string(&v["config"]).unwrap()).unwrap();
    let again = lienard(&["cycles", "--config", path.to_str().unwrap()]);
    assert_eq!(first.stdout, again.stdout);
    // flags override the file
    let over = lienard(&["cycles", "--config", path.to_str().unwrap(), "--samples", "40"]);
    assert_eq!(report(&over)["config"]["samples"], 40);
}

#[test]
fn unknown_config_key_rejected() {
    let dir = scratch("badkey");
    let path = dir.join("run.json");
    fs::write(&path, r#"{"system":{"form":"general","alpha":[0]},"tolerance":1e-6}"#).unwrap();
    let out = lienard(&["cycles", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cycles_writes_profiles() {
    let dir = scratch("profiles");
    let out = lienard(&["cycles", "--alpha", "0.1,1,-1", "--csv-dir", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.join("profile_0.csv")).unwrap();
    assert!(text.starts_with("r,d,status\n"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn portrait_writes_trajectories() {
    let dir = scratch("portrait");
    let out = lienard(&[
        "portrait",
        "--alpha", "0.1,1,-1",
        "--starts", "0.01,0;1.5,0",
        "--t-max", "30",
        "--csv-dir", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = report(&out);
    assert_eq!(v["trajectories"].as_array().unwrap().len(), 2);
    for i in 0..2 {
        let text = fs::read_to_string(dir.join(format!("trajectory_{i}.csv"))).unwrap();
        assert!(text.starts_with("t,x,y\n"));
    }
}

#[test]
fn sweep_from_plan_file() {
    let dir = scratch("sweep");
    let plan = r#"{
        "template": {"form": "general", "alpha": [0.0, 1.0, 0.0]},
        "order": [{"slot": "a2", "to": -1.0, "steps": 5}, {"slot": "a0", "from": -0.05, "to": 0.05, "steps": 10}]
    }"#;
    let path = dir.join("plan.json");
    fs::write(&path, plan).unwrap();
    let out = lienard(&["sweep", "--plan", path.to_str().unwrap(), "--samples", "32"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    assert_eq!(v["alternating"], true);
    let events = v["log"]["events"].as_array().unwrap();
    assert!(events.iter().any(|e| e["kind"] == "hopf"));
}

#[test]
fn certify_monotonicity() {
    let out = lienard(&[
        "certify",
        "--system", r#"{"form":"canonical","alpha_even":[0.1,-1]}"#,
        "--slot", "a2",
        "--values=-1,-0.9,-0.8",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    assert_eq!(v["monotonicity"]["result"], "pass");
    assert_eq!(v["symmetry"], "none");
}

#[test]
fn verify_runs_all_criteria() {
    let out = lienard(&["verify"]);
    let v = report(&out);
    assert_eq!(v["total"], 9);
    assert_eq!(out.status.success(), v["passed"] == 9);
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 9);
}
