use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unigroup"))
}

fn scheme(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemes").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn generate_model_set_from_spec() {
    let path = scheme("fibonacci.json");
    let v = json(&run(&["generate", "--spec", path.to_str().unwrap(), "--radius", "50"]));
    let pts = v["pointset"]["points"].as_array().unwrap();
    assert!(pts.len() > 50);
    assert_eq!(v["pointset"]["anchor"], "0");
    assert!(pts.iter().all(Value::is_string));
}

#[test]
fn generate_periodic_window() {
    let v = json(&run(&["generate", "--periodic", "ab", "--lengths", "a=2,b=1", "--half-width", "10"]));
    assert_eq!(v["gaps"], 21);
    assert_eq!(v["word"].as_str().unwrap().len(), 21);
    assert_eq!(v["pointset"]["points"].as_array().unwrap().len(), 22);
}

#[test]
fn reversed_window_fails() {
    let path = scheme("reversed-window.json");
    let out = run(&["generate", "--spec", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("lo > hi"));
}

#[test]
fn present_table_cases() {
    let fib = json(&run(&["present", "--case", "fib"]));
    assert_eq!(fib["g_d"]["certificate"]["certificate"], "free-abelian");
    assert_eq!(fib["g_d"]["certificate"]["rank"], 2);
    assert_eq!(fib["h_d"]["rank"], 2);

    let per = json(&run(&["present", "--case", "periodic-ab-2-1"]));
    assert_eq!(per["g_d"]["certificate"]["rank"], 2);
    assert_eq!(per["h_d"]["rank"], 1);
    assert_eq!(per["h_d"]["basis"], serde_json::json!(["1"]));

    let irr = json(&run(&["present", "--case", "splice-irrational"]));
    assert_eq!(irr["g_d"]["certificate"]["certificate"], "free");
    assert_eq!(irr["h_d"]["rank"], 2);
    assert!(irr["table_discrepancy"].is_string());
}

#[test]
fn present_sl_rank() {
    let v = json(&run(&["present", "--case", "fib", "--sl", "--max-len", "4"]));
    assert_eq!(v["s_l"]["rank"], 3);
}

#[test]
fn present_macbeath() {
    let v = json(&run(&["present", "--macbeath", "--coeff-bound", "3"]));
    assert_eq!(v["abelian_invariants"]["free_rank"], 2);
}

#[test]
fn unknown_case_rejected() {
    assert!(!run(&["present", "--case", "nope"]).status.success());
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "empire", "--pairs", "12", "--coeff-bound", "30", "--seed", "7"];
    let a = json(&run(&args));
    let b = json(&run(&args));
    assert_eq!(a, b);
    assert_eq!(a["passed"], true);
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = bin()
        .args(["verify", "--suite", "semigroup-axioms", "--samples", "40", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["suites"][0]["suite"], "semigroup-axioms");
    assert_eq!(v["suites"][0]["failures"], serde_json::json!([]));
}

#[test]
fn unknown_suite_rejected() {
    assert!(!run(&["verify", "--suite", "bogus"]).status.success());
}
