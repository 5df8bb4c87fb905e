use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn uqsl2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uqsl2")).args(args).env_remove("UQSL2_TOL").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn reports_share_one_shape() {
    let out = uqsl2(&["commutator", "E", "F"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for key in ["command", "mode", "inputs", "result", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "commutator");
    assert_eq!(v["mode"], "symbolic");
    let terms = v["result"]["terms"].as_array().unwrap();
    let js: Vec<i64> = terms.iter().map(|t| t["j"].as_i64().unwrap()).collect();
    assert_eq!(js, vec![-1, 1]);
}

#[test]
fn normalize_relation_is_zero() {
    let out = uqsl2(&["normalize", "K*E - {q^2}*E*K"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["normal_form"], "0");
    assert!(v["result"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&uqsl2(&["normalize", "E^(1/2)"])), 2);
    assert_eq!(code(&uqsl2(&["normalize", "E*"])), 2);
    assert_eq!(code(&uqsl2(&["rep-build", "--rep", "2,3"])), 2);
    assert_eq!(code(&uqsl2(&["no-such-command"])), 2);
    assert_eq!(code(&uqsl2(&["table-audit", "--q-off", "1"])), 2);
}

#[test]
fn failed_checks_exit_one() {
    let out = uqsl2(&["casimir", "--rep", "1,1;2,1"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["checks"][0]["status"], "fail");
}

#[test]
fn rep_check_passes_with_zero_residuals() {
    let out = uqsl2(&["rep-check", "--rep", "3,-1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn commutant_of_a_sum() {
    let v = json(&uqsl2(&["commutant", "--rep", "1,1;1,1"]));
    assert_eq!(v["result"]["dim"], 4);
}

#[test]
fn decompose_recovers_labels() {
    let out = uqsl2(&["decompose", "--rep", "2,1,-1;0,0,1", "--conjugate", "--seed", "5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let labels: Vec<(u64, i64, i64)> = v["result"]["labels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["n"].as_u64().unwrap(), l["k"].as_i64().unwrap(), l["eps"].as_i64().unwrap()))
        .collect();
    assert_eq!(labels, vec![(0, 0, 1), (2, 1, -1)]);
}

#[test]
fn witness_round_trip_through_stdin() {
    let built = uqsl2(&["witness-build", "2"]);
    assert_eq!(code(&built), 0);
    let mut child = Command::new(env!("CARGO_BIN_EXE_uqsl2"))
        .args(["witness-verify", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&built.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["ok"], true);
    assert_eq!(v["result"]["levels_checked"], 2);
}

#[test]
fn tampered_witness_fails() {
    let built = json(&uqsl2(&["witness-build", "1"]));
    let mut cert = built["result"]["certificate"].clone();
    cert["levels"][0]["r"]["terms"]["1"] = Value::from("2*q/(q^2 - 1)");
    let path = std::env::temp_dir().join(format!("uqsl2-tampered-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_vec(&cert).unwrap()).unwrap();
    let out = uqsl2(&["witness-verify", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["result"]["ok"], false);
}

#[test]
fn verma_norms_csv() {
    let out = uqsl2(&["verma-norms", "--mode", "numeric", "--q", "exp(1i)", "--sizes", "5,10", "--out", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,normE,normF,normK");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("5,"));
    let cols: Vec<f64> = lines[2].split(',').skip(1).map(|c| c.parse().unwrap()).collect();
    assert!((cols[2] - 1.0).abs() < 1e-8, "normK = {}", cols[2]);
}

#[test]
fn verma_scan_symbolic() {
    let v = json(&uqsl2(&["verma-scan", "--lam", "-q^4", "--size", "9"]));
    assert_eq!(v["result"]["indices"], serde_json::json!([4]));
}

#[test]
fn tolerance_from_environment() {
    let args = ["verma-scan", "--mode", "numeric", "--q", "exp(1i)", "--lam", "1.7", "--size", "6"];
    let strict = json(&uqsl2(&args));
    assert_eq!(strict["result"]["indices"], serde_json::json!([]));
    let loose =
        Command::new(env!("CARGO_BIN_EXE_uqsl2")).args(args).env("UQSL2_TOL", "10").output().expect("binary runs");
    assert!(!json(&loose)["result"]["indices"].as_array().unwrap().is_empty());
}

#[test]
fn center_check_reports_exponent() {
    let out = uqsl2(&["center-check", "--d", "8"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["s"], 4);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn growth_trace() {
    let out = uqsl2(&["growth", "--mode", "numeric", "--q", "2", "--n", "3", "--eps=-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["vanishes_at"], 4);
}

#[test]
fn separation_profile_output() {
    let v = json(&uqsl2(&["separation-rank", "--degree", "1", "--stage", "3", "--profile"]));
    assert_eq!(v["result"]["ranks"], serde_json::json!([2, 5, 5, 5]));
}

#[test]
fn small_table_audit_passes() {
    let out = uqsl2(&["table-audit", "--max-n", "2", "--sizes", "10,20"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 5);
}
