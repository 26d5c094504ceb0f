use std::process::{Command, Output};

use qlearn::formats;
use qlearn_core::zoo;

fn qlearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlearn")).args(args).output().unwrap()
}

#[test]
fn gamma_of_parity2() {
    let out = qlearn(&["gamma", "--class", "parity:n=2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("gamma,parity:n=2,4,2,1/3,"));
}

#[test]
fn quantum_learn_delta5() {
    let out = qlearn(&["learn", "--class", "delta:n=5", "--learner", "quantum", "--trials", "300", "--seed", "7", "--format", "json"]);
    assert!(out.status.success());
    let row: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(row["success_rate"].as_f64().unwrap() >= 0.60);
    assert_eq!(row["pass"], true);
}

#[test]
fn usage_and_cap_errors() {
    let bad = qlearn(&["gamma", "--class", "cube:n=2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("invalid class spec"));
    let big = qlearn(&["learn", "--class", "rand:n=4,size=30,seed=1"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&big.stderr).contains("too large"));
    assert_eq!(qlearn(&["partition", "--class", "delta:n=3"]).status.code(), Some(2));
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"class": "delta:n=3", "trials": 8, "seed": 5, "learner": "halving"}"#).unwrap();
    let out = qlearn(&["learn", "--config", config.to_str().unwrap(), "--trials", "16"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("learn,delta:n=3,8,3,1/8,halving,16,1.0,"));
}

#[test]
fn class_and_partition_files() {
    let dir = tempfile::tempdir().unwrap();
    let class_path = dir.path().join("class.json");
    let class = zoo::random_class(3, 7, 21).unwrap();
    formats::write_class(&class_path, &class).unwrap();
    let memo_path = dir.path().join("partition.json");
    let spec = format!("file:{}", class_path.display());
    let out = qlearn(&["partition", "--class", &spec, "--k", "3", "--partition-out", memo_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (p, memo) = formats::read_partition(&memo_path).unwrap();
    assert_eq!(p.len(), 3);
    assert!(!memo.is_empty());
    assert_eq!(formats::read_class(&class_path).unwrap(), class);
}

#[test]
fn pac_formula_table() {
    let out = qlearn(&["pac-formulas"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("formula_id,params,closed_form,numeric,abs_err,pass\n"));
}
