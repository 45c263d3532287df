use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn tensorium(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorium"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn quartic() -> Value {
    json!({
        "vars": ["x", "y", "z", "w"],
        "degree": 4,
        "terms": [
            [[4, 0, 0, 0], "1"],
            [[0, 4, 0, 0], "-3"],
            [[2, 1, 1, 0], "12"],
            [[1, 2, 0, 1], "12"]
        ]
    })
}

#[test]
fn flatten_rank_of_quartic() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "q.json", &quartic());
    let out = tensorium(&["flatten", "--tensor", t.to_str().unwrap(), "--modes", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 6);
    assert_eq!(v["rows"], 16);
    assert_eq!(v["cols"], 16);

    let out = tensorium(&[
        "flatten",
        "--tensor",
        t.to_str().unwrap(),
        "--modes",
        "1,2",
        "--modular",
        "1000003",
    ]);
    assert_eq!(stdout_json(&out)["rank"], 6);
}

#[test]
fn wset_counts() {
    let out = tensorium(&["wset", "build", "--order", "6", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["counts"], json!({ "w1": 2576, "w": 5152 }));

    let v = stdout_json(&tensorium(&["wset", "build", "--order", "4"]));
    assert_eq!(v["counts"], json!({ "w1": 95, "w": 190 }));
}

#[test]
fn worked_examples_verify() {
    let out = tensorium(&["verify", "examples"]);
    assert_eq!(out.status.code(), Some(0));
    let certs = stdout_json(&out);
    let certs = certs.as_array().unwrap();
    assert_eq!(certs.len(), 4);
    assert!(certs.iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn usage_errors_exit_2() {
    let out = tensorium(&["verify", "no-such-check"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "Usage");

    let out = tensorium(&["wset", "build", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "NTooSmall");

    let out = tensorium(&[
        "sylvester",
        "--drk-j",
        "2",
        "--drk-jc",
        "2",
        "--flat-rank",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    let a = tensorium(&["counterexample", "build", "--n", "7"]);
    let b = tensorium(&["counterexample", "build", "--n", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bound.json");
    let out = tensorium(&[
        "sylvester",
        "--drk-j",
        "9",
        "--drk-jc",
        "9",
        "--flat-rank",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lower_bound"], 12);
}

#[test]
fn counterexample_report_and_entry() {
    let out = tensorium(&[
        "counterexample",
        "build",
        "--n",
        "7",
        "--entry",
        "1,1,1,1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["dims"], 5180);
    assert_eq!(v["report"]["rank"], 30913);
    assert_eq!(v["entry"]["value"], "1/1");

    // Two adjoined indices in one entry: always zero.
    let out = tensorium(&[
        "counterexample",
        "build",
        "--n",
        "7",
        "--entry",
        "29,30,1,1,1,1",
    ]);
    assert_eq!(stdout_json(&out)["entry"]["value"], "0/1");
}

#[test]
fn negative_predicates_exit_1() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "q.json", &quartic());
    let dec = write(
        dir.path(),
        "d.json",
        &json!({ "degree": 4, "terms": [{ "coeff": "1", "vector": ["1", "0", "0", "0"] }] }),
    );
    let out = tensorium(&[
        "verify-decomp",
        "--decomp",
        dec.to_str().unwrap(),
        "--tensor",
        t.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
