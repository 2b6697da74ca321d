use std::process::Command;

use circodes::cli::{run, Outcome};
use serde_json::Value;

const TWO_SERIES: &str = "90:1,5,6,7,83,84,85,89";

fn call(args: &[&str]) -> Outcome {
    run(std::iter::once("circodes").chain(args.iter().copied()).map(std::ffi::OsString::from))
}

fn json(args: &[&str]) -> Value {
    let out = call(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn check_reports_existence() {
    let v = json(&["check", "--set", TWO_SERIES, "--p", "3"]);
    assert_eq!(v["exists"], true);
    assert_eq!(v["l"], 2);
    assert_eq!(v["series"]["subgroups"], serde_json::json!([18, 6, 3, 1]));
}

#[test]
fn negative_answer_exits_one() {
    let out = call(&["check", "--set", "27:1,2,3,9,18,24,25,26", "--p", "3"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["exists"], false);
}

#[test]
fn bad_input_exits_two() {
    let out = call(&["check", "--set", "90:1,x", "--p", "3"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("parse error at byte 5"), "{}", out.stderr);
    assert_eq!(call(&["check", "--set", "90:1,2,3", "--p", "3"]).code, 2);
    assert_eq!(call(&["count", "--n", "20", "--p", "3", "--l", "2"]).code, 2);
    assert_eq!(call(&["no-such-command"]).code, 2);
    assert_eq!(call(&["--help"]).code, 0);
}

#[test]
fn count_with_oracle() {
    let v = json(&["count", "--n", "45", "--p", "3", "--l", "2", "--oracle"]);
    assert_eq!(v["formula"], "624");
    assert_eq!(v["oracle"], "624");
    assert_eq!(v["match"], true);
}

#[test]
fn streamed_codes() {
    let out = call(&["enumerate-codes", "--set", TWO_SERIES, "--p", "3", "--constructed", "--stream"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.lines().collect::<Vec<_>>(),
        [
            "90:0,3,18,21,36,39,54,57,72,75",
            "90:0,9,18,27,36,45,54,63,72,81",
            "90:0,15,18,33,36,51,54,69,72,87",
        ]
    );
}

#[test]
fn lift_and_project_round_trip() {
    let out = call(&["lift", "--set", "9:0,1,8", "--by", "2", "--kind", "f"]);
    assert_eq!(out.stdout, "18:0,1,17\n18:0,8,10\n");
    for line in out.stdout.lines() {
        let back = call(&["project", "--set", line, "--by", "9"]);
        assert_eq!(back.stdout.trim(), "9:0,1,8");
    }
}

#[test]
fn tiling_check() {
    let threes: Vec<String> = (0..90).step_by(3).map(|x| x.to_string()).collect();
    let b = format!("90:{}", threes.join(","));
    let v = json(&["verify-tiling", "--set", "90:0,1,89", "--set", &b]);
    assert_eq!(v["tiling"], true);
    let out = call(&["verify-tiling", "--set", "90:0,1,2", "--set", "90:0,1,2"]);
    assert_eq!(out.code, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["family", "--p", "3", "--l-seq", "2", "--m-seq", "2"];
    let first = call(&args);
    assert_eq!(first.code, 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(call(&args).stdout, first.stdout);
    let threaded = ["--threads", "2"].iter().chain(args.iter()).copied().collect::<Vec<_>>();
    assert_eq!(call(&threaded).stdout, first.stdout);
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_circodes");
    let args = ["lower-bound", "--set", TWO_SERIES, "--p", "3"];
    let out = Command::new(bin).args(args).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), call(&args).stdout);
    let bad = Command::new(bin).args(["count", "--n", "x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
