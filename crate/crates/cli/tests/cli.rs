use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const LOB: &str = "<>([]p & ~p) | []p";

fn glc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glc"))
        .args(args)
        .env_remove("GLC_BUDGET")
        .output()
        .expect("glc runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_emits_checkable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("lob.json");
    let out = glc(&[
        "prove",
        LOB,
        "--calculus",
        "circ",
        "--emit-proof",
        path_str(&cert),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "provable");
    assert_eq!(v["stats"]["backlinks"], 1);

    let out = glc(&["check", path_str(&cert)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["verdict"], "accept");
}

#[test]
fn prove_in_glseq() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("k.json");
    let out = glc(&[
        "prove",
        "[](p -> q) -> ([]p -> []q)",
        "--calculus",
        "seq",
        "--emit-proof",
        path_str(&cert),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"glseq\""));
    assert_eq!(code(&glc(&["check", path_str(&cert)])), 0);
}

#[test]
fn unprovable_is_negative() {
    let out = glc(&["prove", "p"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["verdict"], "not-provable");
}

#[test]
fn sequent_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("seq.txt");
    std::fs::write(&input, "~p, p | q\n").unwrap();
    let out = glc(&["prove", "--file", path_str(&input)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(code(&glc(&["prove", "p &"])), 2);
    assert_eq!(code(&glc(&["prove"])), 2);
    assert_eq!(code(&glc(&["frobnicate"])), 2);
    assert_eq!(code(&glc(&["oracle", "p", "--max-worlds", "0"])), 2);
    assert_eq!(code(&glc(&["fixpoint", "p", "p | []p"])), 2);
    assert_eq!(code(&glc(&["fixpoint", "T", "[]p"])), 2);
    assert_eq!(code(&glc(&["check", "/nonexistent/cert.json"])), 2);
}

#[test]
fn check_rejects_tampered_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    assert_eq!(
        code(&glc(&["prove", LOB, "--emit-proof", path_str(&cert)])),
        0
    );
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["backlinks"] = serde_json::json!({});
    std::fs::write(&cert, v.to_string()).unwrap();
    let out = glc(&["check", path_str(&cert)]);
    assert_eq!(code(&out), 1);
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verdict"], "reject");
    assert_eq!(verdict["reason"], "dangling-leaf");

    std::fs::write(&cert, "{ not json").unwrap();
    assert_eq!(code(&glc(&["check", path_str(&cert)])), 2);
}

#[test]
fn budget_abort() {
    let out = glc(&["prove", LOB, "--budget", "2"]);
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_glc"))
        .args(["prove", LOB])
        .env("GLC_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    // The flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_glc"))
        .args(["prove", LOB, "--budget", "1000"])
        .env("GLC_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn interpolate_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = glc(&[
        "interpolate",
        "p & q",
        "p | r",
        "--report",
        path_str(&report),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "accept");
    assert_eq!(v["interpolant"], "p");
    assert_eq!(v["vocab"]["c"], serde_json::json!(["p"]));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved, v);

    // Both emitted proofs are checkable certificates.
    for side in ["left_proof", "right_proof"] {
        let path = dir.path().join(format!("{side}.json"));
        std::fs::write(&path, v[side].to_string()).unwrap();
        assert_eq!(code(&glc(&["check", path_str(&path)])), 0);
    }
}

#[test]
fn interpolate_from_file_and_negative() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.txt");
    std::fs::write(&input, "[](p & q)\n\n[]p | <>s\n").unwrap();
    let out = glc(&["interpolate", "--file", path_str(&input)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["vocab"]["c"], serde_json::json!(["p°"]));

    let out = glc(&["interpolate", "p", "q"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["verdict"], "not-provable");
}

#[test]
fn fixpoint_output() {
    let out = glc(&["fixpoint", "p", "[]~p"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["fixpoint"], "[]F");
    assert_eq!(v["verdict"], "certified");
}

#[test]
fn oracle_verdicts() {
    let out = glc(&["oracle", "[]p -> p", "--max-worlds", "1"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["countermodel"]["worlds"], 1);
    assert_eq!(v["countermodel"]["failWorld"], 0);

    let out = glc(&["oracle", LOB, "--max-worlds", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["verdict"], "valid-to-bound");
}

#[test]
fn corpus_is_deterministic() {
    let args = ["corpus", "--seed", "7", "--count", "25", "--verdicts"];
    let first = glc(&args);
    let second = glc(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let lines: Vec<Value> = first
        .stdout
        .split(|b| *b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 25);
    assert_eq!(lines[3]["index"], 3);
    assert!(lines.iter().all(|l| l["verdict"].is_string()));
}

#[test]
fn selftest_passes() {
    let out = glc(&[
        "selftest",
        "--seed",
        "3",
        "--count",
        "100",
        "--instances",
        "30",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["suites"].as_array().unwrap().len(), 7);
}

#[test]
fn stats_only_touch_stderr() {
    let plain = glc(&["prove", LOB]);
    let timed = glc(&["--stats", "prove", LOB]);
    assert_eq!(plain.stdout, timed.stdout);
    assert!(String::from_utf8_lossy(&timed.stderr).contains("elapsed"));
}
