use std::process::{Command, Output};

use serde_json::Value;

fn pframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pframe")).args(args).output().expect("run pframe")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn energy_exit_codes() {
    let ok = pframe(&["energy", "--config", "icosahedron", "--p", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!((json(&ok)["value"].as_f64().unwrap() - 0.241202265916660).abs() < 1e-12);
    let off = pframe(&["energy", "--config", "icosahedron", "--p", "3", "--target", "0.3"]);
    assert_eq!(off.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_64() {
    for args in [&["bogus"][..], &["energy", "--config", "no-such-thing", "--p", "3"], &["energy", "--p", "3"], &["--format", "xml", "catalog"]] {
        let out = pframe(args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn certificate_verdicts() {
    assert_eq!(pframe(&["certify", "--config", "e8-roots", "--p", "5"]).status.code(), Some(0));
    assert_eq!(pframe(&["certify", "--config", "24-cell", "--p", "5"]).status.code(), Some(1));
    assert_eq!(pframe(&["certify-600cell", "--range", "8", "10"]).status.code(), Some(0));
    assert_eq!(pframe(&["causal", "--case", "icosahedron"]).status.code(), Some(0));
}

#[test]
fn emitted_certificate_reverifies() {
    let dir = std::env::temp_dir().join(format!("pframe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ico.json");
    let p = path.to_str().unwrap();
    assert_eq!(pframe(&["certify", "--config", "icosahedron", "--p", "3", "--emit", p]).status.code(), Some(0));
    assert_eq!(pframe(&["certify", "--cert", p]).status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap().replacen("\"p\": 3.0", "\"p\": 3.5", 1);
    std::fs::write(&path, text).unwrap();
    assert_eq!(pframe(&["certify", "--cert", p]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn minimize_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let out = pframe(&["--format", "csv", "--seed", "11", "--threads", threads, "minimize", "--space", "rp:3", "--p", "3", "-N", "12", "--starts", "3"]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("2"));
    assert_eq!(one, run("1"));
}

#[test]
fn tables_pass() {
    let out = pframe(&["reproduce-tables", "real", "complex", "code85", "parameters"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
