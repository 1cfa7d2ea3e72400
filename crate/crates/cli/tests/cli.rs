use std::process::{Command, Output};

use serde_json::Value;
use transword::words::parse_word;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transword"))
        .args(args)
        .env_remove("TRANSWORD_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn inverse_pair_reduces_to_empty() {
    let (v, code) = json(&["reduce", "-e", "st(-,0,{sel(S1)(k)}) st(+,0,{sel(S1)(k)})", "--family", "k=2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "[]");
    assert_eq!(v["input"], "st(-,0,{sel(S1)(k)}) st(+,0,{sel(S1)(k)})");
}

#[test]
fn separation_demo() {
    let out = run(&["demo-separation", "-k", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: 256/256 patterns distinct"));
}

#[test]
fn telescope_projection() {
    let (v, code) = json(&["project", "-e", "st(+,0,{a(k) a(k+1)^-1})", "-N", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "[a0]");
}

#[test]
fn exit_codes() {
    let bad = run(&["reduce", "-e", "st(+,0,{a(k)"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("1:"));
    let partial = run(&["apply-ff", "-e", "[a0]", "--family", "k=2", "-f", "f{S1->T}"]);
    assert_eq!(partial.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&partial.stderr).contains("S2"));
    assert_eq!(run(&["demo-abelian", "-k", "3", "-p", "4"]).status.code(), Some(1));
    assert_eq!(run(&["embedding-check", "-s", "sub{tail: a(n) -> [a(0)]}"]).status.code(), Some(1));
    assert_eq!(run(&["decompose", "-e", "[a0]", "--family", "k=0"]).status.code(), Some(1));
    let seeded = Command::new(env!("CARGO_BIN_EXE_transword"))
        .args(["demo-abelian", "-k", "2"])
        .env("TRANSWORD_SEED", "nope")
        .output()
        .unwrap();
    assert_eq!(seeded.status.code(), Some(2));
}

#[test]
fn results_reparse() {
    let cases: [&[&str]; 4] = [
        &["reduce", "-e", "[a0 b1] st(+,2,{a(k) c(k)}) st(-,2,{a(k) c(k)}) [a3]"],
        &["reduce", "-e", "st(+,0,{a(k) a(k+1)^-1}) st(-,1,{a(2k)})"],
        &["apply-endo", "-e", "[a1] st(+,0,{a(k)})", "-s", "sub{tail: a(n) -> [a(2n) a(2n+1)]}"],
        &["hag", "-e", "st(+,3,{a(k)}) [b1] st(-,0,{b(k)})"],
    ];
    for args in cases {
        let (v, code) = json(args);
        assert_eq!(code, 0, "{args:?}");
        let text = v["result"].as_str().or(v["representative"].as_str()).unwrap();
        let back = parse_word(text).unwrap();
        if args[0] == "reduce" {
            let input = parse_word(args[2]).unwrap();
            assert!(back.heg_equal(&input), "{text}");
        } else {
            assert_eq!(back.to_string(), text);
        }
    }
}

#[test]
fn deterministic_output() {
    for args in [
        &["demo-abelian", "-k", "4", "-p", "3"][..],
        &["demo-separation", "-k", "5", "--format", "json"],
        &["embedding-check", "-N", "2", "--len", "4"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn decompose_and_apply() {
    let (v, code) = json(&["decompose", "-e", "[a9 b0 b1] st(+,2,{sel(S1)(k)}) [a9]", "--family", "k=2"]);
    assert_eq!(code, 0);
    let tags: Vec<&str> = v["pieces"].as_array().unwrap().iter().map(|p| p["tag"].as_str().unwrap()).collect();
    assert_eq!(tags, ["plain", "U(S1,0)", "plain"]);
    let (v, code) = json(&["apply-ff", "-e", "st(+,0,{sel(S1)(k)})", "--family", "k=2", "-f", "f{S1->T, S2->S2}"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "st(+,0,{a(k)})");
    let (v, _) = json(&["apply-endo", "-e", "st(+,0,{a(k)})", "-s", "sub{tail: a(n) -> [a(n) a(n+1)^-1]}", "-N", "9"]);
    assert_eq!(v["result"], "[a0]");
}
