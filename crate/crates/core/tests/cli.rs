// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3-rdp")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn scratch(name: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("k3-rdp-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_file(&p);
    p
}

#[test]
fn nk0_verdicts() {
    let o = run(&["nk0", "D4+D4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], true);
    let o = run(&["nk0", "7A2+3A1"]);
    assert_eq!(json(&o)["verdict"], false);
}

#[test]
fn nk_and_tsv() {
    assert_eq!(json(&run(&["nk", "5", "10", "A2"]))["verdict"], true);
    assert_eq!(json(&run(&["nk", "7", "10", "A2"]))["verdict"], false);
    let o = run(&["--format", "tsv", "nk", "29", "10", "2A1"]);
    let line = String::from_utf8(o.stdout).unwrap();
    let cols: Vec<&str> = line.trim_end().split('\t').collect();
    assert_eq!(cols[..2], ["nk 29 10 2A1", "false"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nk0", "Q3"]).status.code(), Some(1));
    assert_eq!(run(&["nk", "3", "1", "A2"]).status.code(), Some(3));
    assert_eq!(run(&["nk", "4", "1", "A2"]).status.code(), Some(3));
    assert_eq!(run(&["nk0", "20A1"]).status.code(), Some(3));
    assert_eq!(run(&["--budget-seconds", "0", "nk0", "16A1+A2"]).status.code(), Some(2));
}

#[test]
fn residues_and_ssred() {
    let v = json(&run(&["residues", "2A1", "10"]));
    assert_eq!(v["verdict"]["modulus"], 16);
    assert_eq!(v["verdict"]["residues"], serde_json::json!([3, 7, 11, 15]));
    assert_eq!(json(&run(&["ssred", "4", "7"]))["verdict"], true);
    assert_eq!(json(&run(&["ssred", "4", "5"]))["verdict"], false);
}

#[test]
fn emb_from_gram_file() {
    let g = scratch("gram.txt");
    std::fs::write(&g, "-2 1 0\n1 -2 1\n0 1 -2\n").unwrap();
    let o = run(&["emb", "--gram", g.to_str().unwrap()]);
    assert_eq!(json(&o)["verdict"], true);
    let o = run(&["emb", "--gram", g.to_str().unwrap(), "--p", "5", "--sigma", "10"]);
    assert_eq!(json(&o)["verdict"], false);
    std::fs::remove_file(g).unwrap();
}

#[test]
fn cache_round_trip() {
    let c = scratch("cache.jsonl");
    let cs = c.to_str().unwrap();
    let first = run(&["--cache", cs, "nk0", "E6+A2"]);
    let second = run(&["--cache", cs, "nk0", "E6+A2"]);
    assert_eq!(first.stdout, second.stdout);
    let text = std::fs::read_to_string(&c).unwrap();
    assert_eq!(text.lines().count(), 1);
    let rec: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(rec["type"], "E6+A2");
    assert_eq!(rec["nk0"], true);

    std::fs::write(&c, text.replace("\"nk0\":true", "\"nk0\":false") + &text).unwrap();
    assert_eq!(run(&["--cache", cs, "nk0", "E6+A2"]).status.code(), Some(4));
    std::fs::remove_file(c).unwrap();
}

#[test]
fn scan_small_ranks() {
    let v = json(&run(&["scan", "8"]));
    assert_eq!(v["verdict"], serde_json::json!([]));
}
