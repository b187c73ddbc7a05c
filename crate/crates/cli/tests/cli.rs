use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../automata").join(name)
}

fn maxdelay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxdelay"))
        .args(args)
        .env_remove("MAXDELAY_BUDGET")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&maxdelay(&all))).unwrap()
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn member_on_r1() {
    let r1 = path("r1.ma");
    let text = stdout(&maxdelay(&["member", "--automaton", &r1, "--u", "", "--v", "a"]));
    assert!(text.starts_with("accepted"));
    assert!(text.contains("c        unbounded"));
    let report = json(&["member", "--automaton", &r1, "--u", "aaa", "--v", "ab"]);
    assert_eq!(report["results"]["verdict"], "rejected");
    assert_eq!(report["results"]["counters"][0]["bounded"], true);
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn classes_on_r1_echo_the_bound() {
    let report = json(&["classes", "--automaton", &path("r1.ma"), "--m", "1"]);
    let r = &report["results"];
    assert_eq!(r["bound"], "81");
    assert_eq!(r["complete"], true);
    assert!(r["count"].as_u64().unwrap() <= 81);
    assert_eq!(r["classes"][0]["representative"], "ε");
    let projected = json(&["classes", "--automaton", &path("echo.ma"), "--m", "1", "--projected"]);
    assert_eq!(projected["results"]["threshold"], 1);
}

#[test]
fn thresholds() {
    let report = json(&["threshold", "--automaton", &path("echo.ma"), "--m", "1"]);
    assert_eq!(report["results"]["threshold"], 1);
    let theorem = json(&["threshold", "--automaton", &path("r1.ma"), "--theorem"]);
    assert_eq!(theorem["results"]["tower"], "2·2^(2^8)");
    assert_eq!(theorem["results"]["bits"], 258);
    let refused = maxdelay(&["threshold", "--automaton", &path("block.ma"), "--theorem"]);
    assert_eq!(refused.status.code(), Some(4));
}

#[test]
fn simulate_replays_identically() {
    let args = [
        "simulate", "--game", "block", "--f", "2*", "--rounds", "500", "--o", "o-longest-block", "--i",
        "i-spoiler:5", "--seed", "7",
    ];
    let mut first = json(&args);
    let mut second = json(&args);
    first["elapsed_ms"] = Value::Null;
    second["elapsed_ms"] = Value::Null;
    assert_eq!(first, second);
    let r = &first["results"];
    assert_eq!(first["seed"], 7);
    assert_eq!(r["spans_longest_visible"], true);
    assert!(r["block_statistics"]["max_output"].as_u64().unwrap() >= 10);
    assert_eq!(r["lookahead_curve"].as_array().unwrap().len(), 500);
    assert_eq!(r["lookahead_curve"][3], 4);
}

#[test]
fn simulate_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    stdout(&maxdelay(&["simulate", "--f", "6,1*", "--rounds", "5", "--curve", csv.to_str().unwrap()]));
    assert_eq!(std::fs::read_to_string(csv).unwrap(), "round,lookahead\n0,5\n1,5\n2,5\n3,5\n4,5\n");
}

#[test]
fn class_game_script() {
    let report = json(&["class-game", "--automaton", &path("echo.ma"), "--moves", &path("echo.moves")]);
    let r = &report["results"];
    assert_eq!(r["rounds"].as_array().unwrap().len(), 4);
    assert_eq!(r["rounds"][1]["output_representative"], "x|x");
    assert_eq!(r["unbounded"], "indeterminate");
    assert_eq!(report["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn illegal_class_game_moves() {
    let dir = tempfile::tempdir().unwrap();
    let moves = dir.path().join("bad.moves");
    // at cap 1 the empty input word is alone in a finite class
    std::fs::write(&moves, "I 1 ε\n").unwrap();
    let out = maxdelay(&["class-game", "--automaton", &path("echo.ma"), "--moves", moves.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    std::fs::write(&moves, "I 0 x\nO x|x\n").unwrap();
    let out = maxdelay(&["class-game", "--automaton", &path("echo.ma"), "--moves", moves.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn reductions_write_max_automata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("no_b.ma");
    let o = out.to_str().unwrap();
    stdout(&maxdelay(&["reduce", "--kind", "safety", "--input", &path("no_b.safety"), "--output", o]));
    let accepted = |u: &str, v: &str| {
        json(&["member", "--automaton", o, "--u", u, "--v", v])["results"]["accepted"].as_bool().unwrap()
    };
    assert!(accepted("", "a"));
    assert!(!accepted("aab", "a"));
    let parity = json(&["reduce", "--kind", "parity", "--input", &path("inf_a.parity")]);
    assert_eq!(parity["results"]["accept"], "!bounded k0 | bounded k1");
    let lifted = json(&["reduce", "--kind", "diagonal", "--input", &path("r1.ma")]);
    assert_eq!(lifted["results"]["states"], 2);
}

#[test]
fn inspect_prints_tables() {
    let text = stdout(&maxdelay(&["inspect", "--automaton", &path("r1.ma"), "--word", "ab", "--m", "1"]));
    assert!(text.contains("A (infix trace):   c=1"));
    assert!(text.contains("B (suffix trace):  c=0"));
    assert!(text.contains("T (transfer):"));
}

#[test]
fn exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.ma");
    std::fs::write(&broken, "alphabet: a\nstates: q\n").unwrap();
    let code = |out: Output| out.status.code();
    assert_eq!(code(maxdelay(&["member", "--automaton", broken.to_str().unwrap(), "--v", "a"])), Some(3));
    assert_eq!(code(maxdelay(&["member", "--automaton", "/nonexistent.ma", "--v", "a"])), Some(6));
    assert_eq!(code(maxdelay(&["member", "--automaton", &path("r1.ma"), "--v", "z"])), Some(3));
    assert_eq!(code(maxdelay(&["simulate", "--f", "0*"])), Some(3));
    assert_eq!(code(maxdelay(&["member"])), Some(2));
    let limited = |budget: &str| {
        Command::new(env!("CARGO_BIN_EXE_maxdelay"))
            .args(["classes", "--automaton", &path("r1.ma"), "--m", "2"])
            .env("MAXDELAY_BUDGET", budget)
            .output()
            .unwrap()
    };
    assert_eq!(code(limited("3")), Some(4));
    assert_eq!(code(limited("lots")), Some(2));
    assert_eq!(code(limited("100000")), Some(0));
}
