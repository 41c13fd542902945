use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchstick"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    let s = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(s.lines().next().unwrap_or("")).unwrap_or_else(|e| panic!("{e}: {s}"))
}

fn tmp(name: &str, content: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn bound() {
    let out = run(&["bound", "7"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "12");
    assert_eq!(json(&run(&["bound", "4"])), 5);
    assert_eq!(run(&["bound", "0"]).status.code(), Some(2));
}

#[test]
fn build_pipes_into_stats() {
    let built = run(&["build", "hexagon", "1"]);
    assert!(built.status.success());
    let stats = run_stdin(&["stats", "-"], &built.stdout);
    assert!(stats.status.success(), "{}", String::from_utf8_lossy(&stats.stderr));
    let v = json(&stats);
    assert_eq!((v["e"].as_u64(), v["F"].as_u64(), v["b"].as_u64()), (Some(12), Some(0), Some(6)));
    assert_eq!(v["harborth"]["tight"], true);
}

#[test]
fn extremal_round_trip() {
    for n in ["19", "37", "50"] {
        let built = run(&["build", "extremal", n]);
        let v = json(&run_stdin(&["stats", "-"], &built.stdout));
        let n: u64 = n.parse().unwrap();
        assert_eq!(v["n"].as_u64(), Some(n));
        assert_eq!(v["e"], v["harborth"]["bound"]);
        let valid = run_stdin(&["validate", "-", "--penny"], &built.stdout);
        assert!(valid.status.success());
        assert_eq!(json(&valid)["ok"], true);
    }
}

#[test]
fn random_build_is_seeded() {
    let a = run(&["build", "random", "30", "--seed", "5", "--two-connected"]);
    let b = run(&["build", "random", "30", "--seed", "5", "--two-connected"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(run_stdin(&["trace", "-"], &a.stdout).status.success());
}

#[test]
fn validation_failure_exits_1() {
    let g = tmp("long_edge.json", r#"{"vertices":[{"id":0,"free":[0,0]},{"id":1,"free":[2,0]}],"edges":[[0,1]]}"#);
    let out = run(&["validate", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);
    assert_eq!(run(&["stats", g.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run_stdin(&["stats", "-"], b"not json").status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bound"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "/nonexistent/graph.json"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "max-edges", "13"]).status.code(), Some(2));
}

#[test]
fn decompose_and_trace() {
    let built = run(&["build", "hexagon", "2"]);
    let v = json(&run_stdin(&["decompose", "-"], &built.stdout));
    assert_eq!(v["components"].as_array().unwrap().len(), 1);
    assert_eq!(v["components"][0]["n"], 19);
    assert_eq!(v["components"][0]["b"], 12);
    assert_eq!(v["b_star"], 0);
    let t = json(&run_stdin(&["trace", "-"], &built.stdout));
    assert_eq!(t["assumption1"], false);
    assert!(t["records"].as_array().unwrap().iter().all(|r| r["claim"].is_string() && r["status"].is_string()));
}

#[test]
fn iso_records() {
    let s = 3f64.sqrt() / 2.0;
    let hex: Vec<[f64; 2]> = vec![[1.0, 0.0], [0.5, s], [-0.5, s], [-1.0, 0.0], [-0.5, -s], [0.5, -s]];
    let p = tmp("hexagon.json", &serde_json::json!({ "vertices": hex }).to_string());
    let out = run(&["iso", "hex", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["lhs"].as_f64().unwrap() - 36.0).abs() < 1e-9 && (v["rhs"].as_f64().unwrap() - 36.0).abs() < 1e-9);
    assert_eq!(v["holds"], true);
    let c = json(&run(&["iso", "classic", p.to_str().unwrap()]));
    assert!(c["lhs"].as_f64().unwrap() < c["rhs"].as_f64().unwrap());
    let sq = tmp("square.json", r#"{"vertices":[[0,0],[1,0],[1,1],[0,1]]}"#);
    let out = run(&["iso", "hex", sq.to_str().unwrap(), "--theta0", "0", "--chain"]);
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!((lines[0]["b_star"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(lines[1]["holds"], true);
    let bad = tmp("bowtie.json", r#"{"vertices":[[0,0],[1,1],[1,0],[0,1]]}"#);
    assert_eq!(run(&["iso", "classic", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn oracles() {
    let v = json(&run(&["oracle", "max-edges", "4"]));
    assert_eq!((v["max_e"].as_u64(), v["bound"].as_u64()), (Some(5), Some(5)));
    assert_eq!(v["witness_points"].as_array().unwrap().len(), 4);
    let l = tmp("l_shape.json", r#"{"vertices":[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}"#);
    let v = json(&run(&["oracle", "rearrange", l.to_str().unwrap()]));
    assert!((v["max_area"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert!((v["area"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn threads_variable() {
    let out = bin().args(["oracle", "max-edges", "6"]).env("MATCHSTICK_THREADS", "2").output().unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["max_e"], 9);
    let out = bin().args(["bound", "3"]).env("MATCHSTICK_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_writes_svg() {
    let built = run(&["build", "hexagon", "1"]);
    let g = tmp("patch.json", &String::from_utf8_lossy(&built.stdout));
    let svg = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("patch.svg");
    let out = run(&["render", g.to_str().unwrap(), "-o", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.contains("<svg"));
    assert_eq!(text.matches("<line").count(), 12);
}
