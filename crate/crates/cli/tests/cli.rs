use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn pebble(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pebble"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_pipes_into_solve() {
    let g = pebble(&["gen", "pyramid", "2"], None);
    assert!(g.status.success());
    let s = pebble(&["solve", "-", "--flavor", "reversible"], Some(&String::from_utf8(g.stdout).unwrap()));
    assert!(s.status.success());
    let v = json_out(&s);
    assert_eq!(v["price"], 5);
    assert_eq!(v["flavor"], "reversible");
    assert_eq!(v["goal"], "persistent");
}

#[test]
fn solve_flavors_and_goals() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.txt");
    assert!(pebble(&["gen", "xmas", "4", "--out", path_str(&f)], None).status.success());
    assert!(dir.path().join("x.txt.anchors").exists());
    for (flavor, goal, want) in [("reversible", "visiting", 4), ("reversible", "persistent", 4), ("dt", "persistent", 4)] {
        let o = pebble(&["solve", path_str(&f), "--flavor", flavor, "--goal", goal], None);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json_out(&o)["price"], want, "{flavor} {goal}");
    }
    let p = dir.path().join("p.txt");
    assert!(pebble(&["gen", "pyramid", "3", "--out", path_str(&p)], None).status.success());
    let o = pebble(&["solve", path_str(&p), "--flavor", "standard", "--threads", "1"], None);
    assert_eq!(json_out(&o)["price"], 5);
}

#[test]
fn cap_and_usage_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.txt");
    assert!(pebble(&["gen", "pyramid", "3", "--out", path_str(&p)], None).status.success());
    let o = pebble(&["solve", path_str(&p), "--cap", "4"], None);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json_out(&o)["lower_bound"], 5);
    let o = pebble(&["gen", "pyramid"], None);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("parameter"));
    assert_eq!(pebble(&["solve", path_str(&p), "--goal", "config"], None).status.code(), Some(2));
}

#[test]
fn strategy_output_validates() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let t = dir.path().join("t.txt");
    for (family, param, space) in [("pyramid", "3", 6), ("tree", "3", 6), ("xmas", "3", 3), ("path", "6", 4)] {
        assert!(pebble(&["gen", family, param, "--out", path_str(&g)], None).status.success());
        let o = pebble(&["strategy", family, param, "--out", path_str(&t)], None);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json_out(&o)["space"], space);
        let v = pebble(&["validate", path_str(&g), path_str(&t)], None);
        assert!(v.status.success());
        let v = json_out(&v);
        assert_eq!(v["space"], space, "{family}");
        assert_eq!(v["goal"], "persistent");
    }
}

#[test]
fn validate_reports_first_illegal_move() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let t = dir.path().join("t.txt");
    assert!(pebble(&["gen", "pyramid", "1", "--out", path_str(&g)], None).status.success());
    std::fs::write(&t, "trace reversible\n+0\n+2\n").unwrap();
    let o = pebble(&["validate", path_str(&g), path_str(&t)], None);
    assert_eq!(o.status.code(), Some(3));
    let v = json_out(&o);
    assert_eq!(v["valid"], false);
    assert_eq!(v["index"], 1);
}

#[test]
fn reduce_tiny_formula() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("phi.qdimacs");
    let out = dir.path().join("red.txt");
    std::fs::write(&f, "p cnf 3 1\ne 1 2 3 0\n1 2 3 0\n").unwrap();
    let o = pebble(&["reduce", path_str(&f), "--out", path_str(&out)], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["true"], true);
    assert_eq!(v["budget"], 18);
    assert_eq!(v["max_fanin"], 2);
    assert_eq!(v["single_sink"], true);
    assert_eq!(v["clause_tolls"], serde_json::json!([2]));
    assert!(out.exists());
    let s = pebble(&["strategy", "qbf", path_str(&f), "--summary"], None);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    assert_eq!(json_out(&s)["space"], 18);
    let big = pebble(&["reduce", path_str(&f), "--amplify", "3"], None);
    assert_eq!(big.status.code(), Some(2));
}

#[test]
fn play_games() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    assert!(pebble(&["gen", "pyramid", "2", "--out", path_str(&g)], None).status.success());
    let o = pebble(&["play", path_str(&g)], None);
    assert_eq!(json_out(&o)["rounds"], 5);
    let t = dir.path().join("t.txt");
    assert!(pebble(&["strategy", "pyramid-std", "2", "--out", path_str(&t)], None).status.success());
    let spec = format!("bisection:{}", path_str(&t));
    let o = pebble(&["play", path_str(&g), "--pebbler", &spec, "--challenger", "exhaustive"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json_out(&o)["rounds"].as_u64().unwrap() >= 5);
    let r = dir.path().join("r.txt");
    assert!(pebble(&["gen", "road", "2", "4", "--out", path_str(&r)], None).status.success());
    let o = pebble(&["play", path_str(&r), "--challenger", "road"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tree = dir.path().join("tree.txt");
    assert!(pebble(&["gen", "tree", "2", "--out", path_str(&tree)], None).status.success());
    let o = pebble(&["play", path_str(&tree), "--challenger", "road"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    assert!(pebble(&["gen", "turnpike", "1", "--out", path_str(&g)], None).status.success());
    let text = pebble(&["export", path_str(&g)], None);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), std::fs::read_to_string(&g).unwrap());
    let dot = String::from_utf8(pebble(&["export", path_str(&g), "--dot"], None).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\\na"), "{dot}");
}
