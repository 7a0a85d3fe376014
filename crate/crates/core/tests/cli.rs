use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turncost"))
        .args(args)
        .env_remove("TURNCOST_MAX_BITMASK")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_bowtie() {
    for method in ["auto", "oracle", "tsp", "tsp-contracted"] {
        let o = run(&["solve", s(&data("bowtie.eg")), "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        assert_eq!(stdout(&o), "2/1\n");
    }
    let o = run(&["solve", s(&data("bowtie.eg")), "--method", "zerocost"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "none\n");
}

#[test]
fn decide_exit_codes() {
    let bowtie = data("bowtie.eg");
    assert_eq!(run(&["decide", s(&bowtie), "--budget", "1/1"]).status.code(), Some(1));
    assert_eq!(run(&["decide", s(&bowtie), "--budget", "2/1"]).status.code(), Some(0));
    assert_eq!(run(&["decide", s(&bowtie), "--budget", "two"]).status.code(), Some(2));
}

#[test]
fn witness_verifies_and_renders() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("c.txt");
    let digon = data("digon.eg");
    let o = run(&["solve", s(&digon), "--circuit-out", s(&c)]);
    assert_eq!(stdout(&o), "5/6\n");
    let o = run(&["verify", s(&digon), s(&c)]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "5/6\n".to_string()));
    assert_eq!(run(&["verify", s(&digon), s(&c), "--budget", "1/2"]).status.code(), Some(1));
    let dot = stdout(&run(&["export-dot", s(&digon), "--circuit", s(&c)]));
    assert_eq!(dot.matches("dir=forward").count(), 2);

    fs::write(&c, "circuit broken\ne1.0 e1.1\n").unwrap();
    let o = run(&["verify", s(&digon), s(&c)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn gadget_pipeline() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.eg");
    let c = dir.path().join("c.txt");
    assert_eq!(run(&["gadget", s(&data("one_clause.cnf")), "-o", s(&g)]).status.code(), Some(0));
    let o = run(&["solve", s(&g), "--method", "zerocost", "--circuit-out", s(&c)]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "0/1\n".to_string()));
    let o = run(&["extract", s(&g), s(&c)]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    let value = |i: usize| lines[i].ends_with("=true");
    // 1 -2 3
    assert!(value(0) || !value(1) || value(2), "{lines:?}");

    let b = dir.path().join("b.eg");
    assert_eq!(run(&["blowup", s(&g), "-o", s(&b)]).status.code(), Some(0));
    assert_eq!(run(&["solve", s(&b), "--method", "zerocost"]).status.code(), Some(0));
    // a tampered gadget is rejected
    let text = fs::read_to_string(&g).unwrap().replacen(" 1/1\n", " 2/1\n", 1);
    fs::write(&g, text).unwrap();
    assert_eq!(run(&["extract", s(&g), s(&c)]).status.code(), Some(2));
}

#[test]
fn atrail_and_reduce() {
    let o = run(&["atrail", s(&data("eight.eg"))]);
    assert_eq!(stdout(&o), "0/1\n");
    assert_eq!(run(&["atrail", s(&data("digon.eg"))]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let t = dir.path().join("t.tsp");
    assert_eq!(run(&["reduce", s(&data("digon.eg")), "-o", s(&t)]).status.code(), Some(0));
    let text = fs::read_to_string(&t).unwrap();
    assert!(text.starts_with("tsp digon\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("node ")).count(), 6);
}

#[test]
fn resource_limits_and_environment() {
    let bowtie = data("bowtie.eg");
    assert_eq!(run(&["solve", s(&bowtie), "--method", "tsp", "--max-bitmask", "5"]).status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_turncost"))
        .args(["solve", s(&bowtie), "--method", "tsp"])
        .env("TURNCOST_MAX_BITMASK", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["solve", s(&bowtie), "--method", "oracle", "--max-enumeration", "2"]).status.code(), Some(3));
    assert_eq!(run(&["solve", s(&bowtie), "--method", "zerocost", "--max-nodes", "0"]).status.code(), Some(3));
}

#[test]
fn input_errors() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.eg");
    fs::write(&bad, "vertex a\ncost a x.0 y.0 1/1\n").unwrap();
    let o = run(&["solve", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    fs::write(&bad, [0xff, 0xfe, 0x00]).unwrap();
    assert_eq!(run(&["solve", s(&bad)]).status.code(), Some(2));
    let odd = dir.path().join("odd.eg");
    fs::write(&odd, "vertex a\nvertex b\nedge e a b\n").unwrap();
    assert_eq!(run(&["solve", s(&odd)]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let outs: Vec<(String, Vec<u8>)> = (0..2)
        .map(|i| {
            let c = dir.path().join(format!("c{i}"));
            let o = run(&["solve", s(&data("bowtie.eg")), "--method", "tsp", "--circuit-out", s(&c)]);
            (stdout(&o), fs::read(&c).unwrap())
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn in_process_runner_matches_binary() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = turncost::cli::run_cli(["turncost", "solve", s(&data("bowtie.eg"))], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, b"2/1\n");
}
