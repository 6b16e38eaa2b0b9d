use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orient-nt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", p.to_str().unwrap()]);
    let o = run(&all);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn orient_then_verify_random() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "rand_n50.pg", &["-n", "50", "--seed", "4", "--bias", "0.5"]);
    let o = run(&["orient", s(&g)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    let d: u32 = report
        .lines()
        .next()
        .unwrap()
        .strip_prefix("diameter=")
        .unwrap()
        .parse()
        .unwrap();
    assert!(d <= 25);
    assert!(report.contains("bound=25"));
    let or = dir.path().join("rand_n50.or");
    let v = run(&["verify", s(&g), s(&or)]);
    assert!(v.status.success(), "{}", stderr(&v));
    assert!(stdout(&v).contains("strong=true"));
}

#[test]
fn k4_needs_allow_exception() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "k4.pg", &["--family", "k4", "-n", "4"]);
    let o = run(&["orient", s(&g), "--allow-exception"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    assert!(
        r.contains("diameter=3") && r.contains("bound=2") && r.contains("exception=true"),
        "{r}"
    );
    let o = run(&["orient", s(&g)]);
    assert_eq!(o.status.code(), Some(6));
}

#[test]
fn malformed_input_reports_line() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.pg");
    fs::write(&p, "3\n1: 2 3\n2: 3 x\n").unwrap();
    let o = run(&["orient", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn not_a_near_triangulation() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("c4.pg");
    // chordless 4-cycle: the bounded face is a square
    fs::write(&p, "4\n1: 2 4\n2: 3 1\n3: 4 2\n4: 1 3\n").unwrap();
    let o = run(&["orient", s(&p)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn exact_values() {
    let dir = TempDir::new().unwrap();
    let t = generate(dir.path(), "triangle.pg", &["--family", "triangle", "-n", "3"]);
    let o = run(&["exact", s(&t)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("2"));
    let w = generate(dir.path(), "w5.pg", &["--family", "wheel", "-n", "6"]);
    let o = run(&["exact", s(&w)]);
    assert_eq!(stdout(&o).lines().next(), Some("4"));
    let k = generate(dir.path(), "k4.pg", &["--family", "k4", "-n", "4"]);
    let o = run(&["exact", s(&k), "--anchor", "1", "--anchor-bound", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"], 3);
    assert_eq!(v["anchor_ecc"], 2);
}

#[test]
fn exact_budget_exhaustion() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "big.pg", &["-n", "40", "--seed", "1", "--bias", "0.5"]);
    let o = run(&["exact", s(&g), "--budget-nodes", "50"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("budget exhausted"));
}

#[test]
fn census_small() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let o = run(&["census", "--nmax", "4", "-o", s(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("total exceptions: 2"));
    assert!(out.join("census.tsv").exists());
    let o = run(&["census", "--nmax", "3"]);
    assert!(stdout(&o).contains("total exceptions: 0"));
}

#[test]
fn census_eight_and_catalog() {
    let dir = TempDir::new().unwrap();
    let cat = dir.path().join("exceptions.cat");
    let o = bin()
        .args(["census", "--nmax", "8", "--rebuild-catalog"])
        .env("ORIENT_NT_CACHE", &cat)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("total exceptions: 7"));
    assert!(fs::read_to_string(&cat).unwrap().contains("entry W5"));
    // the cached catalog is used by later runs
    let k = generate(dir.path(), "k4.pg", &["--family", "k4", "-n", "4"]);
    let o = bin()
        .args(["orient", s(&k), "--allow-exception"])
        .env("ORIENT_NT_CACHE", &cat)
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn verify_names_sink_and_missing_edge() {
    let dir = TempDir::new().unwrap();
    let t = generate(dir.path(), "triangle.pg", &["--family", "triangle", "-n", "3"]);
    let sink = dir.path().join("sink.or");
    fs::write(&sink, "1 2\n3 2\n1 3\n").unwrap();
    let o = run(&["verify", s(&t), s(&sink)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("vertex 2 is a sink"), "{}", stderr(&o));
    let partial = dir.path().join("partial.or");
    fs::write(&partial, "1 2\n2 3\n").unwrap();
    let o = run(&["verify", s(&t), s(&partial)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1-3"), "{}", stderr(&o));
}

#[test]
fn json_and_seed_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "g.pg", &["-n", "30", "--seed", "9", "--bias", "0.3"]);
    let a = run(&["orient", s(&g), "--json", "--seed", "5"]);
    let b = run(&["orient", s(&g), "--json", "--seed", "5"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    assert_eq!(v["bound"], 15);
    assert_eq!(v["strong"], true);
    let dot = dir.path().join("g.dot");
    let o = run(&["orient", s(&g), "--dot", s(&dot)]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

#[test]
fn batch_orient_with_jobs() {
    let dir = TempDir::new().unwrap();
    let a = generate(dir.path(), "a.pg", &["-n", "20", "--seed", "1"]);
    let b = generate(dir.path(), "b.pg", &["-n", "25", "--seed", "2"]);
    let o = run(&["orient", s(&a), s(&b), "--jobs", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("a.or").exists() && dir.path().join("b.or").exists());
    assert_eq!(stdout(&o).matches("== ").count(), 2);
}
