use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn hforge(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hforge"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("HFORGE_CACHE")
        .output()
        .expect("run hforge")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn rebuilt() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["hodge", "--genus", "2", "--n", "1", "--rebuild"]);
    assert!(out.status.success(), "{}", stderr(&out));
    dir
}

#[test]
fn hurwitz_all_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["hurwitz", "--genus", "1", "--profile", "2", "--method", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let values: Vec<&str> = text.lines().filter(|l| l.contains("h = ")).collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|l| l.ends_with("h = 1/2")));
    assert_eq!(text.lines().last(), Some("AGREE"));
}

#[test]
fn hurwitz_closed_genus_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["hurwitz", "--genus", "0", "--profile", "1,1,1", "--method", "closed"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "h = 4");
}

#[test]
fn nonpositive_part_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["hurwitz", "--genus", "0", "--profile", "0,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn node_budget_exceeded_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["--node-budget", "10", "hurwitz", "--genus", "1", "--profile", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tau_values() {
    let dir = tempfile::tempdir().unwrap();
    let run = |m: &str, g: &str| stdout(&hforge(dir.path(), &["tau", "--genus", g, "--m", m])).trim().to_string();
    assert_eq!(run("4", "2"), "1/1152");
    assert_eq!(run("1,1,0,0,0", "0"), "2");
    assert_eq!(run("7", "3"), "1/82944");
    assert_eq!(run("1,1", "0"), "0 [vanishes: unstable]");
    assert_eq!(run("0,0,1", "0"), "0 [vanishes: dimension]");
    let out = hforge(dir.path(), &["tau", "--genus", "1", "--m", "-1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hodge_without_cache_asks_for_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["hodge", "--genus", "2", "--n", "1"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("--rebuild"));
}

#[test]
fn hodge_rebuild_then_read() {
    let dir = rebuilt();
    assert!(dir.path().join("hodge.hforge").exists());
    let out = hforge(dir.path(), &["hodge", "--genus", "2", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "i=0 m=4 1/1152\ni=1 m=3 1/480\ni=2 m=2 7/5760\n");

    let out = hforge(dir.path(), &["hurwitz", "--genus", "2", "--profile", "4", "--method", "all"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("elsv: h = 5824"));
}

#[test]
fn rebuild_is_deterministic() {
    let a = rebuilt();
    let b = rebuilt();
    let read = |d: &TempDir| fs::read_to_string(d.path().join("hodge.hforge")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn series_output() {
    let dir = rebuilt();
    let out = hforge(dir.path(), &["series", "--k", "1", "--order", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lhs: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("t^"))
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(lhs, ["1", "1/12", "1/240"]);
    assert!(text.contains("sin kernel: MATCH"));
    assert!(text.contains("sinh kernel: MISMATCH"));

    let text = stdout(&hforge(dir.path(), &["series", "--k", "2", "--order", "2"]));
    assert!(text.lines().any(|l| l.starts_with("t^2") && l.split_whitespace().nth(1) == Some("1/8")));
    assert!(text.contains("sin kernel: MATCH"));

    let text = stdout(&hforge(dir.path(), &["series", "--k", "1", "--order", "0"]));
    assert!(text.contains("sin kernel: MATCH") && text.contains("sinh kernel: MATCH"));
}

#[test]
fn threads_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hurwitz", "--genus", "1", "--profile", "1,2", "--oracle", "dfs"];
    let one = hforge(dir.path(), &[&["--threads", "1"], &args[..]].concat());
    let four = hforge(dir.path(), &[&["--threads", "4"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(stdout(&one), "h = 40\n");
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn verify_genus0_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = hforge(dir.path(), &["verify", "--suite", "genus0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL "));
}

#[test]
fn verify_series_passes_with_sin_kernel() {
    let dir = rebuilt();
    let out = hforge(dir.path(), &["verify", "--suite", "series"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS series k=1, sin kernel"));
}

#[test]
fn verify_flags_corrupted_cache() {
    let dir = rebuilt();
    let path = dir.path().join("hodge.hforge");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("HODGE 2 2 2 7/5760"));
    fs::write(&path, text.replace("HODGE 2 2 2 7/5760", "HODGE 2 2 2 7/5761")).unwrap();
    let out = hforge(dir.path(), &["verify", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(report.lines().any(|l| l.starts_with("FAIL") && l.contains("HODGE 2 2 2 7/5761")), "{report}");
}
