use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apartness")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_reports_apart_with_certificate() {
    let o = run(&["check", &fixture("sr.aut"), "0", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("APART"), "{out}");
    assert!(out.contains("in_b(c)"), "{out}");
}

#[test]
fn weak_flavor_identifies_the_same_pair() {
    let o = run(&["check", "--flavor", "weak", &fixture("sr.aut"), "0", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUIVALENT"));
}

#[test]
fn two_files_compare_initial_states() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.aut");
    let b = dir.path().join("b.aut");
    std::fs::write(&a, "des (0,2,3)\n(0,\"tau\",1)\n(1,\"a\",2)\n").unwrap();
    std::fs::write(&b, "des (0,1,2)\n(0,\"a\",1)\n").unwrap();
    let (a, b) = (a.display().to_string(), b.display().to_string());
    assert_eq!(run(&["check", &a, &b]).status.code(), Some(0));
    assert_eq!(run(&["check", "--flavor", "rooted-branching", &a, &b]).status.code(), Some(1));
}

#[test]
fn certificate_round_trips_through_verify() {
    let o = run(&["certificate", "--format", "json", &fixture("loops.aut"), "4", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let mut cert = tempfile::NamedTempFile::new().unwrap();
    cert.write_all(&o.stdout).unwrap();
    let path = cert.path().display().to_string();
    let ok = run(&["certificate", &fixture("loops.aut"), "--verify", &path]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert_eq!(stdout(&ok).trim(), "VALID");
    // The same tree is not a derivation for another system.
    let bad = run(&["certificate", &fixture("cycle.aut"), "--verify", &path]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("INVALID"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let o = run(&["certificate", "--format", "json", &fixture("sr.aut"), "0", "5"]);
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v["step"]["label"] = "d".into();
    let mut cert = tempfile::NamedTempFile::new().unwrap();
    cert.write_all(v.to_string().as_bytes()).unwrap();
    let bad = run(&["certificate", &fixture("sr.aut"), "--verify", &cert.path().display().to_string()]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
}

#[test]
fn max_depth_limits_the_search() {
    let o = run(&["check", "--max-depth", "3", &fixture("loops.aut"), "4", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no certificate within depth 3"));
}

#[test]
fn oracle_agrees_and_checks_candidates() {
    let o = run(&["oracle", &fixture("cycle.aut")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agrees"));
    let rel = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(rel.path(), "[[0, 2], [1, 2], [0, 1]]").unwrap();
    let p = rel.path().display().to_string();
    assert_eq!(run(&["oracle", &fixture("cycle.aut"), "--relation", &p]).status.code(), Some(0));
    std::fs::write(rel.path(), "[[0, 2]]").unwrap();
    assert_eq!(run(&["oracle", &fixture("cycle.aut"), "--relation", &p]).status.code(), Some(1));
}

#[test]
fn relation_json_lists_both_sides() {
    let o = run(&["relation", "--format", "json", &fixture("nc_left.aut")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["states"], 5);
    let equiv = v["equivalent"].as_array().unwrap();
    assert!(equiv.contains(&serde_json::json!([0, 3])));
}

#[test]
fn coalgebra_pairs() {
    let da = fixture("da.json");
    let o = run(&["coalg-check", &da, "0", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("depth 2"));
    assert_eq!(run(&["coalg-check", &da, "1", "2"]).status.code(), Some(0));
    assert_eq!(run(&["coalg-check", &da]).status.code(), Some(0));
    assert_eq!(run(&["coalg-check", &da, "0"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.aut");
    std::fs::write(&bad, "des (0,1,2)\n(0,\"a\",7)\n").unwrap();
    let bad = bad.display().to_string();
    let o = run(&["check", &bad, "0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["check", &fixture("sr.aut"), "0", "99"]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent.aut", "0", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["selftest", "--density", "2"]).status.code(), Some(2));
}

#[test]
fn accept_i_reads_i_as_silent() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("i.aut");
    std::fs::write(&f, "des (0,3,4)\n(0,\"i\",1)\n(1,\"a\",2)\n(3,\"a\",2)\n").unwrap();
    let f = f.display().to_string();
    assert_eq!(run(&["check", &f, "0", "3"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--accept-i", &f, "0", "3"]).status.code(), Some(0));
    assert_eq!(run(&["check", "--tau", "i", &f, "0", "3"]).status.code(), Some(0));
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = run(&["selftest", "--count", "12", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert!(stdout(&a).contains("all properties hold"));
    let b = run(&["selftest", "--count", "12", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn in_process_entry_point_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = apartness::cli::run(["apartness", "check", &fixture("sr.aut"), "0", "5"], &mut out, &mut err);
    assert_eq!(code, 1);
    assert_eq!(out, run(&["check", &fixture("sr.aut"), "0", "5"]).stdout);
}
