use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chc-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_russell() {
    let o = run(&["classify", "not (x in x)"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("verdict: pathological"), "{text}");
    assert!(text.contains("[input]"));
}

#[test]
fn classify_by_corpus_name() {
    let o = run(&["classify", "anti_russell"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: satisfiable"));
}

#[test]
fn joint_anti_russell_and_complement() {
    let o = run(&["joint", "corpus:anti_russell", "corpus:complement"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("joint: inconsistent"));
}

#[test]
fn hereditary_of_ud_a() {
    let o = run(&["hereditary", "ud_a"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not (x in x)"));
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["classify", "x in"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["joint"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "y in y"]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn corpus_listing() {
    let o = run(&["corpus"]);
    let text = stdout(&o);
    for name in ["russell", "anti_russell", "universal", "empty", "ud_a", "ud_b", "complement"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let out = out.to_str().unwrap();
    let o = run(&["--max-nodes", "2", "--out", out, "run"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read(out).unwrap();

    let o = run(&["--max-nodes", "2", "--out", out, "--jobs", "2", "run"]);
    assert!(o.status.success());
    assert_eq!(fs::read(out).unwrap(), first);

    let o = run(&["report", out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not (x in x)"));
}

#[test]
fn report_on_corrupted_catalog_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(&path, "{\"canonical_body\":\n").unwrap();
    let o = run(&["report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_on_missing_file_fails() {
    let o = run(&["report", "/nonexistent/catalog.jsonl"]);
    assert!(!o.status.success());
}
