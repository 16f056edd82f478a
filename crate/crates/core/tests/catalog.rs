use std::fs;

use chc_lab::catalog::{
    read_catalog, report, run_experiment, CatalogError, CatalogRecord, ExperimentConfig,
};
use chc_lab::classify::{Budgets, VerdictTag};
use chc_lab::enumerate::EnumConfig;

fn config(dir: &tempfile::TempDir, name: &str, max_nodes: usize) -> ExperimentConfig {
    ExperimentConfig::new(EnumConfig::new(max_nodes, 2), dir.path().join(name))
}

#[test]
fn one_node_sweep_has_two_atom_records() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "one.jsonl", 1);
    run_experiment(&c).unwrap();
    let records = read_catalog(&c.out).unwrap();
    assert_eq!(records.len(), 2);
    for (r, body) in records.iter().zip(["x = x", "x in x"]) {
        assert_eq!(r.canonical_body, body);
        assert_eq!(r.verdict, VerdictTag::Satisfiable);
        assert_eq!(r.hereditary, "hc");
        assert_eq!(r.witness, "model:1");
    }
}

#[test]
fn two_node_sweep_contains_russell() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "two.jsonl", 2);
    let summary = run_experiment(&c).unwrap();
    let records = read_catalog(&c.out).unwrap();
    let russell = records
        .iter()
        .find(|r| r.canonical_body == "not (x in x)")
        .unwrap();
    assert_eq!(russell.verdict, VerdictTag::Pathological);
    assert_eq!(russell.hereditary, "fails_at:not (x in x)");
    let reported = report(&c.out).unwrap();
    assert!(reported.totals().pathological >= 1);
    assert_eq!(reported.by_size, summary.by_size);
}

#[test]
fn report_on_empty_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    fs::write(&path, "").unwrap();
    let s = report(&path).unwrap();
    assert_eq!(s.totals().total(), 0);
    assert!(s.pathological.is_empty());
}

#[test]
fn report_names_corrupted_line() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "bad.jsonl", 2);
    run_experiment(&c).unwrap();
    let mut lines: Vec<String> = fs::read_to_string(&c.out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    lines[2] = lines[2].replace("\"node_count\":2", "\"node_count\":7");
    fs::write(&c.out, lines.join("\n") + "\n").unwrap();
    match report(&c.out) {
        Err(CatalogError::Malformed { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    lines[2] = "{not json".into();
    fs::write(&c.out, lines.join("\n") + "\n").unwrap();
    let err = report(&c.out).unwrap_err();
    assert!(err.to_string().contains(":3:"), "{err}");
}

#[test]
fn rerun_is_byte_identical_and_job_independent() {
    let dir = tempfile::tempdir().unwrap();
    let a = config(&dir, "a.jsonl", 4);
    let mut b = config(&dir, "b.jsonl", 4);
    b.jobs = 4;
    run_experiment(&a).unwrap();
    run_experiment(&b).unwrap();
    let first = fs::read(&a.out).unwrap();
    assert_eq!(first, fs::read(&b.out).unwrap());
    run_experiment(&a).unwrap();
    assert_eq!(first, fs::read(&a.out).unwrap());
}

#[test]
fn resume_from_every_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let full = config(&dir, "full.jsonl", 3);
    run_experiment(&full).unwrap();
    let expected = fs::read_to_string(&full.out).unwrap();
    let lines: Vec<&str> = expected.lines().collect();
    for cut in [0, 1, 17, lines.len() - 1, lines.len()] {
        let mut partial = config(&dir, "partial.jsonl", 3);
        let mut text: String = lines[..cut].iter().map(|l| format!("{l}\n")).collect();
        text.push_str("{\"canonical_body\":");
        fs::write(&partial.out, text).unwrap();
        partial.resume = true;
        let s = run_experiment(&partial).unwrap();
        assert_eq!(fs::read_to_string(&partial.out).unwrap(), expected, "cut {cut}");
        assert_eq!(s.reused, cut);
    }
}

#[test]
fn resume_rewrites_out_of_order_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    let full = config(&dir, "full.jsonl", 2);
    run_experiment(&full).unwrap();
    let expected = fs::read_to_string(&full.out).unwrap();
    let mut lines: Vec<&str> = expected.lines().collect();
    lines.swap(0, 3);
    let mut shuffled = config(&dir, "shuffled.jsonl", 2);
    fs::write(&shuffled.out, lines.join("\n") + "\n").unwrap();
    shuffled.resume = true;
    let s = run_experiment(&shuffled).unwrap();
    assert_eq!(s.reused, lines.len());
    assert_eq!(fs::read_to_string(&shuffled.out).unwrap(), expected);
}

fn weak_budgets() -> Budgets {
    let mut b = Budgets::default();
    b.prover.max_generated_clauses = 1;
    b.max_model_size = 1;
    b.eager_model_size = 1;
    b
}

#[test]
fn unknowns_retried_only_under_larger_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let mut weak = config(&dir, "c.jsonl", 2);
    weak.budgets = weak_budgets();
    run_experiment(&weak).unwrap();
    let before = read_catalog(&weak.out).unwrap();
    let unknowns = before.iter().filter(|r| r.verdict == VerdictTag::Unknown).count();
    assert!(unknowns > 0);

    // Same budgets: nothing is recomputed.
    weak.resume = true;
    let s = run_experiment(&weak).unwrap();
    assert_eq!(s.reused, before.len());

    // Larger budgets: only the unknown records are recomputed.
    let mut strong = config(&dir, "c.jsonl", 2);
    strong.resume = true;
    let s = run_experiment(&strong).unwrap();
    assert_eq!(s.reused, before.len() - unknowns);
    let after = read_catalog(&strong.out).unwrap();
    assert!(after.iter().all(|r| r.verdict != VerdictTag::Unknown));
    for (old, new) in before.iter().zip(&after) {
        if old.verdict != VerdictTag::Unknown {
            assert_eq!(old, new);
        }
    }
}

#[test]
fn extensionality_mode_change_recomputes() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "c.jsonl", 2);
    run_experiment(&c).unwrap();
    let mut no_ee = config(&dir, "c.jsonl", 2);
    no_ee.include_ee = false;
    no_ee.resume = true;
    let s = run_experiment(&no_ee).unwrap();
    assert_eq!(s.reused, 0);
    assert!(read_catalog(&no_ee.out).unwrap().iter().all(|r| !r.include_ee));
}

#[test]
fn records_round_trip_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "c.jsonl", 3);
    run_experiment(&c).unwrap();
    for line in fs::read_to_string(&c.out).unwrap().lines() {
        let r: CatalogRecord = serde_json::from_str(line).unwrap();
        assert_eq!(r.to_line(), line);
        r.validate().unwrap();
    }
}

#[test]
fn limit_stops_early() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(&dir, "c.jsonl", 3);
    c.limit = Some(5);
    let s = run_experiment(&c).unwrap();
    assert_eq!(s.totals().total(), 5);
    assert_eq!(read_catalog(&c.out).unwrap().len(), 5);
}
