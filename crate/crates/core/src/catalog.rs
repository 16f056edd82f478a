//! Catalog files: one JSON record per line, in enumeration order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::classify::{
    Budgets, Classification, ClassifyError, Classifier, HereditaryStatus, Verdict, VerdictTag,
};
use crate::enumerate::{enumerate, EnumConfig};
use crate::formula::{parse, PredicateBody};
use crate::TOOL_VERSION;

/// One classified body. Field order is the serialized order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRecord {
    pub canonical_body: String,
    pub node_count: usize,
    pub verdict: VerdictTag,
    /// `hc`, `fails_at:<canonical subformula>` or `unknown`.
    pub hereditary: String,
    /// `proof:<steps>`, `model:<size>` or `none`.
    pub witness: String,
    pub max_generated_clauses: usize,
    pub max_clause_literals: usize,
    pub max_term_depth: usize,
    pub max_model_size: usize,
    pub include_ee: bool,
    pub tool_version: String,
}

impl CatalogRecord {
    pub fn new(
        body: &PredicateBody,
        classification: &Classification,
        hereditary: &HereditaryStatus,
        budgets: &Budgets,
        include_ee: bool,
    ) -> CatalogRecord {
        let witness = match &classification.verdict {
            Verdict::Pathological(p) => format!("proof:{}", p.len()),
            Verdict::Satisfiable(m) => format!("model:{}", m.size()),
            Verdict::Unknown => "none".to_string(),
        };
        let hereditary = match hereditary {
            HereditaryStatus::HereditaryConsistent => "hc".to_string(),
            HereditaryStatus::FailsAt { subformula, .. } => {
                format!("fails_at:{}", subformula.canonical_text())
            }
            HereditaryStatus::Unknown(_) => "unknown".to_string(),
        };
        CatalogRecord {
            canonical_body: body.canonical_text(),
            node_count: body.size(),
            verdict: classification.verdict.tag(),
            hereditary,
            witness,
            max_generated_clauses: budgets.prover.max_generated_clauses,
            max_clause_literals: budgets.prover.max_clause_literals,
            max_term_depth: budgets.prover.max_term_depth,
            max_model_size: budgets.max_model_size,
            include_ee,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    fn budgets_dominated_by(&self, budgets: &Budgets) -> bool {
        let p = &budgets.prover;
        let ge = p.max_generated_clauses >= self.max_generated_clauses
            && p.max_clause_literals >= self.max_clause_literals
            && p.max_term_depth >= self.max_term_depth
            && budgets.max_model_size >= self.max_model_size;
        let gt = p.max_generated_clauses > self.max_generated_clauses
            || p.max_clause_literals > self.max_clause_literals
            || p.max_term_depth > self.max_term_depth
            || budgets.max_model_size > self.max_model_size;
        ge && gt
    }

    /// Checks the record's internal invariants.
    pub fn validate(&self) -> Result<(), String> {
        let f = parse(&self.canonical_body).map_err(|e| format!("canonical_body: {e}"))?;
        let body = PredicateBody::over_x(f).map_err(|e| format!("canonical_body: {e}"))?;
        if body.canonical_text() != self.canonical_body {
            return Err(format!(
                "canonical_body is not canonical (expected {})",
                body.canonical_text()
            ));
        }
        if body.size() != self.node_count {
            return Err(format!(
                "node_count {} does not match body size {}",
                self.node_count,
                body.size()
            ));
        }
        let witness_ok = match self.verdict {
            VerdictTag::Pathological => self.witness.starts_with("proof:"),
            VerdictTag::Satisfiable => self.witness.starts_with("model:"),
            VerdictTag::Unknown => self.witness == "none",
        };
        if !witness_ok {
            return Err(format!("witness {} does not fit verdict {}", self.witness, self.verdict));
        }
        if let Some(n) = self.witness.split_once(':').map(|(_, n)| n) {
            n.parse::<usize>()
                .map_err(|_| format!("witness count {n:?} is not a number"))?;
        }
        let hereditary_ok = self.hereditary == "hc"
            || self.hereditary == "unknown"
            || self.hereditary.starts_with("fails_at:");
        if !hereditary_ok {
            return Err(format!("bad hereditary tag {}", self.hereditary));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CatalogError + '_ {
    move |source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub enumeration: EnumConfig,
    pub budgets: Budgets,
    pub include_ee: bool,
    pub jobs: usize,
    pub out: PathBuf,
    pub resume: bool,
    /// Stop after this many bodies (in enumeration order).
    pub limit: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(enumeration: EnumConfig, out: impl Into<PathBuf>) -> ExperimentConfig {
        ExperimentConfig {
            enumeration,
            budgets: Budgets::default(),
            include_ee: true,
            jobs: 1,
            out: out.into(),
            resume: false,
            limit: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerdictCounts {
    pub pathological: usize,
    pub satisfiable: usize,
    pub unknown: usize,
}

impl VerdictCounts {
    pub fn total(&self) -> usize {
        self.pathological + self.satisfiable + self.unknown
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HereditaryCounts {
    pub consistent: usize,
    pub fails: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub by_size: BTreeMap<usize, VerdictCounts>,
    pub hereditary: HereditaryCounts,
    pub pathological: Vec<String>,
    /// Records taken over from an earlier run.
    pub reused: usize,
}

impl Summary {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a CatalogRecord>) -> Summary {
        let mut s = Summary::default();
        for r in records {
            let c = s.by_size.entry(r.node_count).or_default();
            match r.verdict {
                VerdictTag::Pathological => {
                    c.pathological += 1;
                    s.pathological.push(r.canonical_body.clone());
                }
                VerdictTag::Satisfiable => c.satisfiable += 1,
                VerdictTag::Unknown => c.unknown += 1,
            }
            if r.hereditary == "hc" {
                s.hereditary.consistent += 1;
            } else if r.hereditary == "unknown" {
                s.hereditary.unknown += 1;
            } else {
                s.hereditary.fails += 1;
            }
        }
        s
    }

    pub fn totals(&self) -> VerdictCounts {
        let mut t = VerdictCounts::default();
        for c in self.by_size.values() {
            t.pathological += c.pathological;
            t.satisfiable += c.satisfiable;
            t.unknown += c.unknown;
        }
        t
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5} {:>12} {:>12} {:>12} {:>12}",
            "size", "pathological", "satisfiable", "unknown", "total"
        )?;
        for (size, c) in &self.by_size {
            writeln!(
                f,
                "{:>5} {:>12} {:>12} {:>12} {:>12}",
                size,
                c.pathological,
                c.satisfiable,
                c.unknown,
                c.total()
            )?;
        }
        let t = self.totals();
        writeln!(
            f,
            "{:>5} {:>12} {:>12} {:>12} {:>12}",
            "all",
            t.pathological,
            t.satisfiable,
            t.unknown,
            t.total()
        )?;
        writeln!(
            f,
            "hereditary: hc {}, fails {}, unknown {}",
            self.hereditary.consistent, self.hereditary.fails, self.hereditary.unknown
        )?;
        writeln!(f, "pathological bodies: {}", self.pathological.len())
    }
}

struct Existing {
    records: Vec<CatalogRecord>,
    /// Byte offset just past each record's newline.
    ends: Vec<u64>,
}

/// Reads a catalog for resumption. A final line without a newline, or one
/// that does not parse, is treated as torn and dropped.
fn read_existing(path: &Path) -> Result<Existing, CatalogError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut records = Vec::new();
    let mut ends = Vec::new();
    let mut offset = 0u64;
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    for (i, raw) in lines.iter().enumerate() {
        let last = i + 1 == lines.len();
        offset += raw.len() as u64;
        let Some(line) = raw.strip_suffix('\n') else {
            break;
        };
        match serde_json::from_str::<CatalogRecord>(line) {
            Ok(r) => {
                records.push(r);
                ends.push(offset);
            }
            Err(_) if last => break,
            Err(e) => {
                return Err(CatalogError::Malformed {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(Existing { records, ends })
}

/// Everything computed for one body, handed to an observer.
pub struct Classified<'a> {
    pub body: &'a PredicateBody,
    pub classification: &'a Classification,
    pub hereditary: &'a HereditaryStatus,
    pub record: &'a CatalogRecord,
}

/// Enumerates, classifies and writes the catalog.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Summary, CatalogError> {
    run_experiment_observed(config, |_| {})
}

/// As [`run_experiment`], calling `observe` for every freshly classified body.
pub fn run_experiment_observed<F>(config: &ExperimentConfig, observe: F) -> Result<Summary, CatalogError>
where
    F: Fn(&Classified<'_>) + Sync,
{
    assert!(config.jobs >= 1, "job count must be positive");
    let bodies: Vec<PredicateBody> = enumerate(&config.enumeration)
        .take(config.limit.unwrap_or(usize::MAX))
        .collect();

    let existing = if config.resume {
        read_existing(&config.out)?
    } else {
        Existing {
            records: Vec::new(),
            ends: Vec::new(),
        }
    };
    let mut previous: HashMap<&str, &CatalogRecord> = HashMap::new();
    for r in &existing.records {
        previous.entry(r.canonical_body.as_str()).or_insert(r);
    }
    let plan: Vec<Option<CatalogRecord>> = bodies
        .iter()
        .map(|b| {
            let key = b.canonical_text();
            previous
                .get(key.as_str())
                .filter(|r| {
                    r.include_ee == config.include_ee
                        && !(r.verdict == VerdictTag::Unknown && r.budgets_dominated_by(&config.budgets))
                })
                .map(|r| (*r).clone())
        })
        .collect();

    let prefix = existing
        .records
        .iter()
        .zip(&plan)
        .take_while(|(old, planned)| planned.as_ref() == Some(*old))
        .count();
    let append = prefix == existing.records.len();
    let (file, tmp) = if append {
        let keep = if prefix == 0 { 0 } else { existing.ends[prefix - 1] };
        let f = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(!config.resume)
            .open(&config.out)
            .map_err(io_err(&config.out))?;
        f.set_len(keep).map_err(io_err(&config.out))?;
        (f, None)
    } else {
        let mut name = config.out.file_name().unwrap_or_default().to_os_string();
        name.push(".tmp");
        let tmp = config.out.with_file_name(name);
        let f = File::create(&tmp).map_err(io_err(&tmp))?;
        (f, Some(tmp))
    };
    let write_from = if append { prefix } else { 0 };
    let mut out = BufWriter::new(file);
    {
        use std::io::Seek;
        out.seek(io::SeekFrom::End(0)).map_err(io_err(&config.out))?;
    }

    let todo: Vec<usize> = (0..bodies.len()).filter(|&i| plan[i].is_none()).collect();
    let classifier = Classifier::new(config.budgets, config.include_ee);
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<CatalogRecord, ClassifyError>)>();

    let result = thread::scope(|scope| -> Result<Vec<CatalogRecord>, CatalogError> {
        for _ in 0..config.jobs.min(todo.len().max(1)) {
            let tx = tx.clone();
            let (classifier, next, abort, todo, bodies, observe) =
                (&classifier, &next, &abort, &todo, &bodies, &observe);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&i) = todo.get(k) else { break };
                let body = &bodies[i];
                let outcome = classifier.classify(body).and_then(|c| {
                    let h = classifier.hereditary_classify(body)?;
                    let record = CatalogRecord::new(
                        body,
                        &c,
                        &h,
                        classifier.budgets(),
                        classifier.include_ee(),
                    );
                    observe(&Classified {
                        body,
                        classification: &c,
                        hereditary: &h,
                        record: &record,
                    });
                    Ok(record)
                });
                if tx.send((i, outcome)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut finished: Vec<CatalogRecord> = Vec::with_capacity(bodies.len());
        let mut pending: BTreeMap<usize, CatalogRecord> = BTreeMap::new();
        let mut emit = |i: usize, r: CatalogRecord, out: &mut BufWriter<File>| -> io::Result<()> {
            if i >= write_from {
                writeln!(out, "{}", r.to_line())?;
                out.flush()?;
            }
            finished.push(r);
            Ok(())
        };
        let mut cursor = 0;
        let mut drain = |pending: &mut BTreeMap<usize, CatalogRecord>,
                         out: &mut BufWriter<File>|
         -> io::Result<()> {
            while cursor < bodies.len() {
                if let Some(r) = &plan[cursor] {
                    emit(cursor, r.clone(), out)?;
                } else if let Some(r) = pending.remove(&cursor) {
                    emit(cursor, r, out)?;
                } else {
                    break;
                }
                cursor += 1;
            }
            Ok(())
        };
        let target = tmp.as_deref().unwrap_or(&config.out);
        drain(&mut pending, &mut out).map_err(io_err(target))?;
        for (i, outcome) in rx {
            match outcome {
                Ok(r) => {
                    pending.insert(i, r);
                    drain(&mut pending, &mut out).map_err(io_err(target))?;
                }
                Err(e) => {
                    abort.store(true, Ordering::Relaxed);
                    return Err(e.into());
                }
            }
        }
        drop(drain);
        Ok(finished)
    });
    let records = result?;
    drop(out);
    if let Some(tmp) = tmp {
        fs::rename(&tmp, &config.out).map_err(io_err(&config.out))?;
    }
    let mut summary = Summary::from_records(&records);
    summary.reused = bodies.len() - todo.len();
    Ok(summary)
}

/// Reads every record of a catalog, failing on the first malformed line.
pub fn read_catalog(path: &Path) -> Result<Vec<CatalogRecord>, CatalogError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let malformed = |message: String| CatalogError::Malformed {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let r: CatalogRecord = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        r.validate().map_err(malformed)?;
        records.push(r);
    }
    Ok(records)
}

/// Summary table of a catalog file.
pub fn report(path: &Path) -> Result<Summary, CatalogError> {
    Ok(Summary::from_records(&read_catalog(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_field_order_is_fixed() {
        let r = CatalogRecord {
            canonical_body: "x in x".into(),
            node_count: 1,
            verdict: VerdictTag::Satisfiable,
            hereditary: "hc".into(),
            witness: "model:1".into(),
            max_generated_clauses: 10,
            max_clause_literals: 3,
            max_term_depth: 2,
            max_model_size: 4,
            include_ee: true,
            tool_version: "0.1.0".into(),
        };
        assert_eq!(
            r.to_line(),
            "{\"canonical_body\":\"x in x\",\"node_count\":1,\"verdict\":\"satisfiable\",\
             \"hereditary\":\"hc\",\"witness\":\"model:1\",\"max_generated_clauses\":10,\
             \"max_clause_literals\":3,\"max_term_depth\":2,\"max_model_size\":4,\
             \"include_ee\":true,\"tool_version\":\"0.1.0\"}"
        );
        assert_eq!(r.validate(), Ok(()));
    }

    #[test]
    fn validate_rejects_non_canonical_body() {
        let mut r = CatalogRecord {
            canonical_body: "forall y. (y in x)".into(),
            node_count: 2,
            verdict: VerdictTag::Unknown,
            hereditary: "unknown".into(),
            witness: "none".into(),
            max_generated_clauses: 1,
            max_clause_literals: 1,
            max_term_depth: 1,
            max_model_size: 1,
            include_ee: false,
            tool_version: String::new(),
        };
        assert!(r.validate().is_err());
        r.canonical_body = "forall v0. (v0 in x)".into();
        assert_eq!(r.validate(), Ok(()));
    }

    #[test]
    fn empty_summary_table() {
        let s = Summary::from_records(&[]);
        assert_eq!(s.totals(), VerdictCounts::default());
        assert!(s.to_string().contains("all"));
    }
}
