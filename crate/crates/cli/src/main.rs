use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chc_lab::catalog::{report, run_experiment, CatalogError, ExperimentConfig};
use chc_lab::classify::{
    Budgets, Classification, ClassifyError, Classifier, HereditaryStatus, JointItem, JointOutcome,
    NegationOutcome, Verdict,
};
use chc_lab::comprehension::{corpus, corpus_entry, separation_scheme, CorpusItem, Sentence};
use chc_lab::enumerate::{enumerate, Connective, EnumConfig};
use chc_lab::formula::{parse, PredicateBody};
use chc_lab::prover::Budget;

/// Workbench for comprehension predicates over membership and equality.
#[derive(Parser, Debug)]
#[command(name = "chc-lab", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Options {
    /// Largest body size (AST nodes) to enumerate.
    #[arg(long, global = true, default_value_t = 4)]
    max_nodes: usize,
    /// Most quantifiers in an enumerated body.
    #[arg(long, global = true, default_value_t = 2)]
    max_bound_vars: usize,
    /// Connectives allowed in enumerated bodies (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    connectives: Vec<String>,
    /// Prover limit on generated clauses.
    #[arg(long, global = true)]
    max_clauses: Option<usize>,
    /// Prover limit on literals per clause.
    #[arg(long, global = true)]
    max_literals: Option<usize>,
    /// Prover limit on term depth.
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Largest domain the model finder tries.
    #[arg(long, global = true)]
    max_model_size: Option<usize>,
    /// Run both engines on every input and abort on disagreement.
    #[arg(long, global = true)]
    cross_check: bool,
    /// Worker threads for `run`.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Continue an existing catalog.
    #[arg(long, global = true)]
    resume: bool,
    /// Leave extensionality out of the comprehension check.
    #[arg(long, global = true)]
    no_ee: bool,
    /// Catalog path for `run`.
    #[arg(long, global = true, default_value = "catalog.jsonl")]
    out: PathBuf,
    /// Stop `run` after this many bodies.
    #[arg(long, global = true, hide = true)]
    limit: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse { formula: String },
    /// Classify a body (formula text or corpus name).
    Classify { item: String },
    /// Classify every designated subformula of a body.
    Hereditary { item: String },
    /// Check joint consistency of several items.
    ///
    /// Items are corpus names, `sep:<body or name>` for a separation
    /// instance, `sentence:<closed formula>`, or body text.
    Joint {
        #[arg(required = true)]
        items: Vec<String>,
    },
    /// Check whether the comprehension instance of a body is valid.
    Negation { item: String },
    /// List canonical bodies in enumeration order.
    Enumerate,
    /// Enumerate, classify and write a catalog.
    Run,
    /// Summarize a catalog file.
    Report { path: PathBuf },
    /// List the named corpus.
    Corpus,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
    Output(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Malformed { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl Options {
    fn budgets(&self) -> Budgets {
        let d = Budgets::default();
        Budgets {
            prover: Budget {
                max_generated_clauses: self.max_clauses.unwrap_or(d.prover.max_generated_clauses),
                max_clause_literals: self.max_literals.unwrap_or(d.prover.max_clause_literals),
                max_term_depth: self.max_depth.unwrap_or(d.prover.max_term_depth),
                wall_clock: None,
            },
            max_model_size: self.max_model_size.unwrap_or(d.max_model_size),
            eager_model_size: d.eager_model_size,
            cross_check: self.cross_check,
        }
    }

    fn classifier(&self) -> Classifier {
        Classifier::new(self.budgets(), !self.no_ee)
    }

    fn enum_config(&self) -> Result<EnumConfig, Failure> {
        if self.max_nodes == 0 {
            return Err(Failure::Usage("--max-nodes must be at least 1".into()));
        }
        let mut config = EnumConfig::new(self.max_nodes, self.max_bound_vars);
        if !self.connectives.is_empty() {
            let parsed = self
                .connectives
                .iter()
                .map(|c| {
                    Connective::from_keyword(c.trim())
                        .ok_or_else(|| Failure::Usage(format!("unknown connective {c:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            config = config.with_connectives(parsed);
        }
        Ok(config)
    }
}

fn parse_body(text: &str) -> Result<PredicateBody, Failure> {
    let f = parse(text).map_err(|e| Failure::Usage(format!("{text:?}: {e}")))?;
    PredicateBody::over_x(f).map_err(|e| Failure::Usage(e.to_string()))
}

fn resolve_body(item: &str) -> Result<PredicateBody, Failure> {
    let name = item.strip_prefix("corpus:").unwrap_or(item);
    match corpus_entry(name).map(|e| e.item) {
        Some(CorpusItem::Body(b)) => Ok(b),
        Some(CorpusItem::Sentence(_)) => Err(Failure::Usage(format!(
            "{name} is a sentence, not a predicate body; use it with `joint`"
        ))),
        None if item.starts_with("corpus:") => {
            Err(Failure::Usage(format!("no corpus entry named {name}")))
        }
        None => parse_body(item),
    }
}

fn resolve_joint_item(item: &str) -> Result<JointItem, Failure> {
    if let Some(rest) = item.strip_prefix("sep:") {
        return Ok(JointItem::Sentence(separation_scheme(&resolve_body(rest)?)));
    }
    if let Some(rest) = item.strip_prefix("sentence:") {
        let f = parse(rest).map_err(|e| Failure::Usage(format!("{rest:?}: {e}")))?;
        return Sentence::new(f)
            .map(JointItem::Sentence)
            .map_err(|e| Failure::Usage(e.to_string()));
    }
    let name = item.strip_prefix("corpus:").unwrap_or(item);
    match corpus_entry(name).map(|e| e.item) {
        Some(CorpusItem::Body(b)) => Ok(JointItem::Body(b)),
        Some(CorpusItem::Sentence(s)) => Ok(JointItem::Sentence(s)),
        None => resolve_body(item).map(JointItem::Body),
    }
}

fn print_classification(out: &mut dyn Write, c: &Classification) -> io::Result<()> {
    writeln!(out, "verdict: {}", c.verdict.tag())?;
    match &c.verdict {
        Verdict::Pathological(p) => {
            writeln!(out, "witness: proof ({} steps)", p.len())?;
            write!(out, "{p}")?;
        }
        Verdict::Satisfiable(m) => {
            writeln!(out, "witness: model")?;
            writeln!(out, "{m}")?;
        }
        Verdict::Unknown => {
            writeln!(out, "witness: none")?;
            if c.meta.lossy_saturation() {
                writeln!(out, "note: lossy saturation")?;
            }
            writeln!(out, "no model up to size {}", c.meta.models_excluded_up_to)?;
        }
    }
    writeln!(out, "include_ee: {}", c.meta.include_ee)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Parse { formula } => {
            let f = parse(formula).map_err(|e| Failure::Usage(format!("{formula:?}: {e}")))?;
            writeln!(out, "{f}")?;
            writeln!(out, "canonical: {}", f.alpha_canonical())?;
            writeln!(out, "nodes: {}", f.size())?;
            let free: Vec<String> = f.free_vars_ordered().iter().map(|v| v.to_string()).collect();
            writeln!(out, "free: {}", free.join(" "))?;
        }
        Command::Classify { item } => {
            let body = resolve_body(item)?;
            print_classification(out, &*opts.classifier().classify(&body)?)?;
        }
        Command::Hereditary { item } => {
            let body = resolve_body(item)?;
            match opts.classifier().hereditary_classify(&body)? {
                HereditaryStatus::HereditaryConsistent => writeln!(out, "hereditary: hc")?,
                HereditaryStatus::FailsAt {
                    subformula,
                    witness,
                } => {
                    writeln!(out, "hereditary: fails_at {subformula}")?;
                    write!(out, "{witness}")?;
                }
                HereditaryStatus::Unknown(open) => {
                    writeln!(out, "hereditary: unknown")?;
                    for b in open {
                        writeln!(out, "undecided: {b}")?;
                    }
                }
            }
        }
        Command::Joint { items } => {
            let items = items
                .iter()
                .map(|i| resolve_joint_item(i))
                .collect::<Result<Vec<_>, _>>()?;
            let (outcome, _) = opts.classifier().joint_check(&items)?;
            match outcome {
                JointOutcome::Inconsistent(p) => {
                    writeln!(out, "joint: inconsistent")?;
                    write!(out, "{p}")?;
                }
                JointOutcome::Consistent(m) => {
                    writeln!(out, "joint: consistent")?;
                    writeln!(out, "{m}")?;
                }
                JointOutcome::Unknown => writeln!(out, "joint: unknown")?,
            }
        }
        Command::Negation { item } => {
            let body = resolve_body(item)?;
            match opts.classifier().negation_check(&body)? {
                NegationOutcome::NegationRefuted(p) => {
                    writeln!(out, "negation: refuted")?;
                    write!(out, "{p}")?;
                }
                NegationOutcome::NegationSatisfiable(m) => {
                    writeln!(out, "negation: satisfiable")?;
                    writeln!(out, "{m}")?;
                }
                NegationOutcome::Unknown => writeln!(out, "negation: unknown")?,
            }
        }
        Command::Enumerate => {
            for b in enumerate(&opts.enum_config()?) {
                writeln!(out, "{b}")?;
            }
        }
        Command::Run => {
            let mut config = ExperimentConfig::new(opts.enum_config()?, &opts.out);
            config.budgets = opts.budgets();
            config.include_ee = !opts.no_ee;
            config.jobs = opts.jobs as usize;
            config.resume = opts.resume;
            config.limit = opts.limit;
            let summary = run_experiment(&config)?;
            write!(out, "{summary}")?;
            if summary.reused > 0 {
                writeln!(out, "reused records: {}", summary.reused)?;
            }
        }
        Command::Report { path } => {
            let summary = report(path)?;
            write!(out, "{summary}")?;
            for p in &summary.pathological {
                writeln!(out, "  {p}")?;
            }
        }
        Command::Corpus => {
            for e in corpus() {
                let text = match &e.item {
                    CorpusItem::Body(b) => format!("body     {b}"),
                    CorpusItem::Sentence(s) => format!("sentence {s}"),
                };
                writeln!(out, "{:<20} {text}", e.name)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = execute(cli, &mut out).and_then(|()| out.flush().map_err(Failure::Output));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Output(e)) => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
