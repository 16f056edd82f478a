//! Three-way classification of comprehension predicates.
//!
//! The model finder runs first on small domains, then the prover, then the
//! model finder on the remaining domain sizes. Proofs are replayed by
//! [`check_proof`] and models re-evaluated before they are returned. With
//! `cross_check` enabled the engine that did not decide is run as well, and
//! any input that is both refuted and modelled aborts with
//! [`ClassifyError::OracleConflict`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::comprehension::{cos_instance, extensionality, Sentence};
use crate::formula::{designated_subformulas, PredicateBody};
use crate::model::{find_model_in_range, Model, ModelError, ModelSearch};
use crate::prover::{check_proof, clausify, refute, Budget, Proof, Refutation, SearchStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictTag {
    Pathological,
    Satisfiable,
    Unknown,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictTag::Pathological => "pathological",
            VerdictTag::Satisfiable => "satisfiable",
            VerdictTag::Unknown => "unknown",
        })
    }
}

/// Limits shared by both engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub prover: Budget,
    /// Largest domain the model finder tries.
    pub max_model_size: usize,
    /// Domains up to this size are searched before the prover runs.
    pub eager_model_size: usize,
    /// Run the second engine even after the first one decided.
    pub cross_check: bool,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            prover: Budget::default(),
            max_model_size: 4,
            eager_model_size: 3,
            cross_check: false,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ClassifyError {
    #[error("oracle conflict: {sentences} was both refuted and modelled ({model_size} elements)")]
    OracleConflict { sentences: String, model_size: usize },
    #[error("refutation failed replay for {0}")]
    UncheckedProof(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// What the engines established about a sentence set.
#[derive(Clone, Debug)]
pub enum Witness {
    Refuted(Proof),
    Modelled(Model),
    Undecided,
}

#[derive(Clone, Debug)]
pub struct RunMeta {
    pub budgets: Budgets,
    pub include_ee: bool,
    pub elapsed: Duration,
    /// Prover statistics, when the prover ran.
    pub prover: Option<SearchStats>,
    /// Largest domain size searched without success.
    pub models_excluded_up_to: usize,
}

impl RunMeta {
    /// True when the prover discarded clauses, so exhaustion says nothing.
    pub fn lossy_saturation(&self) -> bool {
        self.prover.as_ref().is_some_and(|s| s.lossy)
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub witness: Witness,
    pub meta: RunMeta,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Pathological(Proof),
    Satisfiable(Model),
    Unknown,
}

impl Verdict {
    pub fn tag(&self) -> VerdictTag {
        match self {
            Verdict::Pathological(_) => VerdictTag::Pathological,
            Verdict::Satisfiable(_) => VerdictTag::Satisfiable,
            Verdict::Unknown => VerdictTag::Unknown,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    pub meta: RunMeta,
    /// The sentences handed to the engines, in order.
    pub sentences: Vec<Sentence>,
}

#[derive(Clone, Debug)]
pub enum HereditaryStatus {
    HereditaryConsistent,
    FailsAt {
        subformula: PredicateBody,
        witness: Proof,
    },
    Unknown(Vec<PredicateBody>),
}

#[derive(Clone, Debug)]
pub enum JointItem {
    Body(PredicateBody),
    Sentence(Sentence),
}

#[derive(Clone, Debug)]
pub enum JointOutcome {
    Consistent(Model),
    Inconsistent(Proof),
    Unknown,
}

#[derive(Clone, Debug)]
pub enum NegationOutcome {
    /// The comprehension instance is logically valid.
    NegationRefuted(Proof),
    NegationSatisfiable(Model),
    Unknown,
}

/// Runs both engines on `sentences` under `budgets`.
pub fn decide(sentences: &[Sentence], budgets: &Budgets) -> Result<Decision, ClassifyError> {
    let started = Instant::now();
    let describe = || {
        sentences
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ; ")
    };
    let eager = budgets.eager_model_size.min(budgets.max_model_size);
    let mut meta = RunMeta {
        budgets: *budgets,
        include_ee: false,
        elapsed: Duration::ZERO,
        prover: None,
        models_excluded_up_to: 0,
    };
    let clauses = clausify(sentences, true);
    let run_prover = |meta: &mut RunMeta| -> Result<Option<Proof>, ClassifyError> {
        let r = refute(&clauses, &budgets.prover);
        meta.prover = Some(r.stats().clone());
        match r {
            Refutation::Refuted { proof, .. } => {
                if !check_proof(&proof, &clauses) {
                    return Err(ClassifyError::UncheckedProof(describe()));
                }
                Ok(Some(proof))
            }
            Refutation::Exhausted { .. } => Ok(None),
        }
    };

    let mut witness = Witness::Undecided;
    if let ModelSearch::Found(m) = find_model_in_range(sentences, 1, eager)? {
        witness = Witness::Modelled(m);
    } else {
        meta.models_excluded_up_to = eager;
        if let Some(proof) = run_prover(&mut meta)? {
            witness = Witness::Refuted(proof);
        } else if let ModelSearch::Found(m) =
            find_model_in_range(sentences, eager + 1, budgets.max_model_size)?
        {
            witness = Witness::Modelled(m);
        } else {
            meta.models_excluded_up_to = budgets.max_model_size;
        }
    }

    if budgets.cross_check {
        match &witness {
            Witness::Modelled(m) if meta.prover.is_none() => {
                if run_prover(&mut meta)?.is_some() {
                    return Err(ClassifyError::OracleConflict {
                        sentences: describe(),
                        model_size: m.size(),
                    });
                }
            }
            Witness::Refuted(_) => {
                if let ModelSearch::Found(m) =
                    find_model_in_range(sentences, eager + 1, budgets.max_model_size)?
                {
                    return Err(ClassifyError::OracleConflict {
                        sentences: describe(),
                        model_size: m.size(),
                    });
                }
                meta.models_excluded_up_to = budgets.max_model_size;
            }
            _ => {}
        }
    }
    meta.elapsed = started.elapsed();
    Ok(Decision { witness, meta })
}

/// Classifier with fixed budgets and a verdict cache keyed by canonical body
/// text. Cloning shares the cache.
#[derive(Clone)]
pub struct Classifier {
    budgets: Budgets,
    include_ee: bool,
    cache: Arc<Mutex<HashMap<String, Arc<Classification>>>>,
}

impl Classifier {
    pub fn new(budgets: Budgets, include_ee: bool) -> Classifier {
        Classifier {
            budgets,
            include_ee,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    pub fn include_ee(&self) -> bool {
        self.include_ee
    }

    fn with_ee(&self, mut sentences: Vec<Sentence>) -> Vec<Sentence> {
        if self.include_ee {
            sentences.push(extensionality());
        }
        sentences
    }

    /// Classifies the comprehension instance of `p` (plus extensionality
    /// when enabled).
    pub fn classify(&self, p: &PredicateBody) -> Result<Arc<Classification>, ClassifyError> {
        let key = p.canonical_text();
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let sentences = self.with_ee(vec![cos_instance(p)]);
        let d = decide(&sentences, &self.budgets)?;
        let mut meta = d.meta;
        meta.include_ee = self.include_ee;
        let verdict = match d.witness {
            Witness::Refuted(p) => Verdict::Pathological(p),
            Witness::Modelled(m) => Verdict::Satisfiable(m),
            Witness::Undecided => Verdict::Unknown,
        };
        let c = Arc::new(Classification {
            verdict,
            meta,
            sentences,
        });
        self.cache
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert(c.clone());
        Ok(c)
    }

    /// Classifies every designated subformula, smallest first, stopping at
    /// the first pathological one.
    pub fn hereditary_classify(&self, p: &PredicateBody) -> Result<HereditaryStatus, ClassifyError> {
        let mut subs: Vec<(usize, String, PredicateBody)> = designated_subformulas(p)
            .into_iter()
            .map(|b| (b.size(), b.canonical_text(), b))
            .collect();
        subs.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut unresolved = Vec::new();
        for (_, _, sub) in subs {
            let c = self.classify(&sub)?;
            match &c.verdict {
                Verdict::Pathological(proof) => {
                    return Ok(HereditaryStatus::FailsAt {
                        subformula: sub,
                        witness: proof.clone(),
                    })
                }
                Verdict::Satisfiable(_) => {}
                Verdict::Unknown => unresolved.push(sub),
            }
        }
        Ok(if unresolved.is_empty() {
            HereditaryStatus::HereditaryConsistent
        } else {
            HereditaryStatus::Unknown(unresolved)
        })
    }

    /// Joint consistency of comprehension instances and raw sentences.
    pub fn joint_check(&self, items: &[JointItem]) -> Result<(JointOutcome, Decision), ClassifyError> {
        assert!(!items.is_empty(), "joint check needs at least one item");
        let sentences = self.with_ee(
            items
                .iter()
                .map(|i| match i {
                    JointItem::Body(p) => cos_instance(p),
                    JointItem::Sentence(s) => s.clone(),
                })
                .collect(),
        );
        let mut d = decide(&sentences, &self.budgets)?;
        d.meta.include_ee = self.include_ee;
        let outcome = match &d.witness {
            Witness::Refuted(p) => JointOutcome::Inconsistent(p.clone()),
            Witness::Modelled(m) => JointOutcome::Consistent(m.clone()),
            Witness::Undecided => JointOutcome::Unknown,
        };
        Ok((outcome, d))
    }

    /// Runs the engines on the negated comprehension instance alone, so a
    /// refutation shows the instance is valid in pure logic.
    pub fn negation_check(&self, p: &PredicateBody) -> Result<NegationOutcome, ClassifyError> {
        let d = decide(&[cos_instance(p).negated()], &self.budgets)?;
        Ok(match d.witness {
            Witness::Refuted(p) => NegationOutcome::NegationRefuted(p),
            Witness::Modelled(m) => NegationOutcome::NegationSatisfiable(m),
            Witness::Undecided => NegationOutcome::Unknown,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comprehension::corpus_entry;
    use crate::formula::parse;

    fn body(text: &str) -> PredicateBody {
        PredicateBody::over_x(parse(text).unwrap()).unwrap()
    }

    fn corpus_body(name: &str) -> PredicateBody {
        match corpus_entry(name).unwrap().item {
            crate::comprehension::CorpusItem::Body(b) => b,
            _ => panic!("{name} is not a body"),
        }
    }

    #[test]
    fn russell_pathological() {
        let c = Classifier::new(Budgets::default(), true);
        let r = c.classify(&body("not (x in x)")).unwrap();
        assert_eq!(r.verdict.tag(), VerdictTag::Pathological);
    }

    #[test]
    fn anti_russell_model_of_size_one() {
        let c = Classifier::new(Budgets::default(), true);
        match &c.classify(&body("x in x")).unwrap().verdict {
            Verdict::Satisfiable(m) => assert_eq!(m.size(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn universal_model_of_size_one() {
        let c = Classifier::new(Budgets::default(), true);
        match &c.classify(&body("x = x")).unwrap().verdict {
            Verdict::Satisfiable(m) => assert_eq!(m, &Model::new(1, vec![vec![true]])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hereditary_examples() {
        let c = Classifier::new(Budgets::default(), true);
        assert!(matches!(
            c.hereditary_classify(&body("x in x")).unwrap(),
            HereditaryStatus::HereditaryConsistent
        ));
        match c.hereditary_classify(&body("not (x in x)")).unwrap() {
            HereditaryStatus::FailsAt { subformula, .. } => {
                assert_eq!(subformula.to_string(), "not (x in x)")
            }
            other => panic!("unexpected {other:?}"),
        }
        match c.hereditary_classify(&corpus_body("ud_a")).unwrap() {
            HereditaryStatus::FailsAt { subformula, .. } => {
                assert_eq!(subformula.to_string(), "not (x in x)")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negation_examples() {
        let c = Classifier::new(Budgets::default(), true);
        match c.negation_check(&body("x = x")).unwrap() {
            NegationOutcome::NegationSatisfiable(m) => {
                assert_eq!(m, Model::new(1, vec![vec![false]]))
            }
            other => panic!("unexpected {other:?}"),
        }
        // The Russell instance is refutable, so its negation is valid and
        // has a model in every domain.
        assert!(matches!(
            c.negation_check(&body("not (x in x)")).unwrap(),
            NegationOutcome::NegationSatisfiable(_)
        ));
        match c.negation_check(&body("x in x")).unwrap() {
            NegationOutcome::NegationSatisfiable(m) => assert_eq!(m.size(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decide_refutes_negated_validity() {
        let s = Sentence::new(parse("not (forall a. a = a)").unwrap()).unwrap();
        let d = decide(&[s], &Budgets::default()).unwrap();
        assert!(matches!(d.witness, Witness::Refuted(_)));
    }

    #[test]
    fn cache_is_shared_by_clones() {
        let c = Classifier::new(Budgets::default(), true);
        let first = c.classify(&body("x in x")).unwrap();
        let again = c.clone().classify(&parse_body_alpha_variant()).unwrap();
        assert!(Arc::ptr_eq(&first, &again));
    }

    fn parse_body_alpha_variant() -> PredicateBody {
        body("x in x")
    }
}
