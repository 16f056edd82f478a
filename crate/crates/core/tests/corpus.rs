use chc_lab::classify::{
    decide, Budgets, Classifier, HereditaryStatus, JointItem, JointOutcome, NegationOutcome,
    Verdict, VerdictTag, Witness,
};
use chc_lab::comprehension::{
    corpus, corpus_entry, cos_instance, separation_scheme, CorpusItem, ExpectedHereditary,
    Sentence,
};
use chc_lab::formula::{parse, PredicateBody};
use chc_lab::model::{eval, Model};
use chc_lab::prover::{check_proof, clausify};

fn body(name: &str) -> PredicateBody {
    match corpus_entry(name).unwrap().item {
        CorpusItem::Body(b) => b,
        CorpusItem::Sentence(_) => panic!("{name} is a sentence"),
    }
}

fn item(name: &str) -> JointItem {
    match corpus_entry(name).unwrap().item {
        CorpusItem::Body(b) => JointItem::Body(b),
        CorpusItem::Sentence(s) => JointItem::Sentence(s),
    }
}

#[test]
fn corpus_bodies_match_expected_verdicts() {
    for include_ee in [true, false] {
        let c = Classifier::new(Budgets::default(), include_ee);
        for entry in corpus() {
            let CorpusItem::Body(b) = &entry.item else {
                continue;
            };
            let r = c.classify(b).unwrap();
            assert_eq!(Some(r.verdict.tag()), entry.expected_verdict, "{}", entry.name);
            match &r.verdict {
                Verdict::Pathological(p) => {
                    assert!(check_proof(p, &clausify(&r.sentences, true)), "{}", entry.name)
                }
                Verdict::Satisfiable(m) => {
                    assert!(r.sentences.iter().all(|s| eval(s, m)), "{}", entry.name)
                }
                Verdict::Unknown => unreachable!(),
            }
        }
    }
}

#[test]
fn corpus_hereditary_expectations() {
    let c = Classifier::new(Budgets::default(), true);
    for entry in corpus() {
        let CorpusItem::Body(b) = &entry.item else {
            continue;
        };
        let status = c.hereditary_classify(b).unwrap();
        match entry.expected_hereditary.unwrap() {
            ExpectedHereditary::Consistent => {
                assert!(matches!(status, HereditaryStatus::HereditaryConsistent), "{}", entry.name)
            }
            ExpectedHereditary::Fails => match status {
                HereditaryStatus::FailsAt { subformula, .. } => {
                    assert_eq!(subformula.to_string(), "not (x in x)", "{}", entry.name)
                }
                other => panic!("{}: {other:?}", entry.name),
            },
        }
    }
}

#[test]
fn corpus_sentences_are_consistent_alone() {
    let c = Classifier::new(Budgets::default(), true);
    for name in ["complement", "separation_russell"] {
        let (outcome, _) = c.joint_check(&[item(name)]).unwrap();
        assert!(matches!(outcome, JointOutcome::Consistent(_)), "{name}");
    }
}

#[test]
fn universal_model_has_full_membership() {
    let c = Classifier::new(Budgets::default(), true);
    match &c.classify(&body("universal")).unwrap().verdict {
        Verdict::Satisfiable(m) => assert_eq!(m, &Model::new(1, vec![vec![true]])),
        other => panic!("{other:?}"),
    }
}

#[test]
fn joint_checks() {
    let c = Classifier::new(Budgets::default(), true);
    for items in [
        vec![item("anti_russell"), item("complement")],
        vec![item("universal"), item("separation_russell")],
        vec![item("ud_a"), item("ud_b")],
    ] {
        let (outcome, decision) = c.joint_check(&items).unwrap();
        let JointOutcome::Inconsistent(_) = outcome else {
            panic!("not refuted: {outcome:?}");
        };
        assert!(matches!(decision.witness, Witness::Refuted(_)));
        assert!(decision.meta.include_ee);
    }
    for name in ["ud_a", "ud_b", "anti_russell"] {
        let (outcome, _) = c.joint_check(&[item(name)]).unwrap();
        assert!(matches!(outcome, JointOutcome::Consistent(_)), "{name}");
    }
}

#[test]
fn separation_of_universal_is_satisfiable_at_one() {
    let universal = body("universal");
    let sep = separation_scheme(&universal);
    let c = Classifier::new(Budgets::default(), true);
    let (outcome, _) = c.joint_check(&[JointItem::Sentence(sep)]).unwrap();
    match outcome {
        JointOutcome::Consistent(m) => assert_eq!(m.size(), 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn negation_checks() {
    let c = Classifier::new(Budgets::default(), true);
    match c.negation_check(&body("universal")).unwrap() {
        NegationOutcome::NegationSatisfiable(m) => {
            assert_eq!(m, Model::new(1, vec![vec![false]]))
        }
        other => panic!("{other:?}"),
    }
    match c.negation_check(&body("anti_russell")).unwrap() {
        NegationOutcome::NegationSatisfiable(m) => {
            assert_eq!(m.size(), 2);
            assert!(eval(&cos_instance(&body("anti_russell")).negated(), &m));
        }
        other => panic!("{other:?}"),
    }
    // The Russell instance is refutable, so its negation is valid and
    // holds in every model.
    match c.negation_check(&body("russell")).unwrap() {
        NegationOutcome::NegationSatisfiable(m) => assert_eq!(m.size(), 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn decide_refutes_a_contradiction() {
    let s = Sentence::new(parse("not (forall a. (a = a))").unwrap()).unwrap();
    let d = decide(&[s], &Budgets::default()).unwrap();
    let Witness::Refuted(proof) = d.witness else {
        panic!("not refuted");
    };
    assert!(proof.len() <= 3);
}

#[test]
fn cross_check_agrees_on_corpus() {
    let budgets = Budgets {
        cross_check: true,
        ..Budgets::default()
    };
    let c = Classifier::new(budgets, true);
    for entry in corpus() {
        if let CorpusItem::Body(b) = &entry.item {
            let r = c.classify(b).unwrap();
            assert_eq!(Some(r.verdict.tag()), entry.expected_verdict, "{}", entry.name);
        }
    }
}

#[test]
fn verdict_tags_serialize_lowercase() {
    assert_eq!(serde_json::to_string(&VerdictTag::Pathological).unwrap(), "\"pathological\"");
    assert_eq!(VerdictTag::Unknown.to_string(), "unknown");
}

#[test]
fn tiny_budgets_give_unknown_not_wrong_answers() {
    let mut budgets = Budgets::default();
    budgets.prover.max_generated_clauses = 1;
    budgets.max_model_size = 1;
    budgets.eager_model_size = 1;
    let c = Classifier::new(budgets, true);
    let r = c.classify(&body("ud_a")).unwrap();
    assert_eq!(r.verdict.tag(), VerdictTag::Unknown);
    assert_eq!(r.meta.models_excluded_up_to, 1);
}
