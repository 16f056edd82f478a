//! Comprehension instances, extensionality, the parameterised schemes and a
//! small named corpus of classical predicates.

use std::collections::BTreeSet;
use std::fmt;

use crate::classify::VerdictTag;
use crate::formula::{parse, Formula, PredicateBody, Var};

/// A closed formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence(Formula);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula is not closed; free variables: {0}")]
pub struct NotClosed(pub String);

impl Sentence {
    pub fn new(formula: Formula) -> Result<Sentence, NotClosed> {
        let free = formula.free_vars();
        if free.is_empty() {
            Ok(Sentence(formula))
        } else {
            let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
            Err(NotClosed(names.join(", ")))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn negated(&self) -> Sentence {
        Sentence(Formula::negate(self.0.clone()))
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn fresh(name: &str, avoid: &mut BTreeSet<Var>) -> Var {
    let v = Var::new(name).fresh_against(avoid);
    avoid.insert(v.clone());
    v
}

fn avoid_set(p: &PredicateBody) -> BTreeSet<Var> {
    let mut avoid = p.formula().all_vars();
    avoid.insert(p.compression_var().clone());
    avoid
}

/// `exists s. forall y. (y in s <-> A[x:=y])` with `s`, `y` fresh for `A`.
pub fn cos_instance(p: &PredicateBody) -> Sentence {
    let mut avoid = avoid_set(p);
    let s = fresh("s", &mut avoid);
    let y = fresh("y", &mut avoid);
    let body = p.formula().substitute(p.compression_var(), &y);
    let f = Formula::Exists(
        s.clone(),
        Box::new(Formula::Forall(
            y.clone(),
            Box::new(Formula::iff(Formula::Member(y, s), body)),
        )),
    );
    Sentence::new(f).expect("comprehension instance is closed")
}

/// `forall a. forall b. ((forall z. (z in a <-> z in b)) -> a = b)`.
pub fn extensionality() -> Sentence {
    let same_members = Formula::forall(
        "z",
        Formula::iff(Formula::member("z", "a"), Formula::member("z", "b")),
    );
    let f = Formula::forall(
        "a",
        Formula::forall(
            "b",
            Formula::implies(same_members, Formula::equal("a", "b")),
        ),
    );
    Sentence::new(f).expect("extensionality is closed")
}

/// Every set has a complement: `forall m. exists s. forall y. (y in s <-> not (y in m))`.
pub fn complement_scheme() -> Sentence {
    let f = Formula::forall(
        "m",
        Formula::exists(
            "s",
            Formula::forall(
                "y",
                Formula::iff(
                    Formula::member("y", "s"),
                    Formula::negate(Formula::member("y", "m")),
                ),
            ),
        ),
    );
    Sentence::new(f).expect("complement scheme is closed")
}

/// `forall m. exists s. forall y. (y in s <-> (y in m and A[x:=y]))`.
pub fn separation_scheme(p: &PredicateBody) -> Sentence {
    let mut avoid = avoid_set(p);
    let m = fresh("m", &mut avoid);
    let s = fresh("s", &mut avoid);
    let y = fresh("y", &mut avoid);
    let body = p.formula().substitute(p.compression_var(), &y);
    let f = Formula::Forall(
        m.clone(),
        Box::new(Formula::Exists(
            s.clone(),
            Box::new(Formula::Forall(
                y.clone(),
                Box::new(Formula::iff(
                    Formula::Member(y.clone(), s),
                    Formula::conj(Formula::Member(y, m), body),
                )),
            )),
        )),
    );
    Sentence::new(f).expect("separation instance is closed")
}

/// The closed sentence standing in for an undecided formula: an empty
/// element exists. It and its negation are each satisfiable.
pub fn undecided_sentence() -> Formula {
    parse("exists u. forall y. not (y in u)").expect("static formula")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusItem {
    Body(PredicateBody),
    Sentence(Sentence),
}

/// Whether every designated subformula is expected to be non-pathological.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedHereditary {
    Consistent,
    Fails,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub item: CorpusItem,
    /// For bodies: the comprehension verdict. For sentences: the verdict of
    /// the sentence taken alone with extensionality.
    pub expected_verdict: Option<VerdictTag>,
    pub expected_hereditary: Option<ExpectedHereditary>,
}

fn body(text: &str) -> PredicateBody {
    PredicateBody::over_x(parse(text).expect("static formula")).expect("static body")
}

/// Named classical predicates and schemes.
pub fn corpus() -> Vec<CorpusEntry> {
    use ExpectedHereditary::*;
    let ud = undecided_sentence();
    let russell = Formula::negate(Formula::member("x", "x"));
    let entry = |name, item, verdict, hereditary| CorpusEntry {
        name,
        item,
        expected_verdict: Some(verdict),
        expected_hereditary: hereditary,
    };
    vec![
        entry(
            "russell",
            CorpusItem::Body(body("not (x in x)")),
            VerdictTag::Pathological,
            Some(Fails),
        ),
        entry(
            "anti_russell",
            CorpusItem::Body(body("x in x")),
            VerdictTag::Satisfiable,
            Some(Consistent),
        ),
        entry(
            "universal",
            CorpusItem::Body(body("x = x")),
            VerdictTag::Satisfiable,
            Some(Consistent),
        ),
        entry(
            "empty",
            CorpusItem::Body(body("not (x = x)")),
            VerdictTag::Satisfiable,
            Some(Consistent),
        ),
        entry(
            "ud_a",
            CorpusItem::Body(
                PredicateBody::over_x(Formula::disj(ud.clone(), russell.clone()))
                    .expect("static body"),
            ),
            VerdictTag::Satisfiable,
            Some(Fails),
        ),
        entry(
            "ud_b",
            CorpusItem::Body(
                PredicateBody::over_x(Formula::disj(Formula::negate(ud), russell))
                    .expect("static body"),
            ),
            VerdictTag::Satisfiable,
            Some(Fails),
        ),
        entry(
            "complement",
            CorpusItem::Sentence(complement_scheme()),
            VerdictTag::Satisfiable,
            None,
        ),
        entry(
            "separation_russell",
            CorpusItem::Sentence(separation_scheme(&body("not (x in x)"))),
            VerdictTag::Satisfiable,
            None,
        ),
    ]
}

/// Looks up a corpus entry; `complement_scheme` is accepted for `complement`.
pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    let name = match name {
        "complement_scheme" => "complement",
        other => other,
    };
    corpus().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_examples() {
        assert_eq!(
            cos_instance(&body("not (x in x)")).to_string(),
            "exists s. forall y. (y in s <-> not (y in y))"
        );
        assert_eq!(
            cos_instance(&body("x = x")).to_string(),
            "exists s. forall y. (y in s <-> y = y)"
        );
    }

    #[test]
    fn cos_of_closed_body_keeps_it_intact() {
        let ud = PredicateBody::over_x(undecided_sentence()).unwrap();
        assert_eq!(
            cos_instance(&ud).to_string(),
            "exists s. forall y1. (y1 in s <-> (exists u. forall y. (not (y in u))))"
        );
    }

    #[test]
    fn cos_binders_are_fresh() {
        let p = body("exists s. exists y. (s in y and y in x)");
        let c = cos_instance(&p);
        assert_eq!(
            c.to_string(),
            "exists s1. forall y1. (y1 in s1 <-> (exists s. exists y. (s in y and y in y1)))"
        );
    }

    #[test]
    fn extensionality_text() {
        assert_eq!(
            extensionality().to_string(),
            "forall a. forall b. ((forall z. (z in a <-> z in b)) -> a = b)"
        );
    }

    #[test]
    fn schemes_text() {
        assert_eq!(
            complement_scheme().to_string(),
            "forall m. exists s. forall y. (y in s <-> not (y in m))"
        );
        assert_eq!(
            separation_scheme(&body("not (x in x)")).to_string(),
            "forall m. exists s. forall y. (y in s <-> (y in m and not (y in y)))"
        );
    }

    #[test]
    fn corpus_names_unique_and_complete() {
        let names: Vec<&str> = corpus().iter().map(|e| e.name).collect();
        let unique: BTreeSet<&str> = names.iter().copied().collect();
        assert_eq!(unique.len(), names.len());
        for required in [
            "russell",
            "anti_russell",
            "universal",
            "empty",
            "ud_a",
            "ud_b",
            "complement",
            "separation_russell",
        ] {
            assert!(corpus_entry(required).is_some(), "{required}");
        }
        assert_eq!(
            corpus_entry("russell").unwrap().expected_verdict,
            Some(VerdictTag::Pathological)
        );
        assert_eq!(
            corpus_entry("anti_russell").unwrap().expected_verdict,
            Some(VerdictTag::Satisfiable)
        );
        assert_eq!(corpus_entry("complement_scheme").unwrap().name, "complement");
    }

    #[test]
    fn sentence_rejects_open_formula() {
        assert!(Sentence::new(Formula::member("x", "x")).is_err());
    }
}
