//! Proof replay. Deliberately self-contained: substitution application,
//! clause normalisation and inference replay are re-implemented here rather
//! than borrowed from the search.

use super::proof::{Proof, Rule, Unifier};
use super::{Clause, Literal, Term};

fn instantiate(t: &Term, u: &Unifier, fuel: usize) -> Option<Term> {
    if fuel == 0 {
        return None;
    }
    match t {
        Term::Var(v) => match u.0.iter().find(|(w, _)| w == v) {
            Some((_, image)) if image == t => Some(t.clone()),
            Some((_, image)) => instantiate(image, u, fuel - 1),
            None => Some(t.clone()),
        },
        Term::Func(s, args) => {
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                out.push(instantiate(a, u, fuel - 1)?);
            }
            Some(Term::Func(s.clone(), out))
        }
    }
}

fn instantiate_lit(l: &Literal, u: &Unifier) -> Option<Literal> {
    const FUEL: usize = 256;
    Some(Literal {
        positive: l.positive,
        pred: l.pred,
        left: instantiate(&l.left, u, FUEL)?,
        right: instantiate(&l.right, u, FUEL)?,
    })
}

fn offset_term(t: &Term, by: u32) -> Term {
    match t {
        Term::Var(v) => Term::Var(v + by),
        Term::Func(s, args) => Term::Func(s.clone(), args.iter().map(|a| offset_term(a, by)).collect()),
    }
}

fn largest_var(t: &Term) -> Option<u32> {
    match t {
        Term::Var(v) => Some(*v),
        Term::Func(_, args) => args.iter().filter_map(largest_var).max(),
    }
}

fn shift_for(c: &Clause) -> u32 {
    c.literals
        .iter()
        .flat_map(|l| [largest_var(&l.left), largest_var(&l.right)])
        .flatten()
        .max()
        .map_or(0, |m| m + 1)
}

fn rename(t: &Term, order: &mut Vec<u32>) -> Term {
    match t {
        Term::Var(v) => {
            let i = match order.iter().position(|w| w == v) {
                Some(i) => i,
                None => {
                    order.push(*v);
                    order.len() - 1
                }
            };
            Term::Var(i as u32)
        }
        Term::Func(s, args) => Term::Func(s.clone(), args.iter().map(|a| rename(a, order)).collect()),
    }
}

/// Drops repeated literals and renumbers variables by first occurrence.
fn canonical(lits: Vec<Literal>) -> Vec<Literal> {
    let mut unique: Vec<Literal> = Vec::new();
    for l in lits {
        if !unique.iter().any(|u| *u == l) {
            unique.push(l);
        }
    }
    let mut order = Vec::new();
    unique
        .into_iter()
        .map(|l| {
            let left = rename(&l.left, &mut order);
            let right = rename(&l.right, &mut order);
            Literal {
                positive: l.positive,
                pred: l.pred,
                left,
                right,
            }
        })
        .collect()
}

fn complementary(a: &Literal, b: &Literal) -> bool {
    a.positive != b.positive && a.pred == b.pred && a.left == b.left && a.right == b.right
}

fn replay_resolve(first: &Clause, second: &Clause, u: &Unifier, claimed: &[Literal]) -> bool {
    let shift = shift_for(first);
    let a: Option<Vec<Literal>> = first.literals.iter().map(|l| instantiate_lit(l, u)).collect();
    let b: Option<Vec<Literal>> = second
        .literals
        .iter()
        .map(|l| {
            let shifted = Literal {
                positive: l.positive,
                pred: l.pred,
                left: offset_term(&l.left, shift),
                right: offset_term(&l.right, shift),
            };
            instantiate_lit(&shifted, u)
        })
        .collect();
    let (Some(a), Some(b)) = (a, b) else {
        return false;
    };
    for pivot_a in &a {
        for pivot_b in &b {
            if !complementary(pivot_a, pivot_b) {
                continue;
            }
            let mut rest: Vec<Literal> = a.iter().filter(|l| *l != pivot_a).cloned().collect();
            rest.extend(b.iter().filter(|l| *l != pivot_b).cloned());
            if canonical(rest) == claimed {
                return true;
            }
        }
    }
    false
}

fn replay_factor(parent: &Clause, u: &Unifier, claimed: &[Literal]) -> bool {
    let inst: Option<Vec<Literal>> = parent.literals.iter().map(|l| instantiate_lit(l, u)).collect();
    let Some(inst) = inst else {
        return false;
    };
    let merged = canonical(inst);
    merged.len() < parent.literals.len() && merged == claimed
}

/// Replays `proof` against `inputs`.
///
/// True iff every parent reference points backwards, every input step is a
/// (normalised) member of `inputs`, every inference re-derives exactly under
/// its recorded unifier, and the last step is the empty clause.
pub fn check_proof(proof: &Proof, inputs: &[Clause]) -> bool {
    let Some(last) = proof.steps.last() else {
        return false;
    };
    if !last.clause.literals.is_empty() {
        return false;
    }
    let normalized_inputs: Vec<Vec<Literal>> =
        inputs.iter().map(|c| canonical(c.literals.clone())).collect();
    for (k, step) in proof.steps.iter().enumerate() {
        let claimed = canonical(step.clause.literals.clone());
        if claimed != step.clause.literals {
            return false;
        }
        let ok = match &step.rule {
            Rule::Input => normalized_inputs.iter().any(|c| *c == claimed),
            Rule::Resolve(i, j, u) => {
                *i < k
                    && *j < k
                    && replay_resolve(&proof.steps[*i].clause, &proof.steps[*j].clause, u, &claimed)
            }
            Rule::Factor(i, u) => *i < k && replay_factor(&proof.steps[*i].clause, u, &claimed),
        };
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comprehension::cos_instance;
    use crate::formula::{parse, PredicateBody};
    use crate::prover::{clausify, refute, Budget, ProofStep};

    fn russell_proof() -> (Proof, Vec<Clause>) {
        let p = PredicateBody::over_x(parse("not (x in x)").unwrap()).unwrap();
        let cs = clausify(&[cos_instance(&p)], true);
        let proof = refute(&cs, &Budget::default()).proof().unwrap().clone();
        (proof, cs)
    }

    #[test]
    fn accepts_search_output() {
        let (proof, cs) = russell_proof();
        assert!(check_proof(&proof, &cs));
    }

    #[test]
    fn rejects_corrupted_unifier() {
        let (mut proof, cs) = russell_proof();
        let step = proof
            .steps
            .iter_mut()
            .find(|s| matches!(&s.rule, Rule::Factor(_, u) | Rule::Resolve(_, _, u) if !u.0.is_empty()))
            .unwrap();
        match &mut step.rule {
            Rule::Factor(_, u) | Rule::Resolve(_, _, u) => u.0[0].1 = Term::constant("bogus"),
            Rule::Input => unreachable!(),
        }
        assert!(!check_proof(&proof, &cs));
    }

    #[test]
    fn rejects_nonempty_final_clause() {
        let (mut proof, cs) = russell_proof();
        proof.steps.pop();
        assert!(!check_proof(&proof, &cs));
    }

    #[test]
    fn rejects_foreign_input() {
        let (proof, cs) = russell_proof();
        assert!(!check_proof(&proof, &cs[..1]));
    }

    #[test]
    fn rejects_forward_parent() {
        let mut proof = Proof {
            steps: vec![ProofStep {
                clause: Clause::empty(),
                rule: Rule::Factor(0, Unifier(vec![])),
            }],
        };
        assert!(!check_proof(&proof, &[]));
        proof.steps[0].rule = Rule::Input;
        assert!(check_proof(&proof, &[Clause::empty()]));
    }

    #[test]
    fn cyclic_unifier_is_rejected_not_looped() {
        let c = Clause::new(vec![Literal::member(true, Term::Var(0), Term::Var(1))]);
        let u = Unifier(vec![(0, Term::func("f", vec![Term::Var(0)]))]);
        assert!(instantiate_lit(&c.literals[0], &u).is_none());
    }
}
