//! Quantifier expansion over a finite domain.
//!
//! `forall` becomes a conjunction and `exists` a disjunction over the domain
//! `0..n`; `v = w` folds to a constant and `v in w` becomes the propositional
//! variable of cell `(v, w)`. The expansion is kept in negation normal form
//! and distributed into CNF, switching to definitional variables for any
//! disjunction whose distribution would exceed the literal threshold.

use super::GroundClauseSet;
use crate::comprehension::Sentence;
use crate::formula::{Formula, Var};

/// Literal budget for naive distribution of a single disjunction.
pub const DEFAULT_DISTRIBUTION_THRESHOLD: usize = 5_000;

#[derive(Debug, Clone)]
enum Prop {
    Const(bool),
    Lit(i32),
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

fn and(parts: Vec<Prop>) -> Prop {
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            Prop::Const(true) => {}
            Prop::Const(false) => return Prop::Const(false),
            Prop::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Prop::Const(true),
        1 => out.pop().expect("one element"),
        _ => Prop::And(out),
    }
}

fn or(parts: Vec<Prop>) -> Prop {
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            Prop::Const(false) => {}
            Prop::Const(true) => return Prop::Const(true),
            Prop::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Prop::Const(false),
        1 => out.pop().expect("one element"),
        _ => Prop::Or(out),
    }
}

/// Propositional variable (1-based) of the cell "element i is a member of element j".
pub fn cell_var(n: usize, i: usize, j: usize) -> i32 {
    (i * n + j + 1) as i32
}

struct Expander<'a> {
    n: usize,
    env: Vec<(&'a Var, usize)>,
}

impl<'a> Expander<'a> {
    fn value(&self, v: &Var) -> usize {
        self.env
            .iter()
            .rev()
            .find(|(name, _)| *name == v)
            .map(|(_, e)| *e)
            .expect("closed sentence")
    }

    fn expand(&mut self, f: &'a Formula, positive: bool) -> Prop {
        match f {
            Formula::Member(a, b) => {
                let var = cell_var(self.n, self.value(a), self.value(b));
                Prop::Lit(if positive { var } else { -var })
            }
            Formula::Equal(a, b) => Prop::Const((self.value(a) == self.value(b)) == positive),
            Formula::Not(g) => self.expand(g, !positive),
            Formula::And(l, r) | Formula::Or(l, r) => {
                let parts = vec![self.expand(l, positive), self.expand(r, positive)];
                if matches!(f, Formula::And(..)) == positive {
                    and(parts)
                } else {
                    or(parts)
                }
            }
            Formula::Implies(l, r) => {
                let parts = vec![self.expand(l, !positive), self.expand(r, positive)];
                if positive {
                    or(parts)
                } else {
                    and(parts)
                }
            }
            Formula::Iff(l, r) => {
                let first = or(vec![self.expand(l, !positive), self.expand(r, true)]);
                let second = or(vec![self.expand(l, positive), self.expand(r, false)]);
                and(vec![first, second])
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let parts = (0..self.n)
                    .map(|e| {
                        self.env.push((v, e));
                        let p = self.expand(g, positive);
                        self.env.pop();
                        p
                    })
                    .collect();
                if matches!(f, Formula::Forall(..)) == positive {
                    and(parts)
                } else {
                    or(parts)
                }
            }
        }
    }
}

struct Encoder {
    next_var: usize,
    threshold: usize,
    definitions: Vec<Vec<i32>>,
}

impl Encoder {
    fn fresh(&mut self) -> i32 {
        self.next_var += 1;
        self.next_var as i32
    }

    fn cnf(&mut self, p: &Prop) -> Vec<Vec<i32>> {
        match p {
            Prop::Const(true) => Vec::new(),
            Prop::Const(false) => vec![Vec::new()],
            Prop::Lit(l) => vec![vec![*l]],
            Prop::And(parts) => parts.iter().flat_map(|q| self.cnf(q)).collect(),
            Prop::Or(parts) => {
                let mut children: Vec<Vec<Vec<i32>>> = parts.iter().map(|q| self.cnf(q)).collect();
                let clauses: usize = children
                    .iter()
                    .map(Vec::len)
                    .try_fold(1usize, |acc, c| acc.checked_mul(c))
                    .unwrap_or(usize::MAX);
                let width: usize = children
                    .iter()
                    .map(|c| c.iter().map(Vec::len).max().unwrap_or(0))
                    .sum();
                if clauses.saturating_mul(width) > self.threshold {
                    for child in children.iter_mut().filter(|c| c.len() > 1) {
                        let d = self.fresh();
                        for mut c in child.drain(..) {
                            c.insert(0, -d);
                            self.definitions.push(c);
                        }
                        child.push(vec![d]);
                    }
                }
                children.iter().fold(vec![Vec::new()], |acc, child| {
                    let mut out = Vec::with_capacity(acc.len() * child.len());
                    for a in &acc {
                        for b in child {
                            let mut c = a.clone();
                            c.extend_from_slice(b);
                            out.push(c);
                        }
                    }
                    out
                })
            }
        }
    }
}

fn tidy(mut c: Vec<i32>) -> Option<Vec<i32>> {
    let mut out: Vec<i32> = Vec::with_capacity(c.len());
    for l in c.drain(..) {
        if out.contains(&-l) {
            return None;
        }
        if !out.contains(&l) {
            out.push(l);
        }
    }
    Some(out)
}

/// Grounds the conjunction of `sentences` over a domain of size `n`.
pub fn ground(sentences: &[Sentence], n: usize) -> GroundClauseSet {
    ground_with_threshold(sentences, n, DEFAULT_DISTRIBUTION_THRESHOLD)
}

pub fn ground_with_threshold(sentences: &[Sentence], n: usize, threshold: usize) -> GroundClauseSet {
    assert!(n >= 1, "domain must be nonempty");
    let props: Vec<Prop> = sentences
        .iter()
        .map(|s| {
            Expander {
                n,
                env: Vec::new(),
            }
            .expand(s.formula(), true)
        })
        .collect();
    let root = and(props);
    let mut enc = Encoder {
        next_var: n * n,
        threshold,
        definitions: Vec::new(),
    };
    let main = enc.cnf(&root);
    let clauses = main
        .into_iter()
        .chain(std::mem::take(&mut enc.definitions))
        .filter_map(tidy)
        .collect();
    GroundClauseSet {
        cells: n * n,
        variables: enc.next_var,
        clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comprehension::{cos_instance, extensionality};
    use crate::formula::{parse, PredicateBody};
    use crate::model::sat_solve;

    fn body(text: &str) -> PredicateBody {
        PredicateBody::over_x(parse(text).unwrap()).unwrap()
    }

    #[test]
    fn extensionality_trivial_at_one() {
        let g = ground(&[extensionality()], 1);
        assert_eq!(g.cells, 1);
        assert!(g.clauses.is_empty());
    }

    #[test]
    fn empty_set_at_one() {
        let g = ground(&[cos_instance(&body("not (x = x)"))], 1);
        assert_eq!(g.clauses, vec![vec![-1]]);
        assert_eq!(sat_solve(&g), Some(vec![false]));
    }

    #[test]
    fn russell_unsat_at_two() {
        let g = ground(&[cos_instance(&body("not (x in x)"))], 2);
        assert!(sat_solve(&g).is_none());
    }

    #[test]
    fn definitional_encoding_preserves_satisfiability() {
        let ee = extensionality();
        for n in 1..=3 {
            let naive = ground_with_threshold(&[ee.clone()], n, usize::MAX);
            let defs = ground_with_threshold(&[ee.clone()], n, 4);
            assert_eq!(naive.variables, n * n);
            assert!(defs.variables > n * n || n == 1);
            assert_eq!(sat_solve(&naive).is_some(), sat_solve(&defs).is_some());
        }
    }

    #[test]
    fn false_sentence_grounds_to_empty_clause() {
        let s = Sentence::new(parse("exists a. not (a = a)").unwrap()).unwrap();
        assert_eq!(ground(&[s], 2).clauses, vec![Vec::<i32>::new()]);
    }
}
