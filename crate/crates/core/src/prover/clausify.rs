//! Negation normal form, Skolemization and CNF distribution.
//!
//! Every binder gets a fresh variable id while the formula is brought into
//! NNF, so copies made by expanding `<->` never share variables. An
//! existential is replaced by a Skolem term over the universally bound
//! variables that actually occur in its scope; a closed existential becomes a
//! constant even when it sits below universals.

use std::collections::BTreeSet;

use super::{Clause, Literal, Pred, Term};
use crate::comprehension::Sentence;
use crate::formula::{Formula, Var};

enum Nnf {
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(u32, Box<Nnf>),
    Exists(u32, Box<Nnf>),
}

struct Ctx {
    next_var: u32,
    next_skolem: usize,
    env: Vec<(Var, u32)>,
}

impl Ctx {
    fn lookup(&self, v: &Var) -> Term {
        let id = self
            .env
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, id)| *id)
            .expect("sentence is closed");
        Term::Var(id)
    }

    fn nnf(&mut self, f: &Formula, positive: bool) -> Nnf {
        match f {
            Formula::Member(a, b) => Nnf::Lit(Literal::member(positive, self.lookup(a), self.lookup(b))),
            Formula::Equal(a, b) => Nnf::Lit(Literal::equal(positive, self.lookup(a), self.lookup(b))),
            Formula::Not(g) => self.nnf(g, !positive),
            Formula::And(l, r) => {
                let parts = vec![self.nnf(l, positive), self.nnf(r, positive)];
                if positive {
                    Nnf::And(parts)
                } else {
                    Nnf::Or(parts)
                }
            }
            Formula::Or(l, r) => {
                let parts = vec![self.nnf(l, positive), self.nnf(r, positive)];
                if positive {
                    Nnf::Or(parts)
                } else {
                    Nnf::And(parts)
                }
            }
            Formula::Implies(l, r) => {
                let parts = vec![self.nnf(l, !positive), self.nnf(r, positive)];
                if positive {
                    Nnf::Or(parts)
                } else {
                    Nnf::And(parts)
                }
            }
            Formula::Iff(l, r) => {
                // A <-> B  ==  (~A | B) & (A | ~B)
                // ~(A <-> B)  ==  (A | B) & (~A | ~B)
                let first = Nnf::Or(vec![self.nnf(l, !positive), self.nnf(r, true)]);
                let second = Nnf::Or(vec![self.nnf(l, positive), self.nnf(r, false)]);
                Nnf::And(vec![first, second])
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let id = self.next_var;
                self.next_var += 1;
                self.env.push((v.clone(), id));
                let body = Box::new(self.nnf(g, positive));
                self.env.pop();
                let universal = matches!(f, Formula::Forall(..)) == positive;
                if universal {
                    Nnf::Forall(id, body)
                } else {
                    Nnf::Exists(id, body)
                }
            }
        }
    }

    fn skolemize(&mut self, f: Nnf, universals: &mut Vec<u32>) -> Nnf {
        match f {
            Nnf::Lit(l) => Nnf::Lit(l),
            Nnf::And(parts) => Nnf::And(parts.into_iter().map(|p| self.skolemize(p, universals)).collect()),
            Nnf::Or(parts) => Nnf::Or(parts.into_iter().map(|p| self.skolemize(p, universals)).collect()),
            Nnf::Forall(id, body) => {
                universals.push(id);
                let out = self.skolemize(*body, universals);
                universals.pop();
                out
            }
            Nnf::Exists(id, body) => {
                let mut free = BTreeSet::new();
                free_vars(&body, &mut free);
                let args: Vec<Term> = universals
                    .iter()
                    .filter(|u| free.contains(*u))
                    .map(|u| Term::Var(*u))
                    .collect();
                let name = format!("sk{}", self.next_skolem);
                self.next_skolem += 1;
                let witness = Term::func(&name, args);
                let body = replace(*body, id, &witness);
                self.skolemize(body, universals)
            }
        }
    }
}

fn free_vars(f: &Nnf, out: &mut BTreeSet<u32>) {
    match f {
        Nnf::Lit(l) => {
            for t in [&l.left, &l.right] {
                collect_term_vars(t, out);
            }
        }
        Nnf::And(ps) | Nnf::Or(ps) => ps.iter().for_each(|p| free_vars(p, out)),
        Nnf::Forall(_, b) | Nnf::Exists(_, b) => free_vars(b, out),
    }
}

fn collect_term_vars(t: &Term, out: &mut BTreeSet<u32>) {
    match t {
        Term::Var(v) => {
            out.insert(*v);
        }
        Term::Func(_, args) => args.iter().for_each(|a| collect_term_vars(a, out)),
    }
}

fn replace(f: Nnf, id: u32, with: &Term) -> Nnf {
    match f {
        Nnf::Lit(l) => Nnf::Lit(l.map_vars(&mut |v| if v == id { with.clone() } else { Term::Var(v) })),
        Nnf::And(ps) => Nnf::And(ps.into_iter().map(|p| replace(p, id, with)).collect()),
        Nnf::Or(ps) => Nnf::Or(ps.into_iter().map(|p| replace(p, id, with)).collect()),
        Nnf::Forall(v, b) => Nnf::Forall(v, Box::new(replace(*b, id, with))),
        Nnf::Exists(v, b) => Nnf::Exists(v, Box::new(replace(*b, id, with))),
    }
}

fn cnf(f: &Nnf) -> Vec<Vec<Literal>> {
    match f {
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(ps) => ps.iter().flat_map(cnf).collect(),
        Nnf::Or(ps) => ps.iter().fold(vec![Vec::new()], |acc, p| {
            let right = cnf(p);
            let mut out = Vec::with_capacity(acc.len() * right.len());
            for a in &acc {
                for b in &right {
                    let mut c = a.clone();
                    c.extend(b.iter().cloned());
                    out.push(c);
                }
            }
            out
        }),
        Nnf::Forall(..) | Nnf::Exists(..) => unreachable!("quantifiers removed before distribution"),
    }
}

/// Clausal form of the conjunction of `sentences`.
///
/// Tautological clauses are dropped. When `with_equality_axioms` is set and
/// some clause mentions `=`, reflexivity, symmetry, transitivity and
/// congruence (for `in` in both positions and for every Skolem function in
/// every argument position) are appended.
pub fn clausify(sentences: &[Sentence], with_equality_axioms: bool) -> Vec<Clause> {
    let mut ctx = Ctx {
        next_var: 0,
        next_skolem: 0,
        env: Vec::new(),
    };
    let mut clauses = Vec::new();
    for s in sentences {
        let nnf = ctx.nnf(s.formula(), true);
        let ground = ctx.skolemize(nnf, &mut Vec::new());
        for lits in cnf(&ground) {
            let c = Clause::new(lits);
            if !c.is_tautology() && !clauses.contains(&c) {
                clauses.push(c);
            }
        }
    }
    if with_equality_axioms && clauses.iter().any(Clause::mentions_equality) {
        let functions = function_symbols(&clauses);
        clauses.extend(equality_axioms(&functions));
    }
    clauses
}

fn function_symbols(clauses: &[Clause]) -> Vec<(String, usize)> {
    fn visit(t: &Term, out: &mut Vec<(String, usize)>) {
        if let Term::Func(s, args) = t {
            if !args.is_empty() && !out.iter().any(|(name, _)| **name == **s) {
                out.push((s.to_string(), args.len()));
            }
            args.iter().for_each(|a| visit(a, out));
        }
    }
    let mut out = Vec::new();
    for c in clauses {
        for l in &c.literals {
            visit(&l.left, &mut out);
            visit(&l.right, &mut out);
        }
    }
    out
}

fn equality_axioms(functions: &[(String, usize)]) -> Vec<Clause> {
    let v = Term::Var;
    let eq = |p, a, b| Literal::equal(p, a, b);
    let mem = |p, a, b| Literal::member(p, a, b);
    let mut out = vec![
        Clause::new(vec![eq(true, v(0), v(0))]),
        Clause::new(vec![eq(false, v(0), v(1)), eq(true, v(1), v(0))]),
        Clause::new(vec![
            eq(false, v(0), v(1)),
            eq(false, v(1), v(2)),
            eq(true, v(0), v(2)),
        ]),
        Clause::new(vec![
            eq(false, v(0), v(1)),
            mem(false, v(0), v(2)),
            mem(true, v(1), v(2)),
        ]),
        Clause::new(vec![
            eq(false, v(0), v(1)),
            mem(false, v(2), v(0)),
            mem(true, v(2), v(1)),
        ]),
    ];
    for (name, arity) in functions {
        for position in 0..*arity {
            let args = |replaced: u32| -> Vec<Term> {
                (0..*arity)
                    .map(|i| {
                        if i == position {
                            v(replaced)
                        } else {
                            v(2 + i as u32)
                        }
                    })
                    .collect()
            };
            out.push(Clause::new(vec![
                eq(false, v(0), v(1)),
                eq(true, Term::func(name, args(0)), Term::func(name, args(1))),
            ]));
        }
    }
    debug_assert!(out.iter().all(|c| c.literals.iter().all(|l| matches!(l.pred, Pred::Equal | Pred::Member))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comprehension::{cos_instance, extensionality};
    use crate::formula::{parse, PredicateBody};

    fn body(text: &str) -> PredicateBody {
        PredicateBody::over_x(parse(text).unwrap()).unwrap()
    }

    fn texts(cs: &[Clause]) -> Vec<String> {
        cs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn russell_clauses() {
        let cs = clausify(&[cos_instance(&body("not (x in x)"))], true);
        assert_eq!(texts(&cs), vec!["~X0 in sk0 | ~X0 in X0", "X0 in sk0 | X0 in X0"]);
    }

    #[test]
    fn extensionality_clauses() {
        let cs = clausify(&[extensionality()], false);
        assert_eq!(
            texts(&cs),
            vec![
                "sk0(X0,X1) in X0 | sk0(X0,X1) in X1 | X0 = X1",
                "~sk0(X0,X1) in X0 | ~sk0(X0,X1) in X1 | X0 = X1",
            ]
        );
    }

    #[test]
    fn extensionality_with_equality_axioms() {
        let cs = clausify(&[extensionality()], true);
        // 2 clauses + refl, sym, trans, 2 membership congruences, 2 positions of sk0.
        assert_eq!(cs.len(), 2 + 5 + 2);
        assert_eq!(cs[7].to_string(), "~X0 = X1 | sk0(X0,X2) = sk0(X1,X2)");
        assert_eq!(cs[8].to_string(), "~X0 = X1 | sk0(X2,X0) = sk0(X2,X1)");
    }

    #[test]
    fn no_equality_axioms_without_equality() {
        let cs = clausify(&[cos_instance(&body("x in x"))], true);
        assert!(cs.iter().all(|c| !c.mentions_equality()));
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn closed_existential_below_universal_is_a_constant() {
        let p = PredicateBody::over_x(crate::comprehension::undecided_sentence()).unwrap();
        let cs = clausify(&[cos_instance(&p)], false);
        // Positive occurrence of the empty-set sentence gives a constant; the
        // negative occurrence gives a unary function of the inner universal.
        assert_eq!(
            texts(&cs),
            vec![
                "~X0 in sk0 | ~X1 in sk1",
                "X0 in sk0 | sk2(X1) in X1",
            ]
        );
    }
}
