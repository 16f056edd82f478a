//! Budgeted refutation prover.
//!
//! Sentences are clausified with Skolemization, equality is axiomatised, and
//! the clause set is saturated by binary resolution and positive factoring
//! in a given-clause loop. Refutations come back as [`Proof`]s that
//! [`check_proof`] replays without touching the search code.

mod check;
mod clausify;
mod proof;
mod search;
mod unify;

use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use check::check_proof;
pub use clausify::clausify;
pub use proof::{Proof, ProofParseError, ProofStep, Rule, Unifier};
pub use search::{refute, Refutation, SearchStats};
pub use unify::{unify, Subst};

pub type Symbol = Arc<str>;

/// Prover term. Constants are nullary functions; function symbols only ever
/// come from Skolemization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(u32),
    Func(Symbol, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::Func(name.into(), Vec::new())
    }

    pub fn func(name: &str, args: Vec<Term>) -> Term {
        Term::Func(name.into(), args)
    }

    /// Variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Func(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Symbol count.
    pub fn weight(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Func(_, args) => 1 + args.iter().map(Term::weight).sum::<usize>(),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(*v),
            Term::Func(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    pub fn contains_var(&self, v: u32) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::Func(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub(crate) fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::Func(s, args) => Term::Func(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    fn visit_vars(&self, f: &mut impl FnMut(u32)) {
        match self {
            Term::Var(v) => f(*v),
            Term::Func(_, args) => args.iter().for_each(|a| a.visit_vars(f)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "X{v}"),
            Term::Func(s, args) if args.is_empty() => f.write_str(s),
            Term::Func(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Member,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub pred: Pred,
    pub left: Term,
    pub right: Term,
}

impl Literal {
    pub fn member(positive: bool, left: Term, right: Term) -> Literal {
        Literal {
            positive,
            pred: Pred::Member,
            left,
            right,
        }
    }

    pub fn equal(positive: bool, left: Term, right: Term) -> Literal {
        Literal {
            positive,
            pred: Pred::Equal,
            left,
            right,
        }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive
            && self.pred == other.pred
            && self.left == other.left
            && self.right == other.right
    }

    pub(crate) fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Literal {
        Literal {
            positive: self.positive,
            pred: self.pred,
            left: self.left.map_vars(f),
            right: self.right.map_vars(f),
        }
    }

    pub fn depth(&self) -> usize {
        self.left.depth().max(self.right.depth())
    }

    pub fn weight(&self) -> usize {
        1 + self.left.weight() + self.right.weight()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        let op = match self.pred {
            Pred::Member => "in",
            Pred::Equal => "=",
        };
        write!(f, "{} {op} {}", self.left, self.right)
    }
}

/// A duplicate-free disjunction of literals; the empty clause is falsity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    /// Builds the clause in normal form: duplicate literals dropped (first
    /// occurrence kept) and variables renumbered `0, 1, ...` in order of
    /// first occurrence.
    pub fn new(literals: Vec<Literal>) -> Clause {
        let mut unique: Vec<Literal> = Vec::with_capacity(literals.len());
        for l in literals {
            if !unique.contains(&l) {
                unique.push(l);
            }
        }
        let mut order: Vec<u32> = Vec::new();
        for l in &unique {
            for t in [&l.left, &l.right] {
                t.visit_vars(&mut |v| {
                    if !order.contains(&v) {
                        order.push(v);
                    }
                });
            }
        }
        let literals = unique
            .iter()
            .map(|l| {
                l.map_vars(&mut |v| {
                    Term::Var(order.iter().position(|w| *w == v).expect("collected") as u32)
                })
            })
            .collect();
        Clause { literals }
    }

    pub fn empty() -> Clause {
        Clause {
            literals: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, a)| self.literals[i + 1..].iter().any(|b| a.is_complement_of(b)))
    }

    /// One past the largest variable index, i.e. the shift applied to a
    /// second resolution parent.
    pub fn var_span(&self) -> u32 {
        self.literals
            .iter()
            .filter_map(|l| l.left.max_var().max(l.right.max_var()))
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn depth(&self) -> usize {
        self.literals.iter().map(Literal::depth).max().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.literals.iter().map(Literal::weight).sum()
    }

    pub fn mentions_equality(&self) -> bool {
        self.literals.iter().any(|l| l.pred == Pred::Equal)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Resource limits for one refutation attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Inference conclusions generated before giving up.
    pub max_generated_clauses: usize,
    /// Conclusions with more literals are discarded.
    pub max_clause_literals: usize,
    /// Conclusions with deeper terms are discarded.
    pub max_term_depth: usize,
    /// Optional wall-clock cap. Runs that hit it are not reproducible.
    #[serde(skip)]
    pub wall_clock: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_generated_clauses: 3000,
            max_clause_literals: 4,
            max_term_depth: 2,
            wall_clock: None,
        }
    }
}

impl Budget {
    /// Componentwise comparison on the deterministic limits.
    pub fn dominates(&self, other: &Budget) -> bool {
        self.max_generated_clauses >= other.max_generated_clauses
            && self.max_clause_literals >= other.max_clause_literals
            && self.max_term_depth >= other.max_term_depth
    }
}
