//! First-order formulas over the signature `{in, =}`.
//!
//! User-level formulas only ever mention variables as atom arguments. Terms
//! with function symbols exist only inside the prover (see [`crate::prover`]).

mod parse;
mod print;
mod subformula;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use subformula::designated_subformulas;

/// A variable name matching `[a-z][a-z0-9]*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    /// Panics if `name` is not a valid identifier; use [`Var::try_new`] for
    /// untrusted input.
    pub fn new(name: impl Into<String>) -> Var {
        let name = name.into();
        assert!(is_identifier(&name), "invalid variable name {name:?}");
        Var(name)
    }

    pub fn try_new(name: impl Into<String>) -> Option<Var> {
        let name = name.into();
        is_identifier(&name).then_some(Var(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The conventional compression variable `x`.
    pub fn x() -> Var {
        Var("x".to_string())
    }

    /// Smallest `base<k>` (k = 1, 2, ...) not in `avoid`, where `base` is this
    /// name with trailing digits stripped. Returns `self` unchanged when it is
    /// already free to use.
    pub fn fresh_against(&self, avoid: &BTreeSet<Var>) -> Var {
        if !avoid.contains(self) {
            return self.clone();
        }
        let base = self.0.trim_end_matches(|c: char| c.is_ascii_digit());
        (1..)
            .map(|k| Var(format!("{base}{k}")))
            .find(|v| !avoid.contains(v))
            .expect("unbounded suffix search")
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

/// Abstract syntax of a formula.
///
/// `Implies` and `Iff` are kept as primitive nodes so that subformula
/// extraction sees the formula exactly as written.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Member(Var, Var),
    Equal(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn member(lhs: &str, rhs: &str) -> Formula {
        Formula::Member(Var::new(lhs), Var::new(rhs))
    }

    pub fn equal(lhs: &str, rhs: &str) -> Formula {
        Formula::Equal(Var::new(lhs), Var::new(rhs))
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn conj(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn disj(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(Var::new(v), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(Var::new(v), Box::new(f))
    }

    /// AST node count: atoms count 1, every connective or quantifier adds 1.
    pub fn size(&self) -> usize {
        match self {
            Formula::Member(..) | Formula::Equal(..) => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => 1 + f.size() + g.size(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Member(..) | Formula::Equal(..))
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..)
        )
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Member(..) | Formula::Equal(..) => vec![],
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => vec![f, g],
        }
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// Free variables in order of first occurrence, left to right.
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_free_ordered(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                for v in [a, b] {
                    if !bound.contains(&v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    fn collect_free_ordered<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut Vec<Var>) {
        match self {
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                for v in [a, b] {
                    if !bound.contains(&v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v);
                f.collect_free_ordered(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free_ordered(bound, out);
                }
            }
        }
    }

    /// Every variable name appearing anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                out.insert(v.clone());
                f.collect_all(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_all(out);
                }
            }
        }
    }

    /// Capture-avoiding substitution of `w` for the free occurrences of `v`.
    ///
    /// A binder that would capture `w` is renamed to `base<k>` for the
    /// smallest `k` avoiding every variable of the subformula and `v`, `w`.
    pub fn substitute(&self, v: &Var, w: &Var) -> Formula {
        if v == w {
            return self.clone();
        }
        match self {
            Formula::Member(a, b) => Formula::Member(swap(a, v, w), swap(b, v, w)),
            Formula::Equal(a, b) => Formula::Equal(swap(a, v, w), swap(b, v, w)),
            Formula::Not(f) => Formula::Not(Box::new(f.substitute(v, w))),
            Formula::And(f, g) => {
                Formula::And(Box::new(f.substitute(v, w)), Box::new(g.substitute(v, w)))
            }
            Formula::Or(f, g) => {
                Formula::Or(Box::new(f.substitute(v, w)), Box::new(g.substitute(v, w)))
            }
            Formula::Implies(f, g) => {
                Formula::Implies(Box::new(f.substitute(v, w)), Box::new(g.substitute(v, w)))
            }
            Formula::Iff(f, g) => {
                Formula::Iff(Box::new(f.substitute(v, w)), Box::new(g.substitute(v, w)))
            }
            Formula::Forall(b, f) | Formula::Exists(b, f) => {
                let rebuild = |b: Var, f: Formula| match self {
                    Formula::Forall(..) => Formula::Forall(b, Box::new(f)),
                    _ => Formula::Exists(b, Box::new(f)),
                };
                if b == v || !f.free_vars().contains(v) {
                    return self.clone();
                }
                if b == w {
                    let mut avoid = f.all_vars();
                    avoid.insert(v.clone());
                    avoid.insert(w.clone());
                    let renamed = b.fresh_against(&avoid);
                    let body = f.substitute(b, &renamed).substitute(v, w);
                    rebuild(renamed, body)
                } else {
                    rebuild(b.clone(), f.substitute(v, w))
                }
            }
        }
    }

    /// Renames bound variables to `v0, v1, ...` in binder preorder, skipping
    /// names that are free in the formula. Alpha-equivalent inputs map to
    /// identical outputs.
    pub fn alpha_canonical(&self) -> Formula {
        let free = self.free_vars();
        let mut next = 0usize;
        let mut env = Vec::new();
        self.canon(&free, &mut next, &mut env)
    }

    fn canon(&self, free: &BTreeSet<Var>, next: &mut usize, env: &mut Vec<(Var, Var)>) -> Formula {
        let look = |v: &Var, env: &Vec<(Var, Var)>| {
            env.iter()
                .rev()
                .find(|(old, _)| old == v)
                .map(|(_, new)| new.clone())
                .unwrap_or_else(|| v.clone())
        };
        match self {
            Formula::Member(a, b) => Formula::Member(look(a, env), look(b, env)),
            Formula::Equal(a, b) => Formula::Equal(look(a, env), look(b, env)),
            Formula::Not(f) => Formula::Not(Box::new(f.canon(free, next, env))),
            Formula::And(f, g) => {
                let f = f.canon(free, next, env);
                Formula::And(Box::new(f), Box::new(g.canon(free, next, env)))
            }
            Formula::Or(f, g) => {
                let f = f.canon(free, next, env);
                Formula::Or(Box::new(f), Box::new(g.canon(free, next, env)))
            }
            Formula::Implies(f, g) => {
                let f = f.canon(free, next, env);
                Formula::Implies(Box::new(f), Box::new(g.canon(free, next, env)))
            }
            Formula::Iff(f, g) => {
                let f = f.canon(free, next, env);
                Formula::Iff(Box::new(f), Box::new(g.canon(free, next, env)))
            }
            Formula::Forall(b, f) | Formula::Exists(b, f) => {
                let name = loop {
                    let candidate = Var(format!("v{next}"));
                    *next += 1;
                    if !free.contains(&candidate) {
                        break candidate;
                    }
                };
                env.push((b.clone(), name.clone()));
                let body = f.canon(free, next, env);
                env.pop();
                match self {
                    Formula::Forall(..) => Formula::Forall(name, Box::new(body)),
                    _ => Formula::Exists(name, Box::new(body)),
                }
            }
        }
    }

    /// Number of quantifier nodes.
    pub fn binder_count(&self) -> usize {
        let own = usize::from(self.is_quantifier());
        own + self.children().iter().map(|c| c.binder_count()).sum::<usize>()
    }

    /// True if the formula contains `not (not ...)` anywhere.
    pub fn has_double_negation(&self) -> bool {
        match self {
            Formula::Not(f) if matches!(**f, Formula::Not(_)) => true,
            _ => self.children().iter().any(|c| c.has_double_negation()),
        }
    }

    /// Universal closure over the given variables, outermost first.
    pub fn forall_closure(self, vars: &[Var]) -> Formula {
        vars.iter()
            .rev()
            .fold(self, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
    }
}

fn swap(a: &Var, v: &Var, w: &Var) -> Var {
    if a == v {
        w.clone()
    } else {
        a.clone()
    }
}

/// A formula whose free variables are contained in `{compression_var}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredicateBody {
    formula: Formula,
    compression_var: Var,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("predicate body has free variables other than {compression_var}: {extra}")]
pub struct NotAlmostClosed {
    pub compression_var: Var,
    pub extra: String,
}

impl PredicateBody {
    pub fn new(formula: Formula, compression_var: Var) -> Result<PredicateBody, NotAlmostClosed> {
        let extra: Vec<String> = formula
            .free_vars()
            .into_iter()
            .filter(|v| *v != compression_var)
            .map(|v| v.to_string())
            .collect();
        if !extra.is_empty() {
            return Err(NotAlmostClosed {
                compression_var,
                extra: extra.join(", "),
            });
        }
        Ok(PredicateBody {
            formula,
            compression_var,
        })
    }

    /// Body over the conventional compression variable `x`.
    pub fn over_x(formula: Formula) -> Result<PredicateBody, NotAlmostClosed> {
        PredicateBody::new(formula, Var::x())
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn compression_var(&self) -> &Var {
        &self.compression_var
    }

    pub fn is_closed(&self) -> bool {
        !self.formula.free_vars().contains(&self.compression_var)
    }

    /// The canonical body text used as a cache and catalog key.
    pub fn canonical_text(&self) -> String {
        self.formula.alpha_canonical().to_string()
    }

    pub fn size(&self) -> usize {
        self.formula.size()
    }
}

impl fmt::Display for PredicateBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt(f)
    }
}
