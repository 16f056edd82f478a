//! Exhaustive generation of canonical predicate bodies.
//!
//! Bodies are built directly in alpha-canonical form: binders are named
//! `v0, v1, ...` in preorder, and atoms only mention `x` or binders in scope.
//! Each size class is sorted by printed text, so the stream is ordered by
//! `(node count, canonical text)`. `not (not ...)` is never produced.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, PredicateBody, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
}

impl Connective {
    pub const ALL: [Connective; 7] = [
        Connective::Not,
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Iff,
        Connective::Forall,
        Connective::Exists,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Connective::Not => "not",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Implies => "->",
            Connective::Iff => "<->",
            Connective::Forall => "forall",
            Connective::Exists => "exists",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Connective> {
        Connective::ALL.into_iter().find(|c| c.keyword() == s || format!("{c:?}").eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_nodes: usize,
    pub max_bound_vars: usize,
    pub connectives: BTreeSet<Connective>,
}

impl EnumConfig {
    pub fn new(max_nodes: usize, max_bound_vars: usize) -> EnumConfig {
        assert!(max_nodes >= 1, "max_nodes must be positive");
        EnumConfig {
            max_nodes,
            max_bound_vars,
            connectives: Connective::ALL.into_iter().collect(),
        }
    }

    pub fn with_connectives(mut self, connectives: impl IntoIterator<Item = Connective>) -> Self {
        self.connectives = connectives.into_iter().collect();
        self
    }
}

type Batch = Rc<Vec<(Formula, usize)>>;

struct Generator<'c> {
    config: &'c EnumConfig,
    memo: HashMap<(usize, Vec<Var>, usize, usize), Batch>,
}

impl Generator<'_> {
    fn allows(&self, c: Connective) -> bool {
        self.config.connectives.contains(&c)
    }

    /// Canonical formulas of exactly `size` nodes over `scope`, whose binders
    /// are numbered from `next` and number at most `budget`. Each comes with
    /// the count of binders it uses.
    fn gen(&mut self, size: usize, scope: &[Var], next: usize, budget: usize) -> Batch {
        let key = (size, scope.to_vec(), next, budget);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            for a in scope {
                for b in scope {
                    out.push((Formula::Member(a.clone(), b.clone()), 0));
                    out.push((Formula::Equal(a.clone(), b.clone()), 0));
                }
            }
        } else {
            if self.allows(Connective::Not) {
                for (g, used) in self.gen(size - 1, scope, next, budget).iter() {
                    if !matches!(g, Formula::Not(_)) {
                        out.push((Formula::Not(Box::new(g.clone())), *used));
                    }
                }
            }
            if budget > 0 {
                let name = Var::new(format!("v{next}"));
                let mut inner = scope.to_vec();
                inner.push(name.clone());
                let bodies = self.gen(size - 1, &inner, next + 1, budget - 1);
                for (allowed, universal) in [
                    (self.allows(Connective::Forall), true),
                    (self.allows(Connective::Exists), false),
                ] {
                    if !allowed {
                        continue;
                    }
                    for (g, used) in bodies.iter() {
                        let body = Box::new(g.clone());
                        let f = if universal {
                            Formula::Forall(name.clone(), body)
                        } else {
                            Formula::Exists(name.clone(), body)
                        };
                        out.push((f, used + 1));
                    }
                }
            }
            let binaries: Vec<Connective> = [
                Connective::And,
                Connective::Or,
                Connective::Implies,
                Connective::Iff,
            ]
            .into_iter()
            .filter(|c| self.allows(*c))
            .collect();
            if !binaries.is_empty() && size >= 3 {
                for left_size in 1..=size - 2 {
                    let right_size = size - 1 - left_size;
                    let lefts = self.gen(left_size, scope, next, budget);
                    for (l, lu) in lefts.iter() {
                        let rights = self.gen(right_size, scope, next + lu, budget - lu);
                        for (r, ru) in rights.iter() {
                            for c in &binaries {
                                let (l, r) = (Box::new(l.clone()), Box::new(r.clone()));
                                let f = match c {
                                    Connective::And => Formula::And(l, r),
                                    Connective::Or => Formula::Or(l, r),
                                    Connective::Implies => Formula::Implies(l, r),
                                    _ => Formula::Iff(l, r),
                                };
                                out.push((f, lu + ru));
                            }
                        }
                    }
                }
            }
        }
        let batch = Rc::new(out);
        self.memo.insert(key, batch.clone());
        batch
    }
}

/// Lazily produced stream of canonical bodies; one size class is
/// materialised at a time.
pub struct Enumeration {
    config: EnumConfig,
    size: usize,
    pending: std::vec::IntoIter<PredicateBody>,
}

impl Iterator for Enumeration {
    type Item = PredicateBody;

    fn next(&mut self) -> Option<PredicateBody> {
        loop {
            if let Some(b) = self.pending.next() {
                return Some(b);
            }
            if self.size >= self.config.max_nodes {
                return None;
            }
            self.size += 1;
            self.pending = size_class(&self.config, self.size).into_iter();
        }
    }
}

fn size_class(config: &EnumConfig, size: usize) -> Vec<PredicateBody> {
    let mut generator = Generator {
        config,
        memo: HashMap::new(),
    };
    let batch = generator.gen(size, &[Var::x()], 0, config.max_bound_vars);
    let mut keyed: Vec<(String, Formula)> = batch
        .iter()
        .map(|(f, _)| {
            debug_assert_eq!(f, &f.alpha_canonical());
            (f.to_string(), f.clone())
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed
        .into_iter()
        .map(|(_, f)| PredicateBody::over_x(f).expect("generated over x"))
        .collect()
}

/// Every canonical body within the limits, ordered by `(size, text)`.
pub fn enumerate(config: &EnumConfig) -> Enumeration {
    Enumeration {
        config: config.clone(),
        size: 0,
        pending: Vec::new().into_iter(),
    }
}

/// AST node count.
pub fn size(f: &Formula) -> usize {
    f.size()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(config: &EnumConfig) -> Vec<String> {
        enumerate(config).map(|b| b.to_string()).collect()
    }

    #[test]
    fn atoms_over_x() {
        assert_eq!(texts(&EnumConfig::new(1, 2)), vec!["x = x", "x in x"]);
    }

    #[test]
    fn size_two_negations() {
        let all = texts(&EnumConfig::new(2, 0));
        assert_eq!(all, vec!["x = x", "x in x", "not (x = x)", "not (x in x)"]);
    }

    #[test]
    fn quantifier_introduces_bound_atoms() {
        let all = texts(&EnumConfig::new(2, 1));
        // 2 atoms, 2 negations, 2 quantifiers x 8 atoms over {x, v0}.
        assert_eq!(all.len(), 2 + 2 + 16);
        assert!(all.contains(&"forall v0. (v0 in x)".to_string()));
    }

    #[test]
    fn whitelist_restricts_connectives() {
        let config = EnumConfig::new(3, 0).with_connectives([Connective::Not, Connective::And]);
        let all = texts(&config);
        assert!(all.iter().all(|t| !t.contains(" or ") && !t.contains("->")));
        assert!(all.contains(&"x in x and x = x".to_string()));
    }

    #[test]
    fn strictly_increasing_keys() {
        let bodies: Vec<PredicateBody> = enumerate(&EnumConfig::new(4, 1)).collect();
        for w in bodies.windows(2) {
            let a = (w[0].size(), w[0].to_string());
            let b = (w[1].size(), w[1].to_string());
            assert!(a < b, "{a:?} !< {b:?}");
        }
    }

    #[test]
    fn size_examples() {
        let f = crate::formula::parse("forall y. (y in x <-> y = y)").unwrap();
        assert_eq!(size(&f), 4);
    }
}
