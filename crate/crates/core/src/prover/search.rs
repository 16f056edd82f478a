//! Given-clause saturation.
//!
//! The passive queue is ordered by (literal count, symbol weight, insertion
//! order), except that every fifth given clause is the oldest unprocessed
//! one, so long clauses are not starved. A selected clause is dropped if an active clause subsumes it;
//! otherwise its positive factors and its resolvents with every active
//! clause (itself included) are generated. Conclusions over the literal or
//! depth caps are discarded, which makes saturation lossy: running out of
//! work never counts as a consistency result.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use super::proof::{Proof, ProofStep, Rule, Unifier};
use super::unify::{unify, Subst};
use super::{Budget, Clause, Literal, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Inference conclusions produced, including discarded ones.
    pub generated: usize,
    /// Clauses selected as given clause.
    pub selected: usize,
    /// Some conclusion was dropped for exceeding a cap.
    pub lossy: bool,
    /// The wall-clock limit stopped the search.
    pub timed_out: bool,
}

#[derive(Clone, Debug)]
pub enum Refutation {
    Refuted { proof: Proof, stats: SearchStats },
    /// Budget ran out, or the (lossy) search space was used up.
    Exhausted { stats: SearchStats },
}

impl Refutation {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Refutation::Refuted { proof, .. } => Some(proof),
            Refutation::Exhausted { .. } => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            Refutation::Refuted { stats, .. } | Refutation::Exhausted { stats } => stats,
        }
    }
}

/// Every this many selections, the oldest passive clause is taken.
const AGE_PERIOD: usize = 5;

struct Kept {
    clause: Clause,
    rule: Rule,
}

struct Search<'b> {
    budget: &'b Budget,
    kept: Vec<Kept>,
    seen: HashSet<Clause>,
    passive: BinaryHeap<Reverse<(usize, usize, usize)>>,
    taken: Vec<bool>,
    oldest: usize,
    picks: usize,
    active: Vec<usize>,
    stats: SearchStats,
    started: Instant,
}

enum Step {
    Continue,
    Found(usize),
    OutOfBudget,
}

impl Search<'_> {
    fn push(&mut self, clause: Clause, rule: Rule) -> Option<usize> {
        if clause.is_tautology() || self.seen.contains(&clause) {
            return None;
        }
        let id = self.kept.len();
        self.seen.insert(clause.clone());
        self.passive
            .push(Reverse((clause.len(), clause.weight(), id)));
        self.kept.push(Kept { clause, rule });
        self.taken.push(false);
        Some(id)
    }

    fn conclude(&mut self, clause: Clause, rule: Rule) -> Step {
        self.stats.generated += 1;
        if clause.is_empty() {
            let id = self.kept.len();
            self.kept.push(Kept { clause, rule });
            return Step::Found(id);
        }
        if clause.len() > self.budget.max_clause_literals
            || clause.depth() > self.budget.max_term_depth
        {
            self.stats.lossy = true;
        } else if !self.active.iter().any(|&a| subsumes(&self.kept[a].clause, &clause)) {
            self.push(clause, rule);
        }
        if self.stats.generated >= self.budget.max_generated_clauses {
            return Step::OutOfBudget;
        }
        if let Some(limit) = self.budget.wall_clock {
            if self.stats.generated % 64 == 0 && self.started.elapsed() >= limit {
                self.stats.timed_out = true;
                return Step::OutOfBudget;
            }
        }
        Step::Continue
    }

    fn next_given(&mut self) -> Option<usize> {
        self.picks += 1;
        if self.picks % AGE_PERIOD == 0 {
            while self.oldest < self.taken.len() && self.taken[self.oldest] {
                self.oldest += 1;
            }
            if self.oldest < self.taken.len() {
                self.taken[self.oldest] = true;
                return Some(self.oldest);
            }
            return None;
        }
        while let Some(Reverse((_, _, id))) = self.passive.pop() {
            if !self.taken[id] {
                self.taken[id] = true;
                return Some(id);
            }
        }
        None
    }

    fn process(&mut self, given: usize) -> Step {
        let g = self.kept[given].clause.clone();

        // Positive factoring: merge two positive literals under their mgu.
        for i in 0..g.literals.len() {
            for j in i + 1..g.literals.len() {
                let (a, b) = (&g.literals[i], &g.literals[j]);
                if !(a.positive && b.positive && a.pred == b.pred) {
                    continue;
                }
                let mut s = Subst::with_capacity(g.var_span());
                if unify(&a.left, &b.left, &mut s) && unify(&a.right, &b.right, &mut s) {
                    let lits = g.literals.iter().map(|l| apply_lit(&s, l)).collect();
                    let step = self.conclude(
                        Clause::new(lits),
                        Rule::Factor(given, Unifier(s.bindings())),
                    );
                    if !matches!(step, Step::Continue) {
                        return step;
                    }
                }
            }
        }

        for k in 0..self.active.len() {
            let partner = self.active[k];
            let p = self.kept[partner].clause.clone();
            let shift = g.var_span();
            let p_shifted: Vec<Literal> = p
                .literals
                .iter()
                .map(|l| l.map_vars(&mut |v| Term::Var(v + shift)))
                .collect();
            let span = shift + p.var_span();
            for (i, a) in g.literals.iter().enumerate() {
                for (j, b) in p_shifted.iter().enumerate() {
                    if a.positive == b.positive || a.pred != b.pred {
                        continue;
                    }
                    let mut s = Subst::with_capacity(span);
                    if !(unify(&a.left, &b.left, &mut s) && unify(&a.right, &b.right, &mut s)) {
                        continue;
                    }
                    let resolved_a = apply_lit(&s, &g.literals[i]);
                    let resolved_b = apply_lit(&s, &p_shifted[j]);
                    let mut lits = Vec::new();
                    lits.extend(
                        g.literals
                            .iter()
                            .map(|l| apply_lit(&s, l))
                            .filter(|l| *l != resolved_a),
                    );
                    lits.extend(
                        p_shifted
                            .iter()
                            .map(|l| apply_lit(&s, l))
                            .filter(|l| *l != resolved_b),
                    );
                    let step = self.conclude(
                        Clause::new(lits),
                        Rule::Resolve(given, partner, Unifier(s.bindings())),
                    );
                    if !matches!(step, Step::Continue) {
                        return step;
                    }
                }
            }
        }
        Step::Continue
    }

    fn extract(&self, last: usize) -> Proof {
        let mut needed = vec![false; self.kept.len()];
        let mut stack = vec![last];
        while let Some(i) = stack.pop() {
            if needed[i] {
                continue;
            }
            needed[i] = true;
            match &self.kept[i].rule {
                Rule::Input => {}
                Rule::Factor(a, _) => stack.push(*a),
                Rule::Resolve(a, b, _) => {
                    stack.push(*a);
                    stack.push(*b);
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.kept.len()];
        let mut steps = Vec::new();
        for (i, k) in self.kept.iter().enumerate() {
            if !needed[i] {
                continue;
            }
            renumber[i] = steps.len();
            let rule = match &k.rule {
                Rule::Input => Rule::Input,
                Rule::Factor(a, u) => Rule::Factor(renumber[*a], u.clone()),
                Rule::Resolve(a, b, u) => Rule::Resolve(renumber[*a], renumber[*b], u.clone()),
            };
            steps.push(ProofStep {
                clause: k.clause.clone(),
                rule,
            });
        }
        Proof { steps }
    }
}

fn apply_lit(s: &Subst, l: &Literal) -> Literal {
    Literal {
        positive: l.positive,
        pred: l.pred,
        left: s.apply(&l.left),
        right: s.apply(&l.right),
    }
}

/// One-way matching: extends `binding` so that `pattern` instantiates to `target`.
fn match_term(pattern: &Term, target: &Term, binding: &mut Vec<(u32, Term)>) -> bool {
    match pattern {
        Term::Var(v) => match binding.iter().find(|(w, _)| w == v) {
            Some((_, t)) => t == target,
            None => {
                binding.push((*v, target.clone()));
                true
            }
        },
        Term::Func(f, fa) => match target {
            Term::Func(g, ga) if f == g && fa.len() == ga.len() => {
                fa.iter().zip(ga).all(|(p, t)| match_term(p, t, binding))
            }
            _ => false,
        },
    }
}

fn match_lits(pattern: &[Literal], target: &Clause, binding: &mut Vec<(u32, Term)>) -> bool {
    let Some((first, rest)) = pattern.split_first() else {
        return true;
    };
    for t in &target.literals {
        if t.positive != first.positive || t.pred != first.pred {
            continue;
        }
        let mark = binding.len();
        if match_term(&first.left, &t.left, binding)
            && match_term(&first.right, &t.right, binding)
            && match_lits(rest, target, binding)
        {
            return true;
        }
        binding.truncate(mark);
    }
    false
}

/// `c` subsumes `d` if some instance of `c` is a subset of `d` and `c` is no
/// longer than `d`.
pub(crate) fn subsumes(c: &Clause, d: &Clause) -> bool {
    c.len() <= d.len() && match_lits(&c.literals, d, &mut Vec::new())
}

/// Searches for a refutation of `clauses` within `budget`.
///
/// Deterministic for identical inputs and deterministic budgets.
pub fn refute(clauses: &[Clause], budget: &Budget) -> Refutation {
    let mut search = Search {
        budget,
        kept: Vec::new(),
        seen: HashSet::new(),
        passive: BinaryHeap::new(),
        taken: Vec::new(),
        oldest: 0,
        picks: 0,
        active: Vec::new(),
        stats: SearchStats::default(),
        started: Instant::now(),
    };
    for c in clauses {
        let c = Clause::new(c.literals.clone());
        if c.is_empty() {
            let proof = Proof {
                steps: vec![ProofStep {
                    clause: c,
                    rule: Rule::Input,
                }],
            };
            return Refutation::Refuted {
                proof,
                stats: search.stats,
            };
        }
        search.push(c, Rule::Input);
    }
    while let Some(given) = search.next_given() {
        let g = &search.kept[given].clause;
        if search.active.iter().any(|&a| subsumes(&search.kept[a].clause, g)) {
            continue;
        }
        search.stats.selected += 1;
        search.active.push(given);
        match search.process(given) {
            Step::Continue => {}
            Step::Found(last) => {
                let proof = search.extract(last);
                return Refutation::Refuted {
                    proof,
                    stats: search.stats,
                };
            }
            Step::OutOfBudget => break,
        }
    }
    Refutation::Exhausted {
        stats: search.stats,
    }
}
