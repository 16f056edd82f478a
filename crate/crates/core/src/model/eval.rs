//! Direct truth evaluation, independent of the grounder.

use super::Model;
use crate::comprehension::Sentence;
use crate::formula::{Formula, Var};

fn value(env: &[(&Var, usize)], v: &Var) -> usize {
    env.iter()
        .rev()
        .find(|(name, _)| *name == v)
        .map(|(_, e)| *e)
        .expect("closed sentence")
}

fn holds<'a>(f: &'a Formula, model: &Model, env: &mut Vec<(&'a Var, usize)>) -> bool {
    match f {
        Formula::Member(a, b) => model.contains(value(env, a), value(env, b)),
        Formula::Equal(a, b) => value(env, a) == value(env, b),
        Formula::Not(g) => !holds(g, model, env),
        Formula::And(l, r) => holds(l, model, env) && holds(r, model, env),
        Formula::Or(l, r) => holds(l, model, env) || holds(r, model, env),
        Formula::Implies(l, r) => !holds(l, model, env) || holds(r, model, env),
        Formula::Iff(l, r) => holds(l, model, env) == holds(r, model, env),
        Formula::Forall(v, g) => (0..model.size()).all(|e| {
            env.push((v, e));
            let ok = holds(g, model, env);
            env.pop();
            ok
        }),
        Formula::Exists(v, g) => (0..model.size()).any(|e| {
            env.push((v, e));
            let ok = holds(g, model, env);
            env.pop();
            ok
        }),
    }
}

/// Truth of a closed sentence in a finite membership structure.
pub fn eval(sentence: &Sentence, model: &Model) -> bool {
    holds(sentence.formula(), model, &mut Vec::new())
}
