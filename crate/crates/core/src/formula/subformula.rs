use std::collections::HashSet;

use super::{Formula, PredicateBody, Var};

/// Every distinct subformula occurrence of `p`, turned into a predicate body.
///
/// The compression variable stays free when it occurs free in the
/// subformula and is not bound by an enclosing quantifier of `p`; every other
/// free variable is universally closed (outermost = first occurrence).
/// Results are deduplicated by alpha-canonical form and listed in preorder,
/// so `p` itself comes first.
pub fn designated_subformulas(p: &PredicateBody) -> Vec<PredicateBody> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    walk(
        p.formula(),
        p.compression_var(),
        &mut Vec::new(),
        &mut seen,
        &mut out,
    );
    out
}

fn walk<'a>(
    f: &'a Formula,
    x: &Var,
    enclosing: &mut Vec<&'a Var>,
    seen: &mut HashSet<Formula>,
    out: &mut Vec<PredicateBody>,
) {
    let x_is_outer = !enclosing.contains(&x);
    let closing: Vec<Var> = f
        .free_vars_ordered()
        .into_iter()
        .filter(|v| !(v == x && x_is_outer))
        .collect();
    let candidate = f.clone().forall_closure(&closing);
    if seen.insert(candidate.alpha_canonical()) {
        out.push(
            PredicateBody::new(candidate, x.clone())
                .expect("closure leaves only the compression variable free"),
        );
    }
    match f {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            enclosing.push(v);
            walk(body, x, enclosing, seen, out);
            enclosing.pop();
        }
        _ => {
            for c in f.children() {
                walk(c, x, enclosing, seen, out);
            }
        }
    }
}
