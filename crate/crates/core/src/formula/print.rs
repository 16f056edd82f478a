use std::fmt;

use super::Formula;

// Operands of binary connectives are parenthesized when they are themselves
// binary or quantified; `not` and quantifier bodies always carry parentheses
// except for directly nested quantifiers. The output reparses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Member(a, b) => write!(f, "{a} in {b}"),
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => write!(f, "not ({g})"),
            Formula::And(l, r) => binary(f, l, "and", r),
            Formula::Or(l, r) => binary(f, l, "or", r),
            Formula::Implies(l, r) => binary(f, l, "->", r),
            Formula::Iff(l, r) => binary(f, l, "<->", r),
            Formula::Forall(v, body) => quantifier(f, "forall", v, body),
            Formula::Exists(v, body) => quantifier(f, "exists", v, body),
        }
    }
}

fn binary(f: &mut fmt::Formatter<'_>, l: &Formula, op: &str, r: &Formula) -> fmt::Result {
    operand(f, l)?;
    write!(f, " {op} ")?;
    operand(f, r)
}

fn operand(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    if g.is_binary() || g.is_quantifier() {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

fn quantifier(
    f: &mut fmt::Formatter<'_>,
    keyword: &str,
    v: &super::Var,
    body: &Formula,
) -> fmt::Result {
    if body.is_quantifier() {
        write!(f, "{keyword} {v}. {body}")
    } else {
        write!(f, "{keyword} {v}. ({body})")
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::Formula;

    #[test]
    fn print_examples() {
        assert_eq!(
            Formula::negate(Formula::member("x", "x")).to_string(),
            "not (x in x)"
        );
        assert_eq!(Formula::equal("x", "x").to_string(), "x = x");
        assert_eq!(
            Formula::forall("y", Formula::member("y", "x")).to_string(),
            "forall y. (y in x)"
        );
    }

    #[test]
    fn print_nested_binaries() {
        let a = Formula::member("x", "x");
        let f = Formula::disj(
            Formula::conj(a.clone(), a.clone()),
            Formula::forall("y", a.clone()),
        );
        assert_eq!(f.to_string(), "(x in x and x in x) or (forall y. (x in x))");
    }
}
