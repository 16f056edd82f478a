use super::Term;

/// Triangular substitution over variable indices.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    bindings: Vec<Option<Term>>,
}

impl Subst {
    pub fn with_capacity(vars: u32) -> Subst {
        Subst {
            bindings: vec![None; vars as usize],
        }
    }

    fn get(&self, v: u32) -> Option<&Term> {
        self.bindings.get(v as usize).and_then(Option::as_ref)
    }

    fn bind(&mut self, v: u32, t: Term) {
        let i = v as usize;
        if i >= self.bindings.len() {
            self.bindings.resize(i + 1, None);
        }
        self.bindings[i] = Some(t);
    }

    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.get(*v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Fully applies the substitution.
    pub fn apply(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::Func(s, args) => Term::Func(s.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// Bound variables with their fully applied images, by variable index.
    pub fn bindings(&self) -> Vec<(u32, Term)> {
        self.bindings
            .iter()
            .enumerate()
            .filter_map(|(v, b)| b.as_ref().map(|_| (v as u32, self.apply(&Term::Var(v as u32)))))
            .collect()
    }

    fn occurs(&self, v: u32, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::Func(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }
}

/// Extends `subst` to a most general unifier of `a` and `b`, with occurs
/// check. On failure `subst` may hold partial bindings and should be dropped.
pub fn unify(a: &Term, b: &Term, subst: &mut Subst) -> bool {
    let a = subst.walk(a).clone();
    let b = subst.walk(b).clone();
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if subst.occurs(*x, t) {
                false
            } else {
                subst.bind(*x, t.clone());
                true
            }
        }
        (Term::Func(f, fa), Term::Func(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(s, t)| unify(s, t, subst))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Term {
        Term::Var(i)
    }

    fn f(args: Vec<Term>) -> Term {
        Term::func("f", args)
    }

    #[test]
    fn binds_variable() {
        let mut s = Subst::default();
        assert!(unify(&x(0), &f(vec![x(1)]), &mut s));
        assert_eq!(s.apply(&x(0)), f(vec![x(1)]));
    }

    #[test]
    fn occurs_check_rejects_cycle() {
        let mut s = Subst::default();
        assert!(!unify(&x(0), &f(vec![x(0)]), &mut s));
        let mut s = Subst::default();
        // X0 = X1, then X1 = f(X0) would close a cycle through the binding.
        assert!(unify(&x(0), &x(1), &mut s));
        assert!(!unify(&x(1), &f(vec![x(0)]), &mut s));
    }

    #[test]
    fn symbol_clash() {
        let mut s = Subst::default();
        assert!(!unify(&Term::constant("a"), &Term::constant("b"), &mut s));
        let mut s = Subst::default();
        assert!(!unify(&f(vec![x(0)]), &Term::func("f", vec![x(0), x(1)]), &mut s));
    }

    #[test]
    fn chained_bindings_resolve_fully() {
        let mut s = Subst::default();
        assert!(unify(
            &Term::func("g", vec![x(0), x(1)]),
            &Term::func("g", vec![x(1), Term::constant("a")]),
            &mut s
        ));
        assert_eq!(
            s.bindings(),
            vec![(0, Term::constant("a")), (1, Term::constant("a"))]
        );
    }
}
