//! Refutation proofs and their line-oriented text form.
//!
//! ```text
//! <id>. <clause> [input]
//! <id>. <clause> [resolve <i> <j> <unifier>]
//! <id>. <clause> [factor <i> <unifier>]
//! ```
//!
//! Ids are 1-based. A unifier is written `{X0->t, X3->u}` and ranges over the
//! first parent's variables followed by the second parent's variables shifted
//! past the first parent's largest index.

use std::fmt;
use std::str::FromStr;

use super::{Clause, Literal, Pred, Term};

/// Variable bindings, fully applied and sorted by variable index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unifier(pub Vec<(u32, Term)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Input,
    /// Parents are 0-based step indices.
    Resolve(usize, usize, Unifier),
    Factor(usize, Unifier),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub clause: Clause,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for Unifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "X{v}->{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            write!(f, "{}. {} [", i + 1, step.clause)?;
            match &step.rule {
                Rule::Input => f.write_str("input")?,
                Rule::Resolve(a, b, u) => write!(f, "resolve {} {} {u}", a + 1, b + 1)?,
                Rule::Factor(a, u) => write!(f, "factor {} {u}", a + 1)?,
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("proof line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

struct TermParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn new(s: &'a str) -> Self {
        TermParser {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn done(&self) -> bool {
        self.pos == self.s.len()
    }

    fn term(&mut self) -> Result<Term, String> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.s[start..self.pos]).map_err(|e| e.to_string())?;
        if word.is_empty() {
            return Err(format!("expected term at column {}", start + 1));
        }
        if let Some(digits) = word.strip_prefix('X') {
            return digits
                .parse()
                .map(Term::Var)
                .map_err(|_| format!("bad variable {word:?}"));
        }
        if !word.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(format!("bad symbol {word:?}"));
        }
        let mut args = Vec::new();
        if self.s.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                match self.s.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err("unterminated argument list".into()),
                }
            }
        }
        Ok(Term::func(word, args))
    }
}

fn parse_term(s: &str) -> Result<Term, String> {
    let mut p = TermParser::new(s.trim());
    let t = p.term()?;
    if !p.done() {
        return Err(format!("trailing text in term {s:?}"));
    }
    Ok(t)
}

fn parse_literal(s: &str) -> Result<Literal, String> {
    let (positive, rest) = match s.strip_prefix('~') {
        Some(rest) => (false, rest),
        None => (true, s),
    };
    let (pred, (l, r)) = if let Some(parts) = rest.split_once(" in ") {
        (Pred::Member, parts)
    } else if let Some(parts) = rest.split_once(" = ") {
        (Pred::Equal, parts)
    } else {
        return Err(format!("bad literal {s:?}"));
    };
    Ok(Literal {
        positive,
        pred,
        left: parse_term(l)?,
        right: parse_term(r)?,
    })
}

fn parse_clause(s: &str) -> Result<Clause, String> {
    if s == "$false" {
        return Ok(Clause::empty());
    }
    let lits = s
        .split(" | ")
        .map(parse_literal)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Clause { literals: lits })
}

fn parse_unifier(s: &str) -> Result<Unifier, String> {
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("bad unifier {s:?}"))?;
    if inner.trim().is_empty() {
        return Ok(Unifier(Vec::new()));
    }
    let mut out = Vec::new();
    // Bindings are separated by ", "; terms themselves never contain spaces.
    for binding in inner.split(", ") {
        let (v, t) = binding
            .split_once("->")
            .ok_or_else(|| format!("bad binding {binding:?}"))?;
        let v = match parse_term(v)? {
            Term::Var(v) => v,
            _ => return Err(format!("binding target {v:?} is not a variable")),
        };
        out.push((v, parse_term(t)?));
    }
    Ok(Unifier(out))
}

fn parse_index(s: &str, line: usize) -> Result<usize, String> {
    let i: usize = s.parse().map_err(|_| format!("bad step reference {s:?}"))?;
    if i == 0 || i >= line {
        return Err(format!("step reference {i} does not precede step {line}"));
    }
    Ok(i - 1)
}

impl FromStr for Proof {
    type Err = ProofParseError;

    fn from_str(text: &str) -> Result<Proof, ProofParseError> {
        let mut steps = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let err = |message: String| ProofParseError { line, message };
            if raw.trim().is_empty() {
                continue;
            }
            let (id, rest) = raw.split_once(". ").ok_or_else(|| err("missing step id".into()))?;
            if id.parse::<usize>().ok() != Some(steps.len() + 1) {
                return Err(err(format!("expected step id {}", steps.len() + 1)));
            }
            let open = rest.rfind(" [").ok_or_else(|| err("missing rule".into()))?;
            let clause = parse_clause(&rest[..open]).map_err(err)?;
            let rule_text = rest[open + 2..]
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated rule".into()))?;
            let id = steps.len() + 1;
            let rule = if rule_text == "input" {
                Rule::Input
            } else if let Some(args) = rule_text.strip_prefix("resolve ") {
                let mut parts = args.splitn(3, ' ');
                let a = parse_index(parts.next().unwrap_or(""), id).map_err(err)?;
                let b = parse_index(parts.next().unwrap_or(""), id).map_err(err)?;
                let u = parse_unifier(parts.next().unwrap_or("")).map_err(err)?;
                Rule::Resolve(a, b, u)
            } else if let Some(args) = rule_text.strip_prefix("factor ") {
                let (a, u) = args.split_once(' ').ok_or_else(|| err("bad factor".into()))?;
                Rule::Factor(parse_index(a, id).map_err(err)?, parse_unifier(u).map_err(err)?)
            } else {
                return Err(err(format!("unknown rule {rule_text:?}")));
            };
            steps.push(ProofStep { clause, rule });
        }
        Ok(Proof { steps })
    }
}
