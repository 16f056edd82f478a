//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence from tightest to loosest: `not`, `and`, `or`, `->`, `<->`.
//! `and`/`or` associate to the left, the arrows to the right. A quantifier
//! `forall v.` / `exists v.` scopes over the longest formula that follows.

use std::fmt;

use super::{is_identifier, Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A character that starts no token.
    UnexpectedChar(char),
    /// A token that does not fit the grammar at this point.
    UnexpectedToken { found: String, expected: &'static str },
    /// Input ended while more was expected.
    UnexpectedEnd { expected: &'static str },
    /// A keyword used where a variable name was required.
    ReservedWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found {found:?}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::ReservedWord(w) => {
                write!(f, "{w:?} is a keyword and cannot name a variable")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    In,
    Not,
    And,
    Or,
    Forall,
    Exists,
    Eq,
    Arrow,
    DArrow,
    Dot,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::In => "in".into(),
            Tok::Not => "not".into(),
            Tok::And => "and".into(),
            Tok::Or => "or".into(),
            Tok::Forall => "forall".into(),
            Tok::Exists => "exists".into(),
            Tok::Eq => "=".into(),
            Tok::Arrow => "->".into(),
            Tok::DArrow => "<->".into(),
            Tok::Dot => ".".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            b'.' => {
                out.push((start, Tok::Dot));
                i += 1;
            }
            b'=' => {
                out.push((start, Tok::Eq));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Tok::Arrow));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((start, Tok::DArrow));
                i += 3;
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "in" => Tok::In,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((offset, tok)) => ParseError {
                offset: *offset,
                kind: ParseErrorKind::UnexpectedToken {
                    found: tok.text(),
                    expected,
                },
            },
            None => ParseError {
                offset: self.end,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                debug_assert!(is_identifier(name));
                let v = Var::new(name.clone());
                self.pos += 1;
                Ok(v)
            }
            Some(tok) if tok.text().chars().all(|c| c.is_ascii_lowercase()) => {
                Err(ParseError {
                    offset: self.offset(),
                    kind: ParseErrorKind::ReservedWord(tok.text()),
                })
            }
            _ => Err(self.error("variable")),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.iff()?;
            return Ok(Formula::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            acc = Formula::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            acc = Formula::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let v = self.var()?;
                self.expect(Tok::Dot, "'.'")?;
                let body = Box::new(self.iff()?);
                Ok(if universal {
                    Formula::Forall(v, body)
                } else {
                    Formula::Exists(v, body)
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => {
                let lhs = self.var()?;
                let member = match self.peek() {
                    Some(Tok::In) => true,
                    Some(Tok::Eq) => false,
                    _ => return Err(self.error("'in' or '='")),
                };
                self.pos += 1;
                let rhs = self.var()?;
                Ok(if member {
                    Formula::Member(lhs, rhs)
                } else {
                    Formula::Equal(lhs, rhs)
                })
            }
            _ => Err(self.error("formula")),
        }
    }
}

/// Parses a formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(p.error("end of input"));
    }
    Ok(f)
}
