//! Peano terms over `z`, `s`, `add` and `mul`, with prefix syntax.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// A Peano-arithmetic expression. Arity is fixed by the constructor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Z,
    S(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// Path from the root to a subterm: child indices, empty for the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u8>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: u8) -> Self {
        let mut path = self.0.clone();
        path.push(index);
        Position(path)
    }

    /// True when neither path is a prefix of the other.
    pub fn is_disjoint(&self, other: &Position) -> bool {
        !self.0.starts_with(&other.0) && !other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{idx}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Position {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| ParseError::new(0, format!("position must be bracketed: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Position::root());
        }
        inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u8>()
                    .map_err(|_| ParseError::new(0, format!("bad child index {p:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl Term {
    pub fn s(t: Term) -> Term {
        Term::S(Box::new(t))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    /// The numeral `s^n(z)`.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Z, |t, _| Term::s(t))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Z => 1,
            Term::S(a) => 1 + a.size(),
            Term::Add(a, b) | Term::Mul(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Arithmetic value, `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        match self {
            Term::Z => Some(0),
            Term::S(a) => a.value()?.checked_add(1),
            Term::Add(a, b) => a.value()?.checked_add(b.value()?),
            Term::Mul(a, b) => a.value()?.checked_mul(b.value()?),
        }
    }

    /// True when the term is built from `z` and `s` only.
    pub fn is_numeral(&self) -> bool {
        let mut t = self;
        loop {
            match t {
                Term::Z => return true,
                Term::S(a) => t = a,
                _ => return false,
            }
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Z => vec![],
            Term::S(a) => vec![a],
            Term::Add(a, b) | Term::Mul(a, b) => vec![a, b],
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        pos.0.iter().try_fold(self, |t, &i| t.children().get(i as usize).copied())
    }

    /// Copy of `self` with the subterm at `pos` replaced, `None` if the path is invalid.
    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Option<Term> {
        self.replace_path(&pos.0, replacement)
    }

    fn replace_path(&self, path: &[u8], replacement: Term) -> Option<Term> {
        let Some((&head, rest)) = path.split_first() else {
            return Some(replacement);
        };
        match (self, head) {
            (Term::S(a), 0) => Some(Term::s(a.replace_path(rest, replacement)?)),
            (Term::Add(a, b), 0) => Some(Term::add(a.replace_path(rest, replacement)?, (**b).clone())),
            (Term::Add(a, b), 1) => Some(Term::add((**a).clone(), b.replace_path(rest, replacement)?)),
            (Term::Mul(a, b), 0) => Some(Term::mul(a.replace_path(rest, replacement)?, (**b).clone())),
            (Term::Mul(a, b), 1) => Some(Term::mul((**a).clone(), b.replace_path(rest, replacement)?)),
            _ => None,
        }
    }

    /// All positions in pre-order (node before its children, left to right).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<u8>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        for (i, c) in self.children().into_iter().enumerate() {
            path.push(i as u8);
            c.collect_positions(path, out);
            path.pop();
        }
    }

    /// Node counts `(add, mul, s)`.
    pub fn op_counts(&self) -> (usize, usize, usize) {
        let own = match self {
            Term::Z => (0, 0, 0),
            Term::S(_) => (0, 0, 1),
            Term::Add(..) => (1, 0, 0),
            Term::Mul(..) => (0, 1, 0),
        };
        self.children().into_iter().fold(own, |acc, c| {
            let (a, m, s) = c.op_counts();
            (acc.0 + a, acc.1 + m, acc.2 + s)
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Z => f.write_str("z"),
            Term::S(a) => write!(f, "s({a})"),
            Term::Add(a, b) => write!(f, "add({a},{b})"),
            Term::Mul(a, b) => write!(f, "mul({a},{b})"),
        }
    }
}

impl FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = TermParser { src: s.as_bytes(), pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }
}

struct TermParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TermParser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::new(0, format!("{msg} at column {}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> &[u8] {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        match self.ident() {
            b"z" => Ok(Term::Z),
            b"s" => {
                self.expect(b'(')?;
                let a = self.term()?;
                self.expect(b')')?;
                Ok(Term::s(a))
            }
            name @ (b"add" | b"mul") => {
                let is_add = name == b"add";
                self.expect(b'(')?;
                let a = self.term()?;
                self.expect(b',')?;
                let b = self.term()?;
                self.expect(b')')?;
                Ok(if is_add { Term::add(a, b) } else { Term::mul(a, b) })
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.err("expected one of z, s, add, mul"))
            }
        }
    }
}
