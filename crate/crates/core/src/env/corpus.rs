//! Theorem corpora: the line format, loading, and seeded generation.
//!
//! ```text
//! # rules: R1,R2,R3,R4
//! t1: add(s(z),s(z)) = s(s(z))
//! ```
//!
//! Lines starting with `#` are comments. A `# rules:` comment selects the
//! rule set; without one the corpus uses `R1`..`R4`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rules::RuleSet;
use super::state::{Environment, Goal};
use super::term::Term;
use crate::error::{CorpusError, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem {
    pub id: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Theorem {
    pub fn goal(&self) -> Goal {
        Goal::new(self.lhs.clone(), self.rhs.clone())
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.id, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    pub rules: RuleSet,
    pub theorems: Vec<Theorem>,
}

impl Corpus {
    pub fn new(rules: RuleSet, theorems: Vec<Theorem>) -> Self {
        Corpus { rules, theorems }
    }

    pub fn env(&self) -> Environment {
        Environment::new(self.rules.clone())
    }

    pub fn parse(text: &str) -> Result<Corpus, CorpusError> {
        let mut rules = RuleSet::peano();
        let mut theorems = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(spec) = comment.trim().strip_prefix("rules:") {
                    rules = spec.parse().map_err(|e: ParseError| e.at_line(line_no))?;
                }
                continue;
            }
            let th = parse_theorem_line(line).map_err(|e| e.at_line(line_no))?;
            if !th.rhs.is_numeral() {
                return Err(CorpusError::TargetNotNormal {
                    id: th.id,
                    target: th.rhs.to_string(),
                    line: line_no,
                });
            }
            if let (Some(l), Some(r)) = (th.lhs.value(), th.rhs.value()) {
                if l != r {
                    return Err(CorpusError::Unsound {
                        id: th.id,
                        lhs_value: l,
                        rhs_value: r,
                        line: line_no,
                    });
                }
            }
            if !seen.insert(th.id.clone()) {
                return Err(CorpusError::DuplicateId { id: th.id, line: line_no });
            }
            theorems.push(th);
        }
        Ok(Corpus { rules, theorems })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.rules.is_peano() {
            writeln!(out, "# rules: {}", self.rules).unwrap();
        }
        for th in &self.theorems {
            writeln!(out, "{th}").unwrap();
        }
        out
    }
}

fn parse_theorem_line(line: &str) -> Result<Theorem, ParseError> {
    let (id, body) = line
        .split_once(':')
        .ok_or_else(|| ParseError::new(0, "expected `<id>: <term> = <term>`"))?;
    let id = id.trim();
    if id.is_empty() || id.chars().any(char::is_whitespace) {
        return Err(ParseError::new(0, format!("bad theorem id {id:?}")));
    }
    let (lhs, rhs) = body
        .split_once('=')
        .ok_or_else(|| ParseError::new(0, "expected `=` between terms"))?;
    Ok(Theorem { id: id.to_string(), lhs: lhs.parse()?, rhs: rhs.parse()? })
}

pub fn load_corpus(path: &Path) -> Result<Corpus, CorpusError> {
    let text = fs::read_to_string(path)
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    Corpus::parse(&text)
}

pub fn write_corpus(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    fs::write(path, corpus.render())
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Random theorems `lhs = value(lhs)` with `3 <= size(lhs) <= max_size`.
/// Every theorem is provable under `R1`..`R4`.
pub fn gen_corpus(count: usize, max_size: usize, seed: u64) -> Vec<Theorem> {
    assert!(count >= 1 && max_size >= 3, "gen_corpus needs count >= 1 and max_size >= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = count.to_string().len();
    (0..count)
        .map(|i| {
            let lhs = loop {
                let size = rng.gen_range(3..=max_size);
                let t = random_term(&mut rng, size);
                if !t.is_numeral() {
                    break t;
                }
            };
            let rhs = Term::numeral(lhs.value().expect("small terms do not overflow"));
            Theorem { id: format!("t{:0width$}", i + 1), lhs, rhs }
        })
        .collect()
}

/// A uniformly shaped random term of exactly `size` nodes.
pub fn random_term<R: Rng>(rng: &mut R, size: usize) -> Term {
    match size {
        0 | 1 => Term::Z,
        2 => Term::s(Term::Z),
        _ => match rng.gen_range(0..3) {
            0 => Term::s(random_term(rng, size - 1)),
            op => {
                let left = rng.gen_range(1..size - 1);
                let a = random_term(rng, left);
                let b = random_term(rng, size - 1 - left);
                if op == 1 {
                    Term::add(a, b)
                } else {
                    Term::mul(a, b)
                }
            }
        },
    }
}

/// Steps taken by leftmost-innermost normalization under `R1`..`R4`.
pub fn innermost_length(term: &Term) -> usize {
    let env = Environment::default();
    let mut goal = Goal::new(term.clone(), Term::Z);
    let mut steps = 0;
    loop {
        let tactics = env.enumerate_applicable(&goal);
        // first redex in pre-order with no redex strictly below it
        let Some(t) = tactics.iter().find(|a| {
            !tactics.iter().any(|b| {
                b.position.0.len() > a.position.0.len() && b.position.0.starts_with(&a.position.0)
            })
        }) else {
            return steps;
        };
        goal.current = env.rewrite(&goal, t).expect("enumerated tactic applies");
        steps += 1;
    }
}

/// Histograms over a corpus: lhs size and innermost normalization length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub by_size: BTreeMap<usize, usize>,
    pub by_length: BTreeMap<usize, usize>,
}

impl CorpusReport {
    pub fn of(theorems: &[Theorem]) -> Self {
        let mut r = CorpusReport::default();
        for th in theorems {
            *r.by_size.entry(th.lhs.size()).or_default() += 1;
            *r.by_length.entry(innermost_length(&th.lhs)).or_default() += 1;
        }
        r
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lhs size  count")?;
        for (k, v) in &self.by_size {
            writeln!(f, "{k:>8}  {v}")?;
        }
        writeln!(f, "length    count")?;
        for (k, v) in &self.by_length {
            writeln!(f, "{k:>8}  {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_example() {
        let c = Corpus::parse("# demo\nt1: add(s(z),s(z)) = s(s(z))\n").unwrap();
        assert_eq!(c.theorems.len(), 1);
        let th = &c.theorems[0];
        assert_eq!(th.id, "t1");
        assert_eq!(th.lhs, Term::add(Term::numeral(1), Term::numeral(1)));
        assert_eq!(th.rhs, Term::numeral(2));
        assert!(c.rules.is_peano());
    }

    #[test]
    fn rejects_duplicates_and_non_numerals() {
        let dup = Corpus::parse("a: s(z) = s(z)\na: z = z\n").unwrap_err();
        assert!(matches!(dup, CorpusError::DuplicateId { ref id, line: 2 } if id == "a"));
        assert!(dup.to_string().contains("\"a\""));
        let nn = Corpus::parse("b: add(z,z) = add(z,z)\n").unwrap_err();
        assert!(matches!(nn, CorpusError::TargetNotNormal { .. }));
        let bad = Corpus::parse("# ok\nc add(z,z) = z\n").unwrap_err();
        assert!(matches!(bad, CorpusError::Parse(ParseError { line: 2, .. })));
        let false_claim = Corpus::parse("d: add(s(z),z) = z\n").unwrap_err();
        assert!(matches!(false_claim, CorpusError::Unsound { .. }));
    }

    #[test]
    fn rules_header_round_trips() {
        let c = Corpus::new("R1,R2,R3,R4,R5".parse().unwrap(), gen_corpus(3, 6, 1));
        assert_eq!(Corpus::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn generation_is_seeded_and_sound() {
        assert_eq!(gen_corpus(1, 5, 7), gen_corpus(1, 5, 7));
        let ths = gen_corpus(200, 9, 3);
        for th in &ths {
            assert!((3..=9).contains(&th.lhs.size()));
            assert!(!th.lhs.is_numeral());
            assert_eq!(th.lhs.value(), th.rhs.value());
        }
        let ids: HashSet<_> = ths.iter().map(|t| &t.id).collect();
        assert_eq!(ids.len(), 200);
    }

    #[test]
    fn value_of_two_times_two() {
        let lhs: Term = "mul(s(s(z)),s(s(z)))".parse().unwrap();
        assert_eq!(Term::numeral(lhs.value().unwrap()), Term::numeral(4));
    }

    #[test]
    fn innermost_length_counts_steps() {
        assert_eq!(innermost_length(&"add(s(z),s(z))".parse().unwrap()), 2);
        assert_eq!(innermost_length(&"s(z)".parse().unwrap()), 0);
    }
}
