//! Rewrite rules. `R1`..`R4` define Peano addition and multiplication; the
//! remaining rules are value-preserving distractors that add branching.

use std::fmt;
use std::str::FromStr;

use super::term::Term;
use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `add(z, y) -> y`
    AddZero,
    /// `add(s(x), y) -> s(add(x, y))`
    AddSucc,
    /// `mul(z, y) -> z`
    MulZero,
    /// `mul(s(x), y) -> add(y, mul(x, y))`
    MulSucc,
    /// `add(x, y) -> add(y, x)`
    AddComm,
    /// `mul(x, y) -> mul(y, x)`
    MulComm,
    /// `t -> add(z, t)`, at the root only.
    ZeroPad,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::AddZero,
        Rule::AddSucc,
        Rule::MulZero,
        Rule::MulSucc,
        Rule::AddComm,
        Rule::MulComm,
        Rule::ZeroPad,
    ];

    pub fn id(self) -> u8 {
        match self {
            Rule::AddZero => 1,
            Rule::AddSucc => 2,
            Rule::MulZero => 3,
            Rule::MulSucc => 4,
            Rule::AddComm => 5,
            Rule::MulComm => 6,
            Rule::ZeroPad => 7,
        }
    }

    pub fn from_id(id: u8) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == id)
    }

    /// Rewrites `t` if the rule's left-hand side matches it. `at_root` gates
    /// root-only rules.
    pub fn rewrite(self, t: &Term, at_root: bool) -> Option<Term> {
        match (self, t) {
            (Rule::AddZero, Term::Add(a, b)) if **a == Term::Z => Some((**b).clone()),
            (Rule::AddSucc, Term::Add(a, b)) => match &**a {
                Term::S(x) => Some(Term::s(Term::add((**x).clone(), (**b).clone()))),
                _ => None,
            },
            (Rule::MulZero, Term::Mul(a, _)) if **a == Term::Z => Some(Term::Z),
            (Rule::MulSucc, Term::Mul(a, b)) => match &**a {
                Term::S(x) => Some(Term::add((**b).clone(), Term::mul((**x).clone(), (**b).clone()))),
                _ => None,
            },
            (Rule::AddComm, Term::Add(a, b)) if a != b => Some(Term::add((**b).clone(), (**a).clone())),
            (Rule::MulComm, Term::Mul(a, b)) if a != b => Some(Term::mul((**b).clone(), (**a).clone())),
            (Rule::ZeroPad, t) if at_root => Some(Term::add(Term::Z, t.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.id())
    }
}

impl FromStr for Rule {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .strip_prefix('R')
            .and_then(|n| n.parse::<u8>().ok())
            .and_then(Rule::from_id)
            .ok_or_else(|| ParseError::new(0, format!("unknown rule {s:?}")))
    }
}

/// The rules available to an environment, kept in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleSet(Vec<Rule>);

impl RuleSet {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut v: Vec<Rule> = rules.into_iter().collect();
        v.sort();
        v.dedup();
        RuleSet(v)
    }

    /// `R1`..`R4`.
    pub fn peano() -> Self {
        RuleSet::new([Rule::AddZero, Rule::AddSucc, Rule::MulZero, Rule::MulSucc])
    }

    pub fn with(&self, extra: Rule) -> Self {
        RuleSet::new(self.0.iter().copied().chain([extra]))
    }

    pub fn rules(&self) -> &[Rule] {
        &self.0
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.0.contains(&rule)
    }

    pub fn is_peano(&self) -> bool {
        *self == RuleSet::peano()
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::peano()
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for RuleSet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rules = s
            .split([',', ' '])
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Rule>, _>>()?;
        if rules.is_empty() {
            return Err(ParseError::new(0, "empty rule set"));
        }
        Ok(RuleSet::new(rules))
    }
}
