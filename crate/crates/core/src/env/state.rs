//! Proof states, tactics, and the transition function.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::rules::{Rule, RuleSet};
use super::term::{Position, Term};
use crate::error::ParseError;
use crate::scalar::Scalar;

/// One rewrite: a rule applied at a position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tactic {
    pub rule: Rule,
    pub position: Position,
}

impl Tactic {
    pub fn new(rule: Rule, position: Position) -> Self {
        Tactic { rule, position }
    }

    pub fn at_root(rule: Rule) -> Self {
        Tactic::new(rule, Position::root())
    }
}

/// Rendered as `R2@[0,1]`.
impl fmt::Display for Tactic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.rule, self.position)
    }
}

impl FromStr for Tactic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (rule, pos) = s
            .split_once('@')
            .ok_or_else(|| ParseError::new(0, format!("tactic must look like R1@[0]: {s:?}")))?;
        Ok(Tactic::new(rule.parse()?, pos.parse()?))
    }
}

/// The goal `current ?= target`. The target is shared by every state of a search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Goal {
    pub current: Term,
    pub target: Arc<Term>,
}

impl Goal {
    pub fn new(current: Term, target: Term) -> Self {
        Goal { current, target: Arc::new(target) }
    }

    pub fn is_proved(&self) -> bool {
        self.current == *self.target
    }

    /// Canonical `current|target` rendering. Injective on goals.
    pub fn fingerprint(&self) -> String {
        format!("{}|{}", self.current, self.target)
    }

    pub fn from_fingerprint(fp: &str) -> Result<Goal, ParseError> {
        let (cur, tgt) = fp
            .split_once('|')
            .ok_or_else(|| ParseError::new(0, format!("fingerprint lacks '|': {fp:?}")))?;
        Ok(Goal::new(cur.parse()?, tgt.parse()?))
    }
}

/// A goal plus the lineage that produced it.
#[derive(Clone, Debug)]
pub struct ProofState<F: Scalar = f64> {
    pub goal: Goal,
    pub depth: usize,
    pub parent: Option<Arc<ProofState<F>>>,
    pub applied_tactic: Option<Tactic>,
    pub cum_logp: F,
}

impl<F: Scalar> ProofState<F> {
    pub fn root(goal: Goal) -> Self {
        ProofState { goal, depth: 0, parent: None, applied_tactic: None, cum_logp: F::zero() }
    }

    pub fn current(&self) -> &Term {
        &self.goal.current
    }

    pub fn target(&self) -> &Term {
        &self.goal.target
    }

    pub fn fingerprint(&self) -> String {
        self.goal.fingerprint()
    }

    /// Tactics applied from the root to reach this state, oldest first.
    pub fn history(&self) -> Vec<Tactic> {
        let mut out = Vec::with_capacity(self.depth);
        let mut cur = Some(self);
        while let Some(s) = cur {
            if let Some(t) = &s.applied_tactic {
                out.push(t.clone());
            }
            cur = s.parent.as_deref();
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    NoMatch,
    BadPosition,
    UnknownRule,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailReason::NoMatch => "no-match",
            FailReason::BadPosition => "bad-position",
            FailReason::UnknownRule => "unknown-rule",
        })
    }
}

#[derive(Clone, Debug)]
pub enum TacticOutcome<F: Scalar = f64> {
    NewState(ProofState<F>),
    Proved,
    Failed(FailReason),
}

impl<F: Scalar> TacticOutcome<F> {
    pub fn is_proved(&self) -> bool {
        matches!(self, TacticOutcome::Proved)
    }
}

/// A rewriting environment over a fixed rule set. Stateless; every
/// operation is a pure function of its arguments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Environment {
    rules: RuleSet,
}

impl Environment {
    pub fn new(rules: RuleSet) -> Self {
        Environment { rules }
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Rewrites the goal's current term once, without lineage.
    pub fn rewrite(&self, goal: &Goal, tactic: &Tactic) -> Result<Term, FailReason> {
        if !self.rules.contains(tactic.rule) {
            return Err(FailReason::UnknownRule);
        }
        let sub = goal.current.subterm(&tactic.position).ok_or(FailReason::BadPosition)?;
        let rewritten =
            tactic.rule.rewrite(sub, tactic.position.is_root()).ok_or(FailReason::NoMatch)?;
        Ok(goal
            .current
            .replace_at(&tactic.position, rewritten)
            .expect("position was validated by subterm lookup"))
    }

    pub fn apply_tactic<F: Scalar>(
        &self,
        state: &Arc<ProofState<F>>,
        tactic: &Tactic,
    ) -> TacticOutcome<F> {
        match self.rewrite(&state.goal, tactic) {
            Err(reason) => TacticOutcome::Failed(reason),
            Ok(term) if term == *state.goal.target => TacticOutcome::Proved,
            Ok(term) => TacticOutcome::NewState(ProofState {
                goal: Goal { current: term, target: Arc::clone(&state.goal.target) },
                depth: state.depth + 1,
                parent: Some(Arc::clone(state)),
                applied_tactic: Some(tactic.clone()),
                cum_logp: state.cum_logp,
            }),
        }
    }

    /// Every matching `(rule, position)`: positions in pre-order, then rule id.
    pub fn enumerate_applicable(&self, goal: &Goal) -> Vec<Tactic> {
        let mut out = Vec::new();
        for pos in goal.current.positions() {
            let sub = goal.current.subterm(&pos).expect("enumerated position exists");
            for &rule in self.rules.rules() {
                if rule.rewrite(sub, pos.is_root()).is_some() {
                    out.push(Tactic::new(rule, pos.clone()));
                }
            }
        }
        out
    }

    /// One-step successor goals with the tactic producing each, in enumeration order.
    pub fn successors(&self, goal: &Goal) -> Vec<(Tactic, Goal)> {
        self.enumerate_applicable(goal)
            .into_iter()
            .map(|t| {
                let term = self.rewrite(goal, &t).expect("enumerated tactic applies");
                (t, Goal { current: term, target: Arc::clone(&goal.target) })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goal(cur: &str, tgt: &str) -> Goal {
        Goal::new(cur.parse().unwrap(), tgt.parse().unwrap())
    }

    fn root(cur: &str, tgt: &str) -> Arc<ProofState> {
        Arc::new(ProofState::root(goal(cur, tgt)))
    }

    fn tac(s: &str) -> Tactic {
        s.parse().unwrap()
    }

    #[test]
    fn apply_r2_at_root() {
        let env = Environment::default();
        let st = root("add(s(z),s(z))", "s(s(z))");
        match env.apply_tactic(&st, &tac("R2@[]")) {
            TacticOutcome::NewState(next) => {
                assert_eq!(next.fingerprint(), "s(add(z,s(z)))|s(s(z))");
                assert_eq!(next.depth, 1);
                assert_eq!(next.history(), vec![tac("R2@[]")]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn apply_r1_proves() {
        let env = Environment::default();
        let st = root("s(add(z,s(z)))", "s(s(z))");
        assert!(env.apply_tactic(&st, &tac("R1@[0]")).is_proved());
    }

    #[test]
    fn failures_leave_state_untouched() {
        let env = Environment::default();
        let st = root("add(s(z),s(z))", "s(s(z))");
        let before = st.fingerprint();
        assert!(matches!(
            env.apply_tactic(&st, &tac("R1@[]")),
            TacticOutcome::Failed(FailReason::NoMatch)
        ));
        assert!(matches!(
            env.apply_tactic(&st, &tac("R2@[0,0,0,0]")),
            TacticOutcome::Failed(FailReason::BadPosition)
        ));
        assert!(matches!(
            env.apply_tactic(&st, &tac("R5@[]")),
            TacticOutcome::Failed(FailReason::UnknownRule)
        ));
        assert_eq!(st.fingerprint(), before);
        assert_eq!(FailReason::NoMatch.to_string(), "no-match");
        assert_eq!(FailReason::BadPosition.to_string(), "bad-position");
    }

    #[test]
    fn enumerate_examples() {
        let env = Environment::default();
        assert_eq!(env.enumerate_applicable(&goal("add(s(z),s(z))", "s(s(z))")), vec![tac("R2@[]")]);
        assert_eq!(env.enumerate_applicable(&goal("mul(z,s(z))", "z")), vec![tac("R3@[]")]);
        let multi = env.enumerate_applicable(&goal("add(add(z,z),mul(z,z))", "z"));
        assert_eq!(multi, vec![tac("R1@[0]"), tac("R3@[1]")]);
        assert!(env.enumerate_applicable(&goal("s(z)", "s(s(z))")).is_empty());
    }

    #[test]
    fn fingerprints() {
        assert_eq!(goal("add(s(z),z)", "s(z)").fingerprint(), "add(s(z),z)|s(z)");
        let g = goal("mul(s(z),add(z,z))", "z");
        assert_eq!(Goal::from_fingerprint(&g.fingerprint()).unwrap(), g);
        assert!(Goal::from_fingerprint("z").is_err());
        let a = ProofState::<f64>::root(g.clone());
        let b = ProofState::<f64> { depth: 3, ..a.clone() };
        assert_eq!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn tactic_rendering() {
        assert_eq!(tac("R2@[0,1]").to_string(), "R2@[0,1]");
        assert_eq!(Tactic::at_root(Rule::MulSucc).to_string(), "R4@[]");
        assert!("R2[0]".parse::<Tactic>().is_err());
    }
}
