//! Exact remaining steps by A* search over the rewrite graph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::RwLock;

use super::{InputMode, Prediction, Predictor, PredictorQuery};
use crate::env::{Environment, Goal, Rule, RuleSet, Term};
use crate::error::PredictError;

pub const DEFAULT_SIZE_CAP: usize = 256;
pub const DEFAULT_STATE_LIMIT: usize = 200_000;

/// Ground-truth remaining steps. Distances found along shortest paths are
/// memoized, so repeated queries from one search are cheap.
#[derive(Debug)]
pub struct ExactOracle {
    env: Environment,
    size_cap: usize,
    state_limit: usize,
    cache: RwLock<HashMap<Goal, usize>>,
}

impl ExactOracle {
    pub fn new(env: Environment) -> Self {
        ExactOracle::with_limits(env, DEFAULT_SIZE_CAP, DEFAULT_STATE_LIMIT)
    }

    pub fn with_limits(env: Environment, size_cap: usize, state_limit: usize) -> Self {
        ExactOracle { env, size_cap, state_limit, cache: RwLock::new(HashMap::new()) }
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn size_cap(&self) -> usize {
        self.size_cap
    }

    /// Minimal number of tactics from `goal` to a proved state.
    pub fn distance(&self, goal: &Goal) -> Result<usize, PredictError> {
        if goal.is_proved() {
            return Ok(0);
        }
        let unavailable = |detail: &str| PredictError::OracleUnavailable {
            state: goal.fingerprint(),
            detail: detail.to_string(),
        };
        if goal.current.size() > self.size_cap {
            return Err(unavailable(&format!("term size {} exceeds cap {}", goal.current.size(), self.size_cap)));
        }
        if let Some(&d) = self.cache.read().expect("oracle cache poisoned").get(goal) {
            return Ok(d);
        }

        let cache = self.cache.read().expect("oracle cache poisoned");
        let numeral_target = goal.target.is_numeral();
        // exact when memoized, otherwise the admissible bound
        let estimate = |g: &Goal| -> (usize, bool) {
            if g.is_proved() {
                (0, true)
            } else if let Some(&d) = cache.get(g) {
                (d, true)
            } else if numeral_target {
                (lower_bound(&g.current, self.env.rules()), false)
            } else {
                (0, false)
            }
        };

        // A* over terms; nodes[i] = (term, parent, steps from `goal`, estimate, estimate exact)
        let mut nodes: Vec<(Term, usize, usize, usize, bool)> = Vec::new();
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut closed: Vec<bool> = Vec::new();
        // ties prefer deeper nodes, then older ones
        let mut open: BinaryHeap<(Reverse<usize>, usize, Reverse<usize>)> = BinaryHeap::new();
        let (h0, _) = estimate(goal);
        nodes.push((goal.current.clone(), usize::MAX, 0, h0, false));
        index.insert(goal.current.clone(), 0);
        closed.push(false);
        open.push((Reverse(h0), 0, Reverse(0)));
        let mut any_successor = false;
        let mut found = None;

        while let Some((_, g, Reverse(i))) = open.pop() {
            if closed[i] || g > nodes[i].2 {
                continue;
            }
            if nodes[i].4 {
                found = Some(i);
                break;
            }
            closed[i] = true;
            if nodes[i].0.size() > self.size_cap {
                continue;
            }
            let here = Goal { current: nodes[i].0.clone(), target: goal.target.clone() };
            for (_, next) in self.env.successors(&here) {
                any_successor = true;
                let d = g + 1;
                match index.get(&next.current) {
                    Some(&j) if nodes[j].2 <= d => {}
                    Some(&j) => {
                        nodes[j].1 = i;
                        nodes[j].2 = d;
                        closed[j] = false;
                        open.push((Reverse(d + nodes[j].3), d, Reverse(j)));
                    }
                    None => {
                        let (h, exact) = estimate(&next);
                        let j = nodes.len();
                        index.insert(next.current.clone(), j);
                        nodes.push((next.current, i, d, h, exact));
                        closed.push(false);
                        open.push((Reverse(d + h), d, Reverse(j)));
                        if nodes.len() > self.state_limit {
                            return Err(unavailable(&format!("explored more than {} states", self.state_limit)));
                        }
                    }
                }
            }
        }
        drop(cache);

        let Some(mut at) = found else {
            return Err(unavailable(if any_successor { "no proof reachable" } else { "dead-end" }));
        };
        let total = nodes[at].2 + nodes[at].3;
        let mut remaining = nodes[at].3;
        let mut cache = self.cache.write().expect("oracle cache poisoned");
        loop {
            let g = Goal { current: nodes[at].0.clone(), target: goal.target.clone() };
            if !g.is_proved() {
                cache.insert(g, remaining);
            }
            if at == 0 {
                break;
            }
            at = nodes[at].1;
            remaining += 1;
        }
        debug_assert_eq!(remaining, total);
        Ok(total)
    }
}

/// Lower bound on the steps from `term` to any numeral. Every add outside a
/// multiplication needs its own `R1`, every outermost multiplication its own
/// `R3`, and no rule lowers the bound by more than one per step.
///
/// Without `AddComm`, each successor symbol must also cross every such add
/// that holds it in its left argument. Without `MulComm`, each successor in
/// the left argument of an outermost multiplication costs an `R4` and the
/// `R1` for the add it creates, and with no `AddComm` either, the copy of
/// the right argument it makes must have its successors cross that add.
pub fn lower_bound(term: &Term, rules: &RuleSet) -> usize {
    let cross = !rules.contains(Rule::AddComm);
    let unfold = !rules.contains(Rule::MulComm);
    fn succs_outside_mul(t: &Term) -> usize {
        match t {
            Term::Z | Term::Mul(..) => 0,
            Term::S(x) => 1 + succs_outside_mul(x),
            Term::Add(a, b) => succs_outside_mul(a) + succs_outside_mul(b),
        }
    }
    fn walk(t: &Term, left_of: usize, cross: bool, unfold: bool) -> usize {
        match t {
            Term::Z => 0,
            Term::S(x) => (if cross { left_of } else { 0 }) + walk(x, left_of, cross, unfold),
            Term::Add(a, b) => 1 + walk(a, left_of + 1, cross, unfold) + walk(b, left_of, cross, unfold),
            Term::Mul(a, b) if unfold => {
                let unfolds = succs_outside_mul(a);
                let copies = if cross { unfolds * succs_outside_mul(b) } else { 0 };
                1 + 2 * unfolds + copies
            }
            Term::Mul(..) => 1,
        }
    }
    walk(term, 0, cross, unfold)
}

impl Predictor for ExactOracle {
    fn predict(&self, query: &PredictorQuery) -> Result<Prediction, PredictError> {
        let goal = Goal::from_fingerprint(&query.state_fp)
            .map_err(|_| PredictError::BadFingerprint(query.state_fp.clone()))?;
        self.distance(&goal).map(|d| Prediction::new(d as f64))
    }

    fn input_mode(&self) -> InputMode {
        InputMode::StateOnly
    }

    fn name(&self) -> String {
        "oracle".to_string()
    }
}
