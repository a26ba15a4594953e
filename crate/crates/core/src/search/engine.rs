//! Best-first search over proof states.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::scorer::{score, ScorerConfig};
use super::trajectory::{ProofStep, ProofTrajectory};
use crate::env::{Environment, Goal, ProofState, Tactic, TacticOutcome, Theorem};
use crate::error::{ParseError, SearchError};
use crate::predictor::{InputMode, Predictor, PredictorQuery};
use crate::scalar::Scalar;
use crate::tacticgen::{generate, GenConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_expansions: usize,
    /// Checked between expansions.
    pub timeout: Duration,
    /// Nodes at this depth are never expanded.
    pub max_depth: usize,
}

impl SearchLimits {
    pub fn expansions(max_expansions: usize) -> Self {
        SearchLimits { max_expansions, ..SearchLimits::default() }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_expansions: 200, timeout: Duration::from_secs(120), max_depth: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SearchMode {
    /// Stop at the first proof.
    #[default]
    FirstProof,
    /// Keep searching until a limit fires or the frontier empties.
    Exhaustive,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::FirstProof => "first-proof",
            SearchMode::Exhaustive => "exhaustive",
        })
    }
}

impl FromStr for SearchMode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "first-proof" => Ok(SearchMode::FirstProof),
            "exhaustive" | "exhaustive-to-budget" => Ok(SearchMode::Exhaustive),
            other => Err(ParseError::new(0, format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig<F: Scalar = f64> {
    pub gen: GenConfig<F>,
    pub scorer: ScorerConfig<F>,
    pub limits: SearchLimits,
    pub mode: SearchMode,
}

impl<F: Scalar> Default for SearchConfig<F> {
    fn default() -> Self {
        SearchConfig {
            gen: GenConfig::default(),
            scorer: ScorerConfig::default(),
            limits: SearchLimits::default(),
            mode: SearchMode::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeStatus {
    Open,
    Expanded,
    NoGoals,
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeStatus::Open => "open",
            NodeStatus::Expanded => "expanded",
            NodeStatus::NoGoals => "no_goals",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchNode<F: Scalar = f64> {
    pub state: Arc<ProofState<F>>,
    pub parent: Option<usize>,
    /// Log-probability of the tactic that produced this node; zero at the root.
    pub logp: F,
    /// Sum of tactic log-probabilities from the root.
    pub trajectory_logp: F,
    pub predicted_steps: Option<F>,
    pub score: F,
    /// Creation order; equals the node's index in the trace.
    pub insertion_index: usize,
    pub status: NodeStatus,
}

/// Every node created by one search, indexed by insertion order.
#[derive(Clone, Debug, Default)]
pub struct SearchTrace<F: Scalar = f64> {
    pub nodes: Vec<SearchNode<F>>,
    /// Node indices in the order they were expanded.
    pub expansion_order: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchResult<F: Scalar = f64> {
    pub theorem_id: String,
    pub proved: bool,
    /// In discovery order.
    pub proofs: Vec<ProofTrajectory<F>>,
    pub expansions: usize,
    pub elapsed: Duration,
    pub frontier_exhausted: bool,
    pub trace: SearchTrace<F>,
}

impl<F: Scalar> SearchResult<F> {
    /// Fingerprints of expanded states, in expansion order.
    pub fn expanded_fingerprints(&self) -> Vec<String> {
        self.trace
            .expansion_order
            .iter()
            .map(|&i| self.trace.nodes[i].state.fingerprint())
            .collect()
    }
}

struct FrontierEntry<F> {
    score: F,
    index: usize,
}

impl<F: Scalar> PartialEq for FrontierEntry<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: Scalar> Eq for FrontierEntry<F> {}

impl<F: Scalar> PartialOrd for FrontierEntry<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Scalar> Ord for FrontierEntry<F> {
    /// Higher score first, then earlier insertion.
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .partial_cmp(&other.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.index.cmp(&self.index))
    }
}

struct Search<'a, F: Scalar> {
    cfg: &'a SearchConfig<F>,
    predictor: Option<&'a dyn Predictor>,
    trace: SearchTrace<F>,
    frontier: BinaryHeap<FrontierEntry<F>>,
    visited: HashSet<Goal>,
    proofs: Vec<ProofTrajectory<F>>,
    theorem_id: &'a str,
}

impl<F: Scalar> Search<'_, F> {
    fn predict(&self, state: &ProofState<F>) -> Result<Option<F>, SearchError> {
        if !self.cfg.scorer.needs_predictor() {
            return Ok(None);
        }
        let predictor = self.predictor.ok_or(SearchError::MissingPredictor)?;
        let query = match predictor.input_mode() {
            InputMode::StateOnly => PredictorQuery::state_only(state.fingerprint()),
            InputMode::StateWithHistory => PredictorQuery::with_history(
                state.fingerprint(),
                state.history().iter().map(Tactic::to_string).collect(),
            ),
        };
        Ok(Some(F::of(predictor.predict(&query)?.steps)))
    }

    fn push_node(
        &mut self,
        state: Arc<ProofState<F>>,
        parent: Option<usize>,
        logp: F,
        status: NodeStatus,
    ) -> Result<usize, SearchError> {
        let trajectory_logp = state.cum_logp;
        let predicted_steps =
            if status == NodeStatus::NoGoals { None } else { self.predict(&state)? };
        let node_score = if self.cfg.scorer.needs_predictor() {
            // proved leaves have zero steps left
            score(trajectory_logp, Some(predicted_steps.unwrap_or(F::zero())), &self.cfg.scorer)
        } else {
            score(trajectory_logp, None, &self.cfg.scorer)
        };
        let index = self.trace.nodes.len();
        self.trace.nodes.push(SearchNode {
            state,
            parent,
            logp,
            trajectory_logp,
            predicted_steps,
            score: node_score,
            insertion_index: index,
            status,
        });
        if status == NodeStatus::Open {
            self.frontier.push(FrontierEntry { score: node_score, index });
        }
        Ok(index)
    }

    /// Trajectory ending with `last` applied at node `from`.
    fn trajectory(&self, from: usize, last: Tactic, last_logp: F, leaf: usize) -> ProofTrajectory<F> {
        let mut path = vec![from];
        while let Some(p) = self.trace.nodes[*path.last().unwrap()].parent {
            path.push(p);
        }
        path.reverse();
        let mut steps: Vec<ProofStep<F>> = Vec::with_capacity(path.len());
        for (k, &i) in path.iter().enumerate() {
            let (tactic, logp) = match path.get(k + 1) {
                Some(&next) => (
                    self.trace.nodes[next].state.applied_tactic.clone().expect("non-root node has a tactic"),
                    self.trace.nodes[next].logp,
                ),
                None => (last.clone(), last_logp),
            };
            steps.push(ProofStep { state: Arc::clone(&self.trace.nodes[i].state), tactic, logp });
        }
        ProofTrajectory { theorem_id: self.theorem_id.to_string(), steps, leaf_node: Some(leaf) }
    }
}

/// Best-first search for a proof of `theorem`.
///
/// The frontier is ordered by node score, ties broken by creation order.
/// Children whose goal was already reached are dropped (first path wins).
/// Running out of budget yields an unproved result, not an error.
pub fn best_first_search<F: Scalar>(
    env: &Environment,
    theorem: &Theorem,
    cfg: &SearchConfig<F>,
    predictor: Option<&dyn Predictor>,
) -> Result<SearchResult<F>, SearchError> {
    if cfg.scorer.needs_predictor() && predictor.is_none() {
        return Err(SearchError::MissingPredictor);
    }
    let started = Instant::now();
    let mut search = Search {
        cfg,
        predictor,
        trace: SearchTrace::default(),
        frontier: BinaryHeap::new(),
        visited: HashSet::new(),
        proofs: Vec::new(),
        theorem_id: &theorem.id,
    };

    let root_goal = theorem.goal();
    let root = Arc::new(ProofState::root(root_goal.clone()));
    if root_goal.is_proved() {
        let leaf = search.push_node(root, None, F::zero(), NodeStatus::NoGoals)?;
        search.proofs.push(ProofTrajectory {
            theorem_id: theorem.id.clone(),
            steps: Vec::new(),
            leaf_node: Some(leaf),
        });
    } else {
        search.visited.insert(root_goal);
        search.push_node(root, None, F::zero(), NodeStatus::Open)?;
    }

    let mut expansions = 0;
    let mut stopped_on_proof = !search.proofs.is_empty();
    while !stopped_on_proof
        && expansions < cfg.limits.max_expansions
        && started.elapsed() < cfg.limits.timeout
    {
        let Some(FrontierEntry { index, .. }) = search.frontier.pop() else {
            break;
        };
        let node_state = Arc::clone(&search.trace.nodes[index].state);
        if node_state.depth >= cfg.limits.max_depth {
            continue;
        }
        expansions += 1;
        search.trace.nodes[index].status = NodeStatus::Expanded;
        search.trace.expansion_order.push(index);

        for cand in generate(env, &node_state.goal, &cfg.gen) {
            match env.apply_tactic(&node_state, &cand.tactic) {
                TacticOutcome::Failed(_) => {}
                TacticOutcome::Proved => {
                    let leaf_state = Arc::new(ProofState {
                        goal: Goal {
                            current: (*node_state.goal.target).clone(),
                            target: Arc::clone(&node_state.goal.target),
                        },
                        depth: node_state.depth + 1,
                        parent: Some(Arc::clone(&node_state)),
                        applied_tactic: Some(cand.tactic.clone()),
                        cum_logp: node_state.cum_logp + cand.logp,
                    });
                    let leaf = search.push_node(leaf_state, Some(index), cand.logp, NodeStatus::NoGoals)?;
                    let proof = search.trajectory(index, cand.tactic, cand.logp, leaf);
                    search.proofs.push(proof);
                    if cfg.mode == SearchMode::FirstProof {
                        stopped_on_proof = true;
                        break;
                    }
                }
                TacticOutcome::NewState(mut child) => {
                    if !search.visited.insert(child.goal.clone()) {
                        continue;
                    }
                    child.cum_logp = node_state.cum_logp + cand.logp;
                    search.push_node(Arc::new(child), Some(index), cand.logp, NodeStatus::Open)?;
                }
            }
        }
    }

    Ok(SearchResult {
        theorem_id: theorem.id.clone(),
        proved: !search.proofs.is_empty(),
        proofs: search.proofs,
        expansions,
        elapsed: started.elapsed(),
        frontier_exhausted: search.frontier.is_empty(),
        trace: search.trace,
    })
}
