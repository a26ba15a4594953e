use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::env::{Environment, Goal, ProofState, RuleSet, Tactic, TacticOutcome, Term, Theorem};
use crate::error::DatasetError;
use crate::scalar::Scalar;

/// A state on a proof and the tactic applied from it.
#[derive(Clone, Debug)]
pub struct ProofStep<F: Scalar = f64> {
    pub state: Arc<ProofState<F>>,
    pub tactic: Tactic,
    pub logp: F,
}

/// One successful proof: `steps[0].state` is the theorem root and applying
/// every step's tactic in order ends in a proved state.
#[derive(Clone, Debug)]
pub struct ProofTrajectory<F: Scalar = f64> {
    pub theorem_id: String,
    pub steps: Vec<ProofStep<F>>,
    /// Index of the proved leaf in the search trace that found this proof.
    pub leaf_node: Option<usize>,
}

impl<F: Scalar> ProofTrajectory<F> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn tactics(&self) -> Vec<Tactic> {
        self.steps.iter().map(|s| s.tactic.clone()).collect()
    }

    /// Rebuilds a trajectory by applying `tactics` to the theorem root.
    /// On failure returns the index of the offending step.
    pub fn replay(
        env: &Environment,
        theorem: &Theorem,
        tactics: &[Tactic],
        logps: &[F],
    ) -> Result<ProofTrajectory<F>, (usize, String)> {
        let mut state = Arc::new(ProofState::root(theorem.goal()));
        if tactics.is_empty() {
            return if state.goal.is_proved() {
                Ok(ProofTrajectory { theorem_id: theorem.id.clone(), steps: vec![], leaf_node: None })
            } else {
                Err((0, "empty proof of an open goal".into()))
            };
        }
        let mut steps = Vec::with_capacity(tactics.len());
        for (i, tactic) in tactics.iter().enumerate() {
            let logp = logps.get(i).copied().unwrap_or(F::zero());
            let outcome = env.apply_tactic(&state, tactic);
            steps.push(ProofStep { state: Arc::clone(&state), tactic: tactic.clone(), logp });
            match outcome {
                TacticOutcome::Proved if i + 1 == tactics.len() => {
                    return Ok(ProofTrajectory { theorem_id: theorem.id.clone(), steps, leaf_node: None });
                }
                TacticOutcome::Proved => return Err((i, "proved before the last step".into())),
                TacticOutcome::Failed(reason) => return Err((i, reason.to_string())),
                TacticOutcome::NewState(mut next) => {
                    next.cum_logp = state.cum_logp + logp;
                    state = Arc::new(next);
                }
            }
        }
        Err((tactics.len() - 1, "last step does not close the goal".into()))
    }

    /// Replays this trajectory's own tactics from its root.
    pub fn verify(&self, env: &Environment) -> Result<(), (usize, String)> {
        let Some(first) = self.steps.first() else {
            return Ok(());
        };
        let root = &first.state.goal;
        let theorem = Theorem {
            id: self.theorem_id.clone(),
            lhs: root.current.clone(),
            rhs: (*root.target).clone(),
        };
        let logps: Vec<F> = self.steps.iter().map(|s| s.logp).collect();
        Self::replay(env, &theorem, &self.tactics(), &logps).map(|_| ())
    }
}

/// The shortest proof; the earliest one among equals.
///
/// # Panics
///
/// On an empty slice.
pub fn select_shortest<F: Scalar>(proofs: &[ProofTrajectory<F>]) -> &ProofTrajectory<F> {
    proofs
        .iter()
        .min_by_key(|p| p.len())
        .expect("select_shortest needs at least one proof")
}

/// On-disk form of a trajectory: one JSON object per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub theorem_id: String,
    pub rules: String,
    pub lhs: String,
    pub rhs: String,
    pub tactics: Vec<String>,
    pub logps: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn of<F: Scalar>(traj: &ProofTrajectory<F>, theorem: &Theorem, rules: &RuleSet) -> Self {
        TrajectoryRecord {
            theorem_id: traj.theorem_id.clone(),
            rules: rules.to_string(),
            lhs: theorem.lhs.to_string(),
            rhs: theorem.rhs.to_string(),
            tactics: traj.steps.iter().map(|s| s.tactic.to_string()).collect(),
            logps: traj.steps.iter().map(|s| s.logp.as_f64()).collect(),
        }
    }

    pub fn theorem(&self) -> Result<Theorem, String> {
        let lhs: Term = self.lhs.parse().map_err(|e| format!("lhs: {e}"))?;
        let rhs: Term = self.rhs.parse().map_err(|e| format!("rhs: {e}"))?;
        Ok(Theorem { id: self.theorem_id.clone(), lhs, rhs })
    }

    pub fn env(&self) -> Result<Environment, String> {
        Ok(Environment::new(self.rules.parse().map_err(|e| format!("rules: {e}"))?))
    }

    pub fn to_trajectory<F: Scalar>(&self) -> Result<ProofTrajectory<F>, DatasetError> {
        let replay_err = |step: usize, reason: String| DatasetError::Replay {
            theorem_id: self.theorem_id.clone(),
            step,
            reason,
        };
        let theorem = self.theorem().map_err(|e| replay_err(0, e))?;
        let env = self.env().map_err(|e| replay_err(0, e))?;
        let tactics = self
            .tactics
            .iter()
            .enumerate()
            .map(|(i, t)| t.parse::<Tactic>().map_err(|e| replay_err(i, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let logps: Vec<F> = self.logps.iter().map(|&l| F::of(l)).collect();
        ProofTrajectory::replay(&env, &theorem, &tactics, &logps).map_err(|(i, r)| replay_err(i, r))
    }

    pub fn goal(&self) -> Result<Goal, String> {
        let th = self.theorem()?;
        Ok(th.goal())
    }
}

pub fn write_trajectories(records: &[TrajectoryRecord], path: &Path) -> Result<(), DatasetError> {
    let io = |source| DatasetError::Io { path: path.to_path_buf(), source };
    let mut out = fs::File::create(path).map_err(io)?;
    for r in records {
        let line = serde_json::to_string(r).expect("trajectory records serialize");
        writeln!(out, "{line}").map_err(io)?;
    }
    Ok(())
}

pub fn read_trajectories(path: &Path) -> Result<Vec<TrajectoryRecord>, DatasetError> {
    let io = |source| DatasetError::Io { path: path.to_path_buf(), source };
    let file = fs::File::open(path).map_err(io)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| DatasetError::Malformed { line: i + 1, message: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}
