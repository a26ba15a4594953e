//! Scored tactic candidates. A heuristic score per applicable tactic is turned
//! into log-probabilities by a tempered softmax, then truncated to a budget.

use std::fmt;
use std::str::FromStr;

use crate::env::{Environment, Goal, Tactic};
use crate::error::ParseError;
use crate::scalar::{log_sum_exp, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredTactic<F: Scalar = f64> {
    pub tactic: Tactic,
    pub logp: F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Heuristic {
    #[default]
    Uniform,
    /// Prefers rewrites with small results.
    SizeGreedy,
    /// Prefers rewrites with large results.
    Adversarial,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Uniform => "uniform",
            Heuristic::SizeGreedy => "size-greedy",
            Heuristic::Adversarial => "adversarial",
        })
    }
}

impl FromStr for Heuristic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "uniform" => Ok(Heuristic::Uniform),
            "size-greedy" => Ok(Heuristic::SizeGreedy),
            "adversarial" => Ok(Heuristic::Adversarial),
            other => Err(ParseError::new(0, format!("unknown heuristic {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig<F: Scalar = f64> {
    /// Candidate budget K.
    pub budget: usize,
    pub temperature: F,
    /// Unused by the deterministic top-K generator.
    pub seed: u64,
    pub heuristic: Heuristic,
}

impl<F: Scalar> GenConfig<F> {
    pub fn new(budget: usize, temperature: F, heuristic: Heuristic) -> Self {
        assert!(budget >= 1, "candidate budget must be positive");
        assert!(temperature > F::zero(), "temperature must be positive");
        GenConfig { budget, temperature, seed: 0, heuristic }
    }
}

impl<F: Scalar> Default for GenConfig<F> {
    fn default() -> Self {
        GenConfig::new(32, F::of(0.7), Heuristic::Uniform)
    }
}

/// Heuristic score of `tactic` in `goal`. `tactic` must be applicable.
pub fn heuristic_score<F: Scalar>(
    env: &Environment,
    goal: &Goal,
    tactic: &Tactic,
    heuristic: Heuristic,
) -> F {
    let size = || {
        let term = env.rewrite(goal, tactic).expect("heuristic_score needs an applicable tactic");
        F::of_usize(term.size())
    };
    match heuristic {
        Heuristic::Uniform => F::zero(),
        Heuristic::SizeGreedy => -size(),
        Heuristic::Adversarial => size(),
    }
}

/// Top-`budget` candidates by log-probability, best first; ties keep
/// enumeration order. Empty when no tactic applies.
pub fn generate<F: Scalar>(env: &Environment, goal: &Goal, cfg: &GenConfig<F>) -> Vec<ScoredTactic<F>> {
    let tactics = env.enumerate_applicable(goal);
    let logits: Vec<F> = tactics
        .iter()
        .map(|t| heuristic_score::<F>(env, goal, t, cfg.heuristic) / cfg.temperature)
        .collect();
    let norm = log_sum_exp(&logits);
    let mut scored: Vec<ScoredTactic<F>> = tactics
        .into_iter()
        .zip(logits)
        .map(|(tactic, l)| ScoredTactic { tactic, logp: (l - norm).min(F::zero()) })
        .collect();
    // stable sort keeps enumeration order among equal logp
    scored.sort_by(|a, b| b.logp.partial_cmp(&a.logp).expect("finite logp"));
    scored.truncate(cfg.budget);
    scored
}
