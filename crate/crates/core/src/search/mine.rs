//! Exhaustive search over a whole corpus, keeping the shortest proof of each
//! theorem.

use rayon::prelude::*;

use super::engine::{best_first_search, SearchConfig, SearchMode};
use super::trajectory::{select_shortest, TrajectoryRecord};
use super::tree::{extract_proof_tree, ProofTree};
use crate::env::Corpus;
use crate::error::SearchError;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct MineOutput<F: Scalar = f64> {
    /// One tree per theorem, in corpus order.
    pub trees: Vec<ProofTree<F>>,
    /// Shortest proof of each proved theorem, in corpus order.
    pub trajectories: Vec<TrajectoryRecord>,
    /// Ids of theorems with no proof inside the limits.
    pub unmined: Vec<String>,
}

impl<F: Scalar> MineOutput<F> {
    pub fn solve_rate(&self) -> f64 {
        if self.trees.is_empty() {
            return 0.0;
        }
        100.0 * self.trajectories.len() as f64 / self.trees.len() as f64
    }

    /// All trees in the line dump format, concatenated.
    pub fn render_trees(&self) -> String {
        self.trees.iter().map(|t| t.to_string()).collect()
    }
}

/// Runs `cfg` in exhaustive mode on every theorem. Mining runs without a
/// predictor, so a combined scorer is rejected.
pub fn mine<F: Scalar>(corpus: &Corpus, cfg: &SearchConfig<F>) -> Result<MineOutput<F>, SearchError> {
    if cfg.scorer.needs_predictor() {
        return Err(SearchError::MissingPredictor);
    }
    let env = corpus.env();
    let cfg = SearchConfig { mode: SearchMode::Exhaustive, ..cfg.clone() };
    let results: Vec<(ProofTree<F>, Option<TrajectoryRecord>)> = corpus
        .theorems
        .par_iter()
        .map(|th| {
            let result = best_first_search(&env, th, &cfg, None)?;
            let tree = extract_proof_tree(&result);
            let record = (!result.proofs.is_empty())
                .then(|| TrajectoryRecord::of(select_shortest(&result.proofs), th, &corpus.rules));
            Ok((tree, record))
        })
        .collect::<Result<_, SearchError>>()?;
    let mut out = MineOutput { trees: Vec::new(), trajectories: Vec::new(), unmined: Vec::new() };
    for (tree, record) in results {
        match record {
            Some(r) => out.trajectories.push(r),
            None => out.unmined.push(tree.theorem_id.clone()),
        }
        out.trees.push(tree);
    }
    Ok(out)
}
