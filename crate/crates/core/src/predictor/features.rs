//! Hand-built state features for the linear regressor.

use super::PredictorQuery;
use crate::env::{Environment, Goal, Term};
use crate::error::PredictError;
use crate::scalar::Scalar;

/// Bumped whenever the feature list or its order changes.
pub const FEATURE_VERSION: u32 = 1;

pub const FEATURE_NAMES: [&str; 9] = [
    "current_size",
    "target_size",
    "size_diff",
    "add_count",
    "mul_count",
    "s_count",
    "redex_count",
    "history_len",
    "const",
];

/// Index of `history_len` in [`FEATURE_NAMES`].
pub const HISTORY_FEATURE: usize = 7;

/// Number of positions where one of `R1`..`R4` matches.
pub fn redex_count(term: &Term) -> usize {
    let env = Environment::default();
    env.enumerate_applicable(&Goal::new(term.clone(), Term::Z)).len()
}

/// Feature vector in [`FEATURE_NAMES`] order.
pub fn featurize<F: Scalar>(query: &PredictorQuery) -> Result<Vec<F>, PredictError> {
    let goal = Goal::from_fingerprint(&query.state_fp)
        .map_err(|_| PredictError::BadFingerprint(query.state_fp.clone()))?;
    let cur = goal.current.size();
    let tgt = goal.target.size();
    let (adds, muls, succs) = goal.current.op_counts();
    let hist = query.history.as_ref().map_or(0, Vec::len);
    Ok([
        cur as f64,
        tgt as f64,
        cur as f64 - tgt as f64,
        adds as f64,
        muls as f64,
        succs as f64,
        redex_count(&goal.current) as f64,
        hist as f64,
        1.0,
    ]
    .into_iter()
    .map(F::of)
    .collect())
}
