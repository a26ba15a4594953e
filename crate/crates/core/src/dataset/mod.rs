//! (state, remaining-steps) datasets: extraction from proofs, length
//! balancing, theorem-level splits, and the JSONL file format.

mod balance;
mod io;
mod split;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::{DatasetError, ParseError};
use crate::scalar::Scalar;
use crate::search::ProofTrajectory;

pub use balance::{balance, distribution_report, BalanceReport, DistributionReport, RatioTable, BUCKET_LABELS};
pub use io::{read_dataset, write_dataset};
pub use split::{apply_split, split, SplitAssignment, SplitFractions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    #[default]
    Train,
    Val,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(ParseError::new(0, format!("unknown split {other:?}"))),
        }
    }
}

/// One training example: a state, the tactics that led to it, and the
/// number of tactics left on the selected proof.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub theorem_id: String,
    /// Environment fingerprint of the state.
    pub state: String,
    pub history: Vec<String>,
    pub label: u32,
    pub split: Split,
}

/// `n + 1` records for an `n`-step proof: each pre-tactic state labelled
/// with the tactics still to come, then the proved state labelled 0.
/// Records start in the train split.
pub fn extract_records<F: Scalar>(
    env: &Environment,
    trajectory: &ProofTrajectory<F>,
) -> Result<Vec<DatasetRecord>, DatasetError> {
    trajectory.verify(env).map_err(|(step, reason)| DatasetError::Replay {
        theorem_id: trajectory.theorem_id.clone(),
        step,
        reason,
    })?;
    let n = trajectory.len();
    let tactics: Vec<String> = trajectory.steps.iter().map(|s| s.tactic.to_string()).collect();
    let mut out: Vec<DatasetRecord> = trajectory
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| DatasetRecord {
            theorem_id: trajectory.theorem_id.clone(),
            state: step.state.fingerprint(),
            history: tactics[..i].to_vec(),
            label: (n - i) as u32,
            split: Split::Train,
        })
        .collect();
    let proved_fp = match trajectory.steps.first() {
        Some(first) => format!("{0}|{0}", first.state.goal.target),
        None => return Ok(out),
    };
    out.push(DatasetRecord {
        theorem_id: trajectory.theorem_id.clone(),
        state: proved_fp,
        history: tactics,
        label: 0,
        split: Split::Train,
    });
    Ok(out)
}
