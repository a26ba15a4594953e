use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DatasetRecord, Split};
use crate::error::DatasetError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitFractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitFractions {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self, DatasetError> {
        let sum = train + val + test;
        if (sum - 1.0).abs() > 1e-9 || [train, val, test].iter().any(|f| *f < 0.0) {
            return Err(DatasetError::FractionSum(sum));
        }
        Ok(SplitFractions { train, val, test })
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let v = s
            .split([',', '/'])
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad fraction {p:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let [a, b, c]: [f64; 3] = v.try_into().map_err(|_| "expected three fractions".to_string())?;
        SplitFractions::new(a, b, c).map_err(|e| e.to_string())
    }
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions { train: 0.8, val: 0.1, test: 0.1 }
    }
}

pub type SplitAssignment = BTreeMap<String, Split>;

/// Theorem-level split: sorted unique ids, seeded shuffle, contiguous slices.
pub fn split<'a>(
    theorem_ids: impl IntoIterator<Item = &'a str>,
    fractions: &SplitFractions,
    seed: u64,
) -> Result<SplitAssignment, DatasetError> {
    let fr = SplitFractions::new(fractions.train, fractions.val, fractions.test)?;
    let mut ids: Vec<&str> = theorem_ids.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = ids.len() as f64;
    let train_end = (fr.train * n).round() as usize;
    let val_end = (((fr.train + fr.val) * n).round() as usize).max(train_end).min(ids.len());
    Ok(ids
        .into_iter()
        .enumerate()
        .map(|(i, id)| {
            let s = if i < train_end {
                Split::Train
            } else if i < val_end {
                Split::Val
            } else {
                Split::Test
            };
            (id.to_string(), s)
        })
        .collect())
}

/// Sets every record's split from its theorem. Records of unassigned
/// theorems are left unchanged.
pub fn apply_split(records: &mut [DatasetRecord], assignment: &SplitAssignment) {
    for r in records {
        if let Some(&s) = assignment.get(&r.theorem_id) {
            r.split = s;
        }
    }
}
