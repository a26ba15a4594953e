use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DatasetRecord;

pub const BUCKET_LABELS: [&str; 5] = ["1-5", "6-10", "11-15", "16-20", "21+"];

/// Keep probability per remaining-step bucket. Buckets are 1–5, 6–10,
/// 11–15, 16–20 and 21+; label 0 counts as 1–5.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioTable {
    pub ratios: [f64; 5],
}

impl RatioTable {
    pub fn new(ratios: [f64; 5]) -> Self {
        assert!(ratios.iter().all(|&r| r > 0.0 && r <= 1.0), "ratios must lie in (0, 1]");
        RatioTable { ratios }
    }

    pub fn identity() -> Self {
        RatioTable::new([1.0; 5])
    }

    pub fn bucket(label: u32) -> usize {
        match label {
            0..=5 => 0,
            6..=10 => 1,
            11..=15 => 2,
            16..=20 => 3,
            _ => 4,
        }
    }

    pub fn ratio(&self, label: u32) -> f64 {
        self.ratios[Self::bucket(label)]
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let vals = s
            .split(['/', ','])
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad ratio {v:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let ratios: [f64; 5] = vals.try_into().map_err(|_| "expected five ratios".to_string())?;
        if ratios.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
            return Err("ratios must lie in (0, 1]".into());
        }
        Ok(RatioTable { ratios })
    }
}

impl Default for RatioTable {
    fn default() -> Self {
        RatioTable::new([0.01, 0.3, 0.5, 0.7, 1.0])
    }
}

impl fmt::Display for RatioTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{:?}` keeps the trailing `.0` on whole numbers
        let parts: Vec<String> = self.ratios.iter().map(|r| format!("{r:?}")).collect();
        f.write_str(&parts.join("/"))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DistributionReport {
    pub counts: [usize; 5],
    pub total: usize,
    /// `None` for an empty input.
    pub mean_label: Option<f64>,
}

pub fn distribution_report(records: &[DatasetRecord]) -> DistributionReport {
    let mut counts = [0usize; 5];
    let mut sum = 0u64;
    for r in records {
        counts[RatioTable::bucket(r.label)] += 1;
        sum += r.label as u64;
    }
    let total = records.len();
    DistributionReport {
        counts,
        total,
        mean_label: (total > 0).then(|| sum as f64 / total as f64),
    }
}

impl fmt::Display for DistributionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, count) in BUCKET_LABELS.iter().zip(self.counts) {
            writeln!(f, "{label:>6}  {count:>8}")?;
        }
        writeln!(f, "{:>6}  {:>8}", "total", self.total)?;
        match self.mean_label {
            Some(m) => writeln!(f, "{:>6}  {m:>8.3}", "mean"),
            None => writeln!(f, "{:>6}  {:>8}", "mean", "undefined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub before: DistributionReport,
    pub after: DistributionReport,
}

impl fmt::Display for BalanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>8}  {:>8}", "range", "before", "after")?;
        for (i, label) in BUCKET_LABELS.iter().enumerate() {
            writeln!(f, "{label:>6}  {:>8}  {:>8}", self.before.counts[i], self.after.counts[i])?;
        }
        writeln!(f, "{:>6}  {:>8}  {:>8}", "total", self.before.total, self.after.total)?;
        let mean = |m: Option<f64>| m.map_or("undefined".to_string(), |v| format!("{v:.3}"));
        writeln!(
            f,
            "{:>6}  {:>8}  {:>8}",
            "mean",
            mean(self.before.mean_label),
            mean(self.after.mean_label)
        )
    }
}

/// Keeps each record independently with its bucket's ratio. Kept records
/// stay in input order and are not modified.
pub fn balance(records: &[DatasetRecord], table: &RatioTable, seed: u64) -> (Vec<DatasetRecord>, BalanceReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept: Vec<DatasetRecord> = records
        .iter()
        .filter(|r| rng.gen::<f64>() < table.ratio(r.label))
        .cloned()
        .collect();
    let report = BalanceReport { before: distribution_report(records), after: distribution_report(&kept) };
    (kept, report)
}
