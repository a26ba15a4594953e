//! Measurement: prediction metrics by label range, pass-rate benchmarks over
//! repeated runs, and one-parameter sweeps.

mod bench;
pub mod corpora;
mod metrics;
mod range;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bench::{benchmark, BenchReport, BenchSetup, Method, MethodSummary, Outcome, PredictorSpec};
pub use metrics::{accuracy, accuracy_within, mae, mean_std};
pub use range::{per_range_report, per_range_report_within, RangeReport, RangeRow};
pub use sweep::{sweep, SweepParam, SweepRow, SweepTable};

/// Per-run seeds derived from a master seed.
pub fn run_seeds(master: u64, runs: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..runs).map(|_| rng.gen()).collect()
}
