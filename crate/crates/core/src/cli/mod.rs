//! The `progress` command line: one subcommand per pipeline stage.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use progress_prover::tacticgen::Heuristic;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config values, or missing inputs. Exit code 2.
    Config(String),
    /// A stage failed on valid inputs. Exit code 3.
    Runtime(String),
    /// Reading or writing an artifact failed. Exit code 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "progress", version, about = "Proof search guided by remaining-step prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random theorem corpus.
    GenCorpus(GenCorpusArgs),
    /// Search every theorem exhaustively and keep the shortest proofs.
    Mine(MineArgs),
    /// Turn proofs into balanced, split (state, remaining steps) records.
    BuildDataset(BuildDatasetArgs),
    /// Fit the step regressor.
    Train(TrainArgs),
    /// Accuracy and MAE of a predictor by remaining-step range.
    EvalPredictor(EvalArgs),
    /// Pass rates of log-probability search against guided search.
    Bench(BenchArgs),
    /// Benchmark one method across values of a single parameter.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// `key=value` file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to every core.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SearchFlags {
    /// Tactic candidates per expansion (K).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub temperature: Option<f64>,
    /// uniform, size-greedy or adversarial.
    #[arg(long)]
    pub heuristic: Option<Heuristic>,
    /// Expansion budget per theorem.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Wall-clock limit per theorem, in seconds.
    #[arg(long)]
    pub timeout_secs: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PredictorFlags {
    /// model, exact, noisy or remote.
    #[arg(long)]
    pub predictor: Option<String>,
    /// Regressor file for `--predictor model`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Noise bound for `--predictor noisy`.
    #[arg(long)]
    pub epsilon: Option<u32>,
    /// Server base URL for `--predictor remote`.
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Per-query deadline for the remote predictor, in milliseconds.
    #[arg(long)]
    pub deadline_ms: Option<u64>,
    /// state_before or state_proof, for the remote predictor.
    #[arg(long)]
    pub input: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenCorpusArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: Option<u64>,
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated rule ids, e.g. `R1,R2,R3,R4,R7`.
    #[arg(long)]
    pub rules: Option<String>,
}

#[derive(Args, Debug)]
pub struct MineArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchFlags,
}

#[derive(Args, Debug)]
pub struct BuildDatasetArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub trajectories: Option<PathBuf>,
    /// Keep ratios for the 1-5/6-10/11-15/16-20/21+ buckets.
    #[arg(long)]
    pub ratios: Option<String>,
    /// Train/val/test fractions.
    #[arg(long)]
    pub fractions: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// state_before or state_proof.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Which split to score: train, val or test.
    #[arg(long)]
    pub split: Option<String>,
    /// Rule set the oracle predictors search under.
    #[arg(long)]
    pub rules: Option<String>,
    #[command(flatten)]
    pub predictor: PredictorFlags,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Count predictions within this many steps as accurate.
    #[arg(long)]
    pub tolerance: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BenchFlags {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// logp or combined.
    #[arg(long)]
    pub scorer: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Step normalizer; defaults to the model's largest label or the
    /// corpus's longest oracle proof.
    #[arg(long)]
    pub n_max: Option<f64>,
    #[command(flatten)]
    pub search: SearchFlags,
    #[command(flatten)]
    pub predictor: PredictorFlags,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub bench: BenchFlags,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub bench: BenchFlags,
    /// alpha, temperature or samples.
    #[arg(long)]
    pub param: Option<String>,
    /// Comma-separated values.
    #[arg(long)]
    pub values: Option<String>,
}

/// Parses the command line, runs the stage, and returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("progress: {e}");
            e.exit_code()
        }
    }
}
