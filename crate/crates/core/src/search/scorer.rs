use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ScoreMode {
    /// Cumulative log-probability only.
    #[default]
    LogP,
    /// Weighted mix of normalized predicted progress and log-probability.
    Combined,
}

impl fmt::Display for ScoreMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreMode::LogP => "logp",
            ScoreMode::Combined => "combined",
        })
    }
}

impl FromStr for ScoreMode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "logp" => Ok(ScoreMode::LogP),
            "combined" => Ok(ScoreMode::Combined),
            other => Err(ParseError::new(0, format!("unknown scorer {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScorerConfig<F: Scalar = f64> {
    pub mode: ScoreMode,
    /// Weight of the progress term, in `[0, 1]`. Ignored in logp mode.
    pub alpha: F,
    /// Normalizer for predicted steps.
    pub n_max: F,
}

impl<F: Scalar> ScorerConfig<F> {
    pub fn logp() -> Self {
        ScorerConfig { mode: ScoreMode::LogP, alpha: F::zero(), n_max: F::one() }
    }

    pub fn combined(alpha: F, n_max: F) -> Self {
        assert!(alpha >= F::zero() && alpha <= F::one(), "alpha must lie in [0, 1]");
        assert!(n_max > F::zero(), "n_max must be positive");
        ScorerConfig { mode: ScoreMode::Combined, alpha, n_max }
    }

    pub fn needs_predictor(&self) -> bool {
        self.mode == ScoreMode::Combined
    }
}

impl<F: Scalar> Default for ScorerConfig<F> {
    fn default() -> Self {
        ScorerConfig::logp()
    }
}

/// Normalized progress `-2 n / n_max`.
pub fn normalized_steps<F: Scalar>(predicted_steps: F, n_max: F) -> F {
    -F::of(2.0) * predicted_steps / n_max
}

/// Frontier priority of a node: `P` in logp mode, otherwise
/// `alpha * N + (1 - alpha) * P` with `N = -2 n / n_max`.
///
/// Combined mode requires `predicted_steps`.
pub fn score<F: Scalar>(trajectory_logp: F, predicted_steps: Option<F>, cfg: &ScorerConfig<F>) -> F {
    match cfg.mode {
        ScoreMode::LogP => trajectory_logp,
        ScoreMode::Combined => {
            let n = predicted_steps.expect("combined scoring needs a predicted step count");
            cfg.alpha * normalized_steps(n, cfg.n_max) + (F::one() - cfg.alpha) * trajectory_logp
        }
    }
}
