//! Remaining-step predictors behind one interface.

pub mod features;
pub mod noisy;
pub mod oracle;
pub mod prompt;
pub mod regressor;
pub mod remote;

use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, PredictError};

pub use features::{featurize, FEATURE_NAMES, FEATURE_VERSION};
pub use noisy::NoisyOracle;
pub use oracle::ExactOracle;
pub use prompt::render_prompt;
pub use regressor::{train_regressor, RegressorModel, TrainConfig, TrainReport};
pub use remote::{RemoteConfig, RemotePredictor};

/// Whether a predictor sees only the current state or the state plus the
/// tactics applied so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InputMode {
    #[default]
    StateOnly,
    StateWithHistory,
}

impl fmt::Display for InputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputMode::StateOnly => "state_before",
            InputMode::StateWithHistory => "state_proof",
        })
    }
}

impl FromStr for InputMode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "state_before" | "state" => Ok(InputMode::StateOnly),
            "state_proof" | "proof" | "history" => Ok(InputMode::StateWithHistory),
            other => Err(ParseError::new(0, format!("unknown input mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredictorQuery {
    pub state_fp: String,
    /// Rendered tactics (`R2@[0]`), present only in history mode.
    pub history: Option<Vec<String>>,
}

impl PredictorQuery {
    pub fn state_only(state_fp: impl Into<String>) -> Self {
        PredictorQuery { state_fp: state_fp.into(), history: None }
    }

    pub fn with_history(state_fp: impl Into<String>, history: Vec<String>) -> Self {
        PredictorQuery { state_fp: state_fp.into(), history: Some(history) }
    }

    pub fn mode(&self) -> InputMode {
        match self.history {
            Some(_) => InputMode::StateWithHistory,
            None => InputMode::StateOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub steps: f64,
    pub rounded: u64,
}

impl Prediction {
    /// Negative estimates clamp to zero.
    pub fn new(steps: f64) -> Self {
        let steps = steps.max(0.0);
        Prediction { steps, rounded: round_half_up(steps) }
    }
}

pub fn round_half_up(x: f64) -> u64 {
    (x + 0.5).floor().max(0.0) as u64
}

/// A remaining-step estimator. Implementations are immutable once built and
/// may be shared across search workers.
pub trait Predictor: Send + Sync {
    fn predict(&self, query: &PredictorQuery) -> Result<Prediction, PredictError>;

    /// The query shape this predictor expects.
    fn input_mode(&self) -> InputMode {
        InputMode::StateOnly
    }

    fn name(&self) -> String;
}

impl<P: Predictor + ?Sized> Predictor for std::sync::Arc<P> {
    fn predict(&self, query: &PredictorQuery) -> Result<Prediction, PredictError> {
        (**self).predict(query)
    }

    fn input_mode(&self) -> InputMode {
        (**self).input_mode()
    }

    fn name(&self) -> String {
        (**self).name()
    }
}
