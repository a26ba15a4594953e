use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Syntax error in a text artifact. `line` is 1-based, 0 when not line-oriented.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: duplicate theorem id {id:?}")]
    DuplicateId { id: String, line: usize },
    #[error("line {line}: target of {id:?} is not a numeral: {target}")]
    TargetNotNormal { id: String, target: String, line: usize },
    #[error("line {line}: {id:?} is false: lhs evaluates to {lhs_value}, rhs to {rhs_value}")]
    Unsound { id: String, lhs_value: u64, rhs_value: u64, line: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("oracle unavailable for {state}: {detail}")]
    OracleUnavailable { state: String, detail: String },
    #[error("cannot parse state fingerprint {0:?}")]
    BadFingerprint(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed reply: {0}")]
    MalformedReply(String),
    #[error("deadline of {0} ms exceeded")]
    Deadline(u64),
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("combined scoring requires a predictor")]
    MissingPredictor,
    #[error("predictor failed: {0}")]
    Predictor(#[from] PredictError),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("trajectory {theorem_id}: replay failed at step {step}: {reason}")]
    Replay { theorem_id: String, step: usize, reason: String },
    #[error("split fractions sum to {0}, expected 1")]
    FractionSum(f64),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyDataset,
    #[error("training diverged at epoch {epoch}: loss {loss}, learning rate {learning_rate}")]
    Diverged { epoch: usize, loss: f64, learning_rate: f64 },
    #[error("featurization failed: {0}")]
    Features(#[from] PredictError),
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("metric over an empty set")]
    Empty,
    #[error("prediction failed: {0}")]
    Predictor(#[from] PredictError),
}
