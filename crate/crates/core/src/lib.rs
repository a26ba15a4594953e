//! Best-first proof search over Peano rewriting, guided by a remaining-step
//! predictor, plus the dataset, training, and evaluation plumbing around it.
//!
//! Numeric code is generic over [`scalar::Scalar`]; the aliases below pin the
//! common choices.

pub mod dataset;
pub mod env;
pub mod error;
pub mod eval;
pub mod predictor;
pub mod scalar;
pub mod search;
pub mod tacticgen;

pub type SearchConfig64 = search::SearchConfig<f64>;
pub type SearchConfig32 = search::SearchConfig<f32>;
pub type SearchResult64 = search::SearchResult<f64>;
pub type SearchResult32 = search::SearchResult<f32>;
pub type Trajectory64 = search::ProofTrajectory<f64>;
pub type Trajectory32 = search::ProofTrajectory<f32>;
pub type Regressor64 = predictor::RegressorModel<f64>;
pub type Regressor32 = predictor::RegressorModel<f32>;
pub type GenConfig64 = tacticgen::GenConfig<f64>;
pub type GenConfig32 = tacticgen::GenConfig<f32>;
