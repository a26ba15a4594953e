use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::oracle::ExactOracle;
use super::{InputMode, Prediction, Predictor, PredictorQuery};
use crate::env::Goal;
use crate::error::PredictError;

/// Exact distance plus uniform integer noise in `[-epsilon, epsilon]`,
/// clamped at zero. The noise is a pure function of `(state, seed)`.
#[derive(Debug, Clone)]
pub struct NoisyOracle {
    exact: Arc<ExactOracle>,
    epsilon: u32,
    seed: u64,
}

impl NoisyOracle {
    pub fn new(exact: Arc<ExactOracle>, epsilon: u32, seed: u64) -> Self {
        NoisyOracle { exact, epsilon, seed }
    }

    pub fn epsilon(&self) -> u32 {
        self.epsilon
    }

    pub fn noise(&self, state_fp: &str) -> i64 {
        if self.epsilon == 0 {
            return 0;
        }
        let mut h = Sha256::new();
        h.update(state_fp.as_bytes());
        h.update(self.seed.to_le_bytes());
        let digest = h.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest);
        let e = self.epsilon as i64;
        ChaCha8Rng::from_seed(seed).gen_range(-e..=e)
    }

    pub fn distance(&self, goal: &Goal) -> Result<usize, PredictError> {
        let exact = self.exact.distance(goal)? as i64;
        Ok((exact + self.noise(&goal.fingerprint())).max(0) as usize)
    }
}

impl Predictor for NoisyOracle {
    fn predict(&self, query: &PredictorQuery) -> Result<Prediction, PredictError> {
        let goal = Goal::from_fingerprint(&query.state_fp)
            .map_err(|_| PredictError::BadFingerprint(query.state_fp.clone()))?;
        self.distance(&goal).map(|d| Prediction::new(d as f64))
    }

    fn input_mode(&self) -> InputMode {
        InputMode::StateOnly
    }

    fn name(&self) -> String {
        format!("noisy-oracle(eps={})", self.epsilon)
    }
}
