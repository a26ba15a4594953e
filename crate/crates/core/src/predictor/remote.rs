//! Client for an external step-prediction server.
//!
//! `POST {endpoint}/predict` with body `{"prompt": "..."}`; the reply is
//! `{"steps": <integer>}` (a bare integer body is accepted too).

use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use super::prompt::render_prompt;
use super::{InputMode, Prediction, Predictor, PredictorQuery};
use crate::error::PredictError;

#[derive(Clone, Debug, PartialEq)]
pub struct RemoteConfig {
    /// Base URL, e.g. `http://127.0.0.1:8000`.
    pub endpoint: String,
    /// Total time allowed for one query, retries included.
    pub deadline: Duration,
    /// Extra attempts after a transport failure.
    pub retries: u32,
    pub retry_backoff: Duration,
    pub max_in_flight: usize,
    pub mode: InputMode,
}

impl RemoteConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteConfig {
            endpoint: endpoint.into(),
            deadline: Duration::from_secs(5),
            retries: 2,
            retry_backoff: Duration::from_millis(50),
            max_in_flight: 8,
            mode: InputMode::StateOnly,
        }
    }
}

struct Gate {
    in_flight: Mutex<usize>,
    freed: Condvar,
    limit: usize,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn acquire(&self) -> Permit<'_> {
        let mut n = self.in_flight.lock().expect("gate poisoned");
        while *n >= self.limit {
            n = self.freed.wait(n).expect("gate poisoned");
        }
        *n += 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.in_flight.lock().expect("gate poisoned") -= 1;
        self.0.freed.notify_one();
    }
}

pub struct RemotePredictor {
    cfg: RemoteConfig,
    client: reqwest::blocking::Client,
    gate: Gate,
}

impl std::fmt::Debug for RemotePredictor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemotePredictor").field("cfg", &self.cfg).finish()
    }
}

impl RemotePredictor {
    pub fn new(cfg: RemoteConfig) -> Result<Self, PredictError> {
        let client = reqwest::blocking::Client::builder()
            .build()
            .map_err(|e| PredictError::Transport(e.to_string()))?;
        let limit = cfg.max_in_flight.max(1);
        Ok(RemotePredictor {
            cfg,
            client,
            gate: Gate { in_flight: Mutex::new(0), freed: Condvar::new(), limit },
        })
    }

    pub fn config(&self) -> &RemoteConfig {
        &self.cfg
    }

    fn url(&self) -> String {
        format!("{}/predict", self.cfg.endpoint.trim_end_matches('/'))
    }

    fn deadline_error(&self) -> PredictError {
        PredictError::Deadline(self.cfg.deadline.as_millis() as u64)
    }

    fn attempt(&self, body: &str, budget: Duration) -> Result<String, PredictError> {
        let resp = self
            .client
            .post(self.url())
            .header("content-type", "application/json")
            .body(body.to_string())
            .timeout(budget)
            .send()
            .map_err(|e| if e.is_timeout() { self.deadline_error() } else { PredictError::Transport(e.to_string()) })?;
        let status = resp.status();
        let text = resp
            .text()
            .map_err(|e| if e.is_timeout() { self.deadline_error() } else { PredictError::Transport(e.to_string()) })?;
        if !status.is_success() {
            return Err(PredictError::Transport(format!("HTTP {status}")));
        }
        Ok(text)
    }
}

/// Extracts a non-negative integer step count from a reply body.
pub fn parse_reply(body: &str) -> Result<u64, PredictError> {
    let malformed = || PredictError::MalformedReply(body.chars().take(80).collect());
    let v: Value = serde_json::from_str(body.trim()).map_err(|_| malformed())?;
    let steps = match &v {
        Value::Number(_) => &v,
        Value::Object(map) => map.get("steps").ok_or_else(malformed)?,
        _ => return Err(malformed()),
    };
    steps.as_u64().ok_or_else(malformed)
}

impl Predictor for RemotePredictor {
    fn predict(&self, query: &PredictorQuery) -> Result<Prediction, PredictError> {
        let _permit = self.gate.acquire();
        let body = json!({ "prompt": render_prompt(query) }).to_string();
        let started = Instant::now();
        let mut attempt = 0;
        loop {
            let budget = self.cfg.deadline.saturating_sub(started.elapsed());
            if budget.is_zero() {
                return Err(self.deadline_error());
            }
            match self.attempt(&body, budget) {
                Ok(text) => return parse_reply(&text).map(|n| Prediction::new(n as f64)),
                Err(PredictError::Transport(_)) if attempt < self.cfg.retries => {
                    attempt += 1;
                    std::thread::sleep(self.cfg.retry_backoff.min(self.cfg.deadline.saturating_sub(started.elapsed())));
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn input_mode(&self) -> InputMode {
        self.cfg.mode
    }

    fn name(&self) -> String {
        format!("remote({})", self.cfg.endpoint)
    }
}
