//! Linear remaining-step regressor trained by full-batch gradient descent on
//! mean squared error.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::features::{featurize, FEATURE_NAMES, FEATURE_VERSION, HISTORY_FEATURE};
use super::{InputMode, Prediction, Predictor, PredictorQuery};
use crate::dataset::{DatasetRecord, Split};
use crate::error::{ModelFileError, PredictError, TrainError};
use crate::scalar::Scalar;

/// Features used as regressors; the trailing constant is the bias.
const N_INPUTS: usize = FEATURE_NAMES.len() - 1;

const MODEL_HEADER: &str = "progress-regressor v1";

#[derive(Clone, Debug, PartialEq)]
pub struct RegressorModel<F: Scalar = f64> {
    pub mode: InputMode,
    /// One weight per non-constant feature, applied to standardized inputs.
    pub weights: Vec<F>,
    pub bias: F,
    pub means: Vec<F>,
    pub scales: Vec<F>,
    pub epochs: usize,
    pub final_loss: F,
    /// Largest label seen in training.
    pub n_max: u32,
}

impl<F: Scalar> RegressorModel<F> {
    fn standardize(&self, raw: &[F]) -> Vec<F> {
        (0..N_INPUTS).map(|j| (raw[j] - self.means[j]) / self.scales[j]).collect()
    }

    pub fn query_for(&self, record: &DatasetRecord) -> PredictorQuery {
        match self.mode {
            InputMode::StateOnly => PredictorQuery::state_only(record.state.clone()),
            InputMode::StateWithHistory => {
                PredictorQuery::with_history(record.state.clone(), record.history.clone())
            }
        }
    }

    /// Raw linear output, possibly negative.
    pub fn raw_output(&self, query: &PredictorQuery) -> Result<F, PredictError> {
        let mut x = featurize::<F>(query)?;
        if self.mode == InputMode::StateOnly {
            x[HISTORY_FEATURE] = F::zero();
        }
        let z = self.standardize(&x);
        Ok(self.bias + z.iter().zip(&self.weights).map(|(&a, &w)| a * w).sum::<F>())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{MODEL_HEADER}").unwrap();
        writeln!(s, "features {FEATURE_VERSION}").unwrap();
        writeln!(s, "mode {}", self.mode).unwrap();
        writeln!(s, "n_max {}", self.n_max).unwrap();
        writeln!(s, "epochs {}", self.epochs).unwrap();
        writeln!(s, "final_loss {}", self.final_loss.as_f64()).unwrap();
        for j in 0..N_INPUTS {
            writeln!(
                s,
                "feature {} weight {} mean {} scale {}",
                FEATURE_NAMES[j],
                self.weights[j].as_f64(),
                self.means[j].as_f64(),
                self.scales[j].as_f64()
            )
            .unwrap();
        }
        writeln!(s, "bias {}", self.bias.as_f64()).unwrap();
        s
    }

    pub fn from_text(text: &str) -> Result<Self, ModelFileError> {
        let bad = |line: usize, message: String| ModelFileError::Malformed { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, MODEL_HEADER)) => {}
            _ => return Err(bad(1, format!("expected header {MODEL_HEADER:?}"))),
        }
        let mut model = RegressorModel {
            mode: InputMode::StateOnly,
            weights: vec![],
            bias: F::zero(),
            means: vec![],
            scales: vec![],
            epochs: 0,
            final_loss: F::zero(),
            n_max: 0,
        };
        let mut saw_bias = false;
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(n, format!("bad number {s:?}")));
            match parts.as_slice() {
                ["features", v] => {
                    if v.parse::<u32>().ok() != Some(FEATURE_VERSION) {
                        return Err(bad(n, format!("feature version {v} is not {FEATURE_VERSION}")));
                    }
                }
                ["mode", m] => model.mode = m.parse().map_err(|_| bad(n, format!("bad mode {m:?}")))?,
                ["n_max", v] => model.n_max = v.parse().map_err(|_| bad(n, format!("bad n_max {v:?}")))?,
                ["epochs", v] => model.epochs = v.parse().map_err(|_| bad(n, format!("bad epochs {v:?}")))?,
                ["final_loss", v] => model.final_loss = F::of(num(v)?),
                ["feature", name, "weight", w, "mean", m, "scale", sc] => {
                    let j = model.weights.len();
                    if j >= N_INPUTS || FEATURE_NAMES[j] != *name {
                        return Err(bad(n, format!("unexpected feature {name:?}")));
                    }
                    model.weights.push(F::of(num(w)?));
                    model.means.push(F::of(num(m)?));
                    let scale = num(sc)?;
                    if !(scale > 0.0) {
                        return Err(bad(n, format!("non-positive scale {sc}")));
                    }
                    model.scales.push(F::of(scale));
                }
                ["bias", b] => {
                    model.bias = F::of(num(b)?);
                    saw_bias = true;
                }
                _ => return Err(bad(n, format!("unrecognized line {line:?}"))),
            }
        }
        if model.weights.len() != N_INPUTS || !saw_bias {
            return Err(bad(0, "model file is incomplete".into()));
        }
        if model.weights.iter().chain([&model.bias]).any(|w| !w.is_finite()) {
            return Err(bad(0, "non-finite weights".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelFileError> {
        fs::write(path, self.to_text()).map_err(|source| ModelFileError::Io { path: path.to_path_buf(), source })
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        let text = fs::read_to_string(path)
            .map_err(|source| ModelFileError::Io { path: path.to_path_buf(), source })?;
        Self::from_text(&text)
    }
}

impl<F: Scalar> Predictor for RegressorModel<F> {
    fn predict(&self, query: &PredictorQuery) -> Result<Prediction, PredictError> {
        Ok(Prediction::new(self.raw_output(query)?.as_f64()))
    }

    fn input_mode(&self) -> InputMode {
        self.mode
    }

    fn name(&self) -> String {
        format!("regressor({})", self.mode)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig<F: Scalar = f64> {
    pub epochs: usize,
    pub learning_rate: F,
    /// Recorded for provenance; initialization is zero and the batch is full,
    /// so training does not draw random numbers.
    pub seed: u64,
    pub mode: InputMode,
}

impl<F: Scalar> Default for TrainConfig<F> {
    fn default() -> Self {
        TrainConfig { epochs: 2000, learning_rate: F::of(0.1), seed: 0, mode: InputMode::StateOnly }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport<F: Scalar = f64> {
    /// MSE before each epoch's update, then the final MSE.
    pub loss_curve: Vec<F>,
    pub final_learning_rate: F,
    pub train_records: usize,
}

/// Mean squared error of `weights`/`bias` on standardized rows.
fn mse<F: Scalar>(rows: &[Vec<F>], labels: &[F], weights: &[F], bias: F) -> F {
    let n = F::of_usize(rows.len());
    rows.iter()
        .zip(labels)
        .map(|(x, &y)| {
            let r = bias + x.iter().zip(weights).map(|(&a, &w)| a * w).sum::<F>() - y;
            r * r
        })
        .sum::<F>()
        / n
}

/// Fits the regressor on the train-split records.
///
/// Inputs are standardized. A step that would raise the loss is undone and
/// the learning rate halved; a successful step grows it by 5%, so the loss
/// curve never increases.
pub fn train_regressor<F: Scalar>(
    records: &[DatasetRecord],
    cfg: &TrainConfig<F>,
) -> Result<(RegressorModel<F>, TrainReport<F>), TrainError> {
    let train: Vec<&DatasetRecord> = records.iter().filter(|r| r.split == Split::Train).collect();
    if train.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    let mut model = RegressorModel {
        mode: cfg.mode,
        weights: vec![F::zero(); N_INPUTS],
        bias: F::zero(),
        means: vec![F::zero(); N_INPUTS],
        scales: vec![F::one(); N_INPUTS],
        epochs: cfg.epochs,
        final_loss: F::zero(),
        n_max: train.iter().map(|r| r.label).max().unwrap_or(0),
    };

    let mut raw = Vec::with_capacity(train.len());
    for r in &train {
        let mut x = featurize::<F>(&model.query_for(r))?;
        if cfg.mode == InputMode::StateOnly {
            x[HISTORY_FEATURE] = F::zero();
        }
        raw.push(x);
    }
    let n = F::of_usize(raw.len());
    for j in 0..N_INPUTS {
        let mean = raw.iter().map(|x| x[j]).sum::<F>() / n;
        let var = raw.iter().map(|x| (x[j] - mean) * (x[j] - mean)).sum::<F>() / n;
        model.means[j] = mean;
        model.scales[j] = if var > F::of(1e-12) { var.sqrt() } else { F::one() };
    }
    let rows: Vec<Vec<F>> = raw.iter().map(|x| model.standardize(x)).collect();
    let labels: Vec<F> = train.iter().map(|r| F::of(r.label as f64)).collect();

    let two = F::of(2.0);
    let mut lr = cfg.learning_rate;
    let mut loss = mse(&rows, &labels, &model.weights, model.bias);
    let mut curve = Vec::with_capacity(cfg.epochs + 1);
    for epoch in 0..cfg.epochs {
        curve.push(loss);
        let mut grad_w = vec![F::zero(); N_INPUTS];
        let mut grad_b = F::zero();
        for (x, &y) in rows.iter().zip(&labels) {
            let r = model.bias + x.iter().zip(&model.weights).map(|(&a, &w)| a * w).sum::<F>() - y;
            grad_b = grad_b + two * r;
            for j in 0..N_INPUTS {
                grad_w[j] = grad_w[j] + two * r * x[j];
            }
        }
        grad_b = grad_b / n;
        for g in &mut grad_w {
            *g = *g / n;
        }
        loop {
            let w: Vec<F> = model.weights.iter().zip(&grad_w).map(|(&w, &g)| w - lr * g).collect();
            let b = model.bias - lr * grad_b;
            let next = mse(&rows, &labels, &w, b);
            if !next.is_finite() && lr < F::min_positive_value() {
                return Err(TrainError::Diverged { epoch, loss: next.as_f64(), learning_rate: lr.as_f64() });
            }
            if next.is_finite() && next <= loss {
                model.weights = w;
                model.bias = b;
                loss = next;
                lr = lr * F::of(1.05);
                break;
            }
            lr = lr / two;
            if lr < F::min_positive_value() {
                // no descent direction left at this precision
                break;
            }
        }
        if !loss.is_finite() {
            return Err(TrainError::Diverged { epoch, loss: loss.as_f64(), learning_rate: lr.as_f64() });
        }
    }
    curve.push(loss);
    model.final_loss = loss;
    let report = TrainReport { loss_curve: curve, final_learning_rate: lr, train_records: train.len() };
    Ok((model, report))
}
