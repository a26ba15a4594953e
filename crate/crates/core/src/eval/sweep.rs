use std::fmt;
use std::str::FromStr;

use super::bench::{benchmark, BenchSetup, Method};
use crate::env::Corpus;
use crate::error::{EvalError, ParseError};
use crate::search::{ScoreMode, ScorerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    Temperature,
    Samples,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Temperature => "temperature",
            SweepParam::Samples => "samples",
        })
    }
}

impl FromStr for SweepParam {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "alpha" => Ok(SweepParam::Alpha),
            "temperature" => Ok(SweepParam::Temperature),
            "samples" => Ok(SweepParam::Samples),
            other => Err(ParseError::new(0, format!("unknown sweep parameter {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub pass_rates: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn row(&self, value: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.value == value)
    }

    /// `param,value,mean,std,run_rates` with run rates joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,value,mean,std,run_rates\n");
        for r in &self.rows {
            let runs: Vec<String> = r.pass_rates.iter().map(|p| format!("{p:.4}")).collect();
            out.push_str(&format!("{},{},{:.4},{:.4},{}\n", self.param, r.value, r.mean, r.std, runs.join(";")));
        }
        out
    }
}

fn setting(param: SweepParam, value: f64) -> &'static str {
    match param {
        SweepParam::Alpha if value == 0.0 => "Pure LogP",
        SweepParam::Alpha if value == 1.0 => "Pure Steps",
        _ => "",
    }
}

impl fmt::Display for SweepTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.param {
            SweepParam::Alpha => "alpha",
            SweepParam::Temperature => "Temperature",
            SweepParam::Samples => "Samples",
        };
        writeln!(f, "{:<12} {:<12} {:>16}", head, "Setting", "Pass rate (%)")?;
        for r in &self.rows {
            let value = match self.param {
                SweepParam::Samples => format!("{}", r.value),
                _ => format!("{:.1}", r.value),
            };
            let rate = format!("{:.1} ± {:.1}", r.mean, r.std);
            writeln!(f, "{:<12} {:<12} {:>16}", value, setting(self.param, r.value), rate)?;
        }
        Ok(())
    }
}

/// Benchmarks `base` once per value of `param`, everything else fixed.
/// An alpha sweep turns the base scorer into the combined scorer.
pub fn sweep(
    corpus: &Corpus,
    param: SweepParam,
    values: &[f64],
    base: &Method,
    setup: &BenchSetup,
) -> Result<SweepTable, EvalError> {
    if values.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut method = base.clone();
        let mut setup = setup.clone();
        match param {
            SweepParam::Alpha => {
                method.scorer = ScorerConfig { mode: ScoreMode::Combined, alpha: value, ..base.scorer };
            }
            SweepParam::Temperature => setup.gen.temperature = value,
            SweepParam::Samples => setup.gen.budget = value as usize,
        }
        method.name = format!("{param}={value}");
        let report = benchmark(corpus, std::slice::from_ref(&method), &setup)?;
        let m = &report.methods[0];
        rows.push(SweepRow { value, pass_rates: m.pass_rates.clone(), mean: m.mean, std: m.std });
    }
    Ok(SweepTable { param, rows })
}
