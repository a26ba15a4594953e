use std::fmt;
use std::sync::Arc;

use super::metrics::{accuracy_within, mae, mean_std};
use super::run_seeds;
use crate::dataset::{DatasetRecord, RatioTable, BUCKET_LABELS};
use crate::error::EvalError;
use crate::predictor::{InputMode, Predictor, PredictorQuery};

/// Accuracy and MAE for one label range, as mean and sample std over runs.
/// Empty ranges have no metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeRow {
    pub range: String,
    pub count: usize,
    pub accuracy: Option<(f64, f64)>,
    pub mae: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeReport {
    pub predictor: String,
    pub mode: InputMode,
    pub runs: usize,
    /// The five buckets followed by `Overall`.
    pub rows: Vec<RangeRow>,
    /// Per run, per row: `(accuracy, mae)`; `None` for empty buckets.
    pub per_run: Vec<Vec<Option<(f64, f64)>>>,
}

impl RangeReport {
    pub fn overall(&self) -> &RangeRow {
        self.rows.last().expect("report has an Overall row")
    }

    pub fn bucket_rows(&self) -> &[RangeRow] {
        &self.rows[..self.rows.len() - 1]
    }

    /// `range,count,accuracy_mean,accuracy_std,mae_mean,mae_std`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("input,range,count,accuracy_mean,accuracy_std,mae_mean,mae_std\n");
        for r in &self.rows {
            let (a, m) = (pair(r.accuracy), pair(r.mae));
            out.push_str(&format!("{},{},{},{},{},{},{}\n", self.mode, r.range, r.count, a.0, a.1, m.0, m.1));
        }
        out
    }
}

fn pair(v: Option<(f64, f64)>) -> (String, String) {
    match v {
        Some((m, s)) => (format!("{m:.6}"), format!("{s:.6}")),
        None => (String::new(), String::new()),
    }
}

impl fmt::Display for RangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<13} {:<8} {:>13} {:>16} {:>14}", "Input", "Range", "Total Samples", "Accuracy (%)", "MAE")?;
        for (i, r) in self.rows.iter().enumerate() {
            let input = if i == 0 { self.mode.to_string() } else { String::new() };
            let acc = r.accuracy.map_or("-".into(), |(m, s)| format!("{m:.1} ± {s:.1}"));
            let mae = r.mae.map_or("-".into(), |(m, s)| format!("{m:.2} ± {s:.2}"));
            writeln!(f, "{:<13} {:<8} {:>13} {:>16} {:>14}", input, r.range, r.count, acc, mae)?;
        }
        Ok(())
    }
}

/// Buckets `records` by label and scores `make(seed)` on each bucket and
/// overall, once per run. Deterministic predictors give zero std.
pub fn per_range_report<P, M>(
    records: &[DatasetRecord],
    runs: usize,
    seed: u64,
    make: M,
) -> Result<RangeReport, EvalError>
where
    P: Predictor + ?Sized,
    M: Fn(u64) -> Arc<P>,
{
    per_range_report_within(records, runs, seed, 0, make)
}

/// [`per_range_report`] with accuracy counting predictions within
/// `tolerance` steps of the label as hits.
pub fn per_range_report_within<P, M>(
    records: &[DatasetRecord],
    runs: usize,
    seed: u64,
    tolerance: u64,
    make: M,
) -> Result<RangeReport, EvalError>
where
    P: Predictor + ?Sized,
    M: Fn(u64) -> Arc<P>,
{
    if records.is_empty() || runs == 0 {
        return Err(EvalError::Empty);
    }
    let mut counts = [0usize; 5];
    for r in records {
        counts[RatioTable::bucket(r.label)] += 1;
    }

    let mut per_run = Vec::with_capacity(runs);
    let mut name = String::new();
    let mut mode = InputMode::StateOnly;
    for run_seed in run_seeds(seed, runs) {
        let predictor = make(run_seed);
        name = predictor.name();
        mode = predictor.input_mode();
        let mut buckets: [Vec<(f64, f64)>; 5] = Default::default();
        let mut all = Vec::with_capacity(records.len());
        for r in records {
            let query = match mode {
                InputMode::StateOnly => PredictorQuery::state_only(r.state.clone()),
                InputMode::StateWithHistory => PredictorQuery::with_history(r.state.clone(), r.history.clone()),
            };
            let pair = (predictor.predict(&query)?.steps, r.label as f64);
            buckets[RatioTable::bucket(r.label)].push(pair);
            all.push(pair);
        }
        let mut row: Vec<Option<(f64, f64)>> = buckets
            .iter()
            .map(|b| if b.is_empty() { None } else { Some((accuracy_within(b, tolerance).unwrap(), mae(b).unwrap())) })
            .collect();
        row.push(Some((accuracy_within(&all, tolerance)?, mae(&all)?)));
        per_run.push(row);
    }

    let labels = BUCKET_LABELS.iter().copied().chain(["Overall"]);
    let counts = counts.into_iter().chain([records.len()]);
    let rows = labels
        .zip(counts)
        .enumerate()
        .map(|(i, (range, count))| {
            let vals: Vec<(f64, f64)> = per_run.iter().filter_map(|run| run[i]).collect();
            let (accuracy, mae) = if vals.is_empty() {
                (None, None)
            } else {
                let a: Vec<f64> = vals.iter().map(|v| v.0).collect();
                let m: Vec<f64> = vals.iter().map(|v| v.1).collect();
                (Some(mean_std(&a)), Some(mean_std(&m)))
            };
            RangeRow { range: range.to_string(), count, accuracy, mae }
        })
        .collect();

    Ok(RangeReport { predictor: name, mode, runs, rows, per_run })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Split;
    use crate::error::PredictError;
    use crate::predictor::Prediction;

    struct Fixed(Vec<(String, f64)>);

    impl Predictor for Fixed {
        fn predict(&self, q: &PredictorQuery) -> Result<Prediction, PredictError> {
            Ok(Prediction::new(self.0.iter().find(|(s, _)| *s == q.state_fp).unwrap().1))
        }
        fn name(&self) -> String {
            "fixed".into()
        }
    }

    fn rec(state: &str, label: u32) -> DatasetRecord {
        DatasetRecord {
            theorem_id: "t".into(),
            state: state.into(),
            history: vec![],
            label,
            split: Split::Test,
        }
    }

    #[test]
    fn bucketing_of_exact_predictions() {
        let recs = vec![rec("a", 2), rec("b", 8), rec("c", 25)];
        let p = Arc::new(Fixed(vec![("a".into(), 2.0), ("b".into(), 8.0), ("c".into(), 25.0)]));
        let rep = per_range_report(&recs, 3, 9, |_| Arc::clone(&p)).unwrap();
        let counts: Vec<usize> = rep.rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![1, 1, 0, 0, 1, 3]);
        assert_eq!(rep.overall().accuracy, Some((100.0, 0.0)));
        assert_eq!(rep.overall().mae, Some((0.0, 0.0)));
        assert_eq!(rep.rows[2].mae, None);
    }

    #[test]
    fn overall_is_count_weighted() {
        let recs = vec![rec("a", 1), rec("b", 3), rec("c", 7), rec("d", 30)];
        let p = Arc::new(Fixed(vec![
            ("a".into(), 1.4),
            ("b".into(), 5.0),
            ("c".into(), 7.6),
            ("d".into(), 21.25),
        ]));
        let rep = per_range_report(&recs, 1, 0, |_| Arc::clone(&p)).unwrap();
        let weighted: f64 = rep
            .bucket_rows()
            .iter()
            .filter_map(|r| r.mae.map(|m| m.0 * r.count as f64))
            .sum::<f64>()
            / rep.overall().count as f64;
        assert!((weighted - rep.overall().mae.unwrap().0).abs() < 1e-9);
        assert!(rep.to_string().contains("Overall"));
    }

    #[test]
    fn empty_split_is_an_error() {
        let p = Arc::new(Fixed(vec![]));
        assert!(matches!(per_range_report(&[], 1, 0, |_| Arc::clone(&p)), Err(EvalError::Empty)));
    }
}
