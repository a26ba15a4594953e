use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::metrics::mean_std;
use super::run_seeds;
use crate::env::Corpus;
use crate::error::EvalError;
use crate::predictor::{ExactOracle, NoisyOracle, Predictor};
use crate::search::{best_first_search, select_shortest, ScorerConfig, SearchConfig, SearchLimits, SearchMode};
use crate::tacticgen::GenConfig;

/// Where a method's step estimates come from.
#[derive(Clone)]
pub enum PredictorSpec {
    None,
    Exact,
    /// Exact distance with per-run seeded noise.
    Noisy { epsilon: u32 },
    /// A prebuilt predictor shared by every run.
    Shared(Arc<dyn Predictor>),
}

impl fmt::Debug for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorSpec::None => f.write_str("None"),
            PredictorSpec::Exact => f.write_str("Exact"),
            PredictorSpec::Noisy { epsilon } => write!(f, "Noisy({epsilon})"),
            PredictorSpec::Shared(p) => write!(f, "Shared({})", p.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Method {
    pub name: String,
    pub scorer: ScorerConfig<f64>,
    pub predictor: PredictorSpec,
}

impl Method {
    pub fn logp() -> Self {
        Method { name: "logp".into(), scorer: ScorerConfig::logp(), predictor: PredictorSpec::None }
    }

    pub fn combined(name: impl Into<String>, alpha: f64, n_max: f64, predictor: PredictorSpec) -> Self {
        Method { name: name.into(), scorer: ScorerConfig::combined(alpha, n_max), predictor }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSetup {
    pub gen: GenConfig<f64>,
    pub limits: SearchLimits,
    pub runs: usize,
    pub seed: u64,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub method: String,
    pub run: usize,
    pub theorem_id: String,
    pub proved: bool,
    pub expansions: usize,
    pub proof_length: Option<usize>,
    /// Set when the predictor failed; the theorem then counts as unproved.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodSummary {
    pub name: String,
    pub pass_rates: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Mean expansions over proved theorems, all runs pooled.
    pub mean_expansions_proved: Option<f64>,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub theorems: usize,
    pub runs: usize,
    pub methods: Vec<MethodSummary>,
    /// Sorted by method order, run, then theorem id.
    pub outcomes: Vec<Outcome>,
}

impl BenchReport {
    pub fn method(&self, name: &str) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.name == name)
    }

    /// `method,run,theorem_id,proved,expansions,proof_length,error`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,run,theorem_id,proved,expansions,proof_length,error\n");
        for o in &self.outcomes {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                o.method,
                o.run,
                o.theorem_id,
                o.proved,
                o.expansions,
                o.proof_length.map_or(String::new(), |l| l.to_string()),
                o.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
            ));
        }
        out
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorems {}  runs {}", self.theorems, self.runs)?;
        writeln!(f, "{:<24} {:>16} {:>12} {:>7}", "Method", "Pass rate (%)", "Expansions", "Errors")?;
        for m in &self.methods {
            let exp = m.mean_expansions_proved.map_or("-".into(), |e| format!("{e:.1}"));
            writeln!(f, "{:<24} {:>16} {:>12} {:>7}", m.name, format!("{:.1} ± {:.1}", m.mean, m.std), exp, m.errors)?;
        }
        Ok(())
    }
}

/// Runs every method on every theorem once per run and aggregates pass
/// rates. Run seeds derive from `setup.seed` and only affect stochastic
/// predictors.
pub fn benchmark(corpus: &Corpus, methods: &[Method], setup: &BenchSetup) -> Result<BenchReport, EvalError> {
    if corpus.theorems.is_empty() || setup.runs == 0 {
        return Err(EvalError::Empty);
    }
    let env = corpus.env();
    let exact = Arc::new(ExactOracle::new(env.clone()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(setup.workers.unwrap_or(0))
        .build()
        .expect("thread pool builds");

    let mut outcomes = Vec::new();
    let mut methods_out = Vec::new();
    for method in methods {
        let mut rates = Vec::with_capacity(setup.runs);
        for (run, run_seed) in run_seeds(setup.seed, setup.runs).into_iter().enumerate() {
            let predictor: Option<Arc<dyn Predictor>> = match &method.predictor {
                PredictorSpec::None => None,
                PredictorSpec::Exact => Some(exact.clone()),
                PredictorSpec::Noisy { epsilon } => Some(Arc::new(NoisyOracle::new(exact.clone(), *epsilon, run_seed))),
                PredictorSpec::Shared(p) => Some(Arc::clone(p)),
            };
            let cfg = SearchConfig {
                gen: GenConfig { seed: run_seed, ..setup.gen.clone() },
                scorer: method.scorer,
                limits: setup.limits,
                mode: SearchMode::FirstProof,
            };
            let mut run_out: Vec<Outcome> = pool.install(|| {
                corpus
                    .theorems
                    .par_iter()
                    .map(|th| {
                        let res = best_first_search(&env, th, &cfg, predictor.as_deref());
                        let (proved, expansions, proof_length, error) = match res {
                            Ok(r) => {
                                let len = r.proved.then(|| select_shortest(&r.proofs).len());
                                (r.proved, r.expansions, len, None)
                            }
                            Err(e) => (false, 0, None, Some(e.to_string())),
                        };
                        Outcome {
                            method: method.name.clone(),
                            run,
                            theorem_id: th.id.clone(),
                            proved,
                            expansions,
                            proof_length,
                            error,
                        }
                    })
                    .collect()
            });
            run_out.sort_by(|a, b| a.theorem_id.cmp(&b.theorem_id));
            let proved = run_out.iter().filter(|o| o.proved).count();
            rates.push(100.0 * proved as f64 / corpus.theorems.len() as f64);
            outcomes.extend(run_out);
        }
        let mine: Vec<&Outcome> = outcomes.iter().filter(|o| o.method == method.name).collect();
        let proved_exp: Vec<f64> = mine.iter().filter(|o| o.proved).map(|o| o.expansions as f64).collect();
        let (mean, std) = mean_std(&rates);
        methods_out.push(MethodSummary {
            name: method.name.clone(),
            pass_rates: rates,
            mean,
            std,
            mean_expansions_proved: (!proved_exp.is_empty()).then(|| mean_std(&proved_exp).0),
            errors: mine.iter().filter(|o| o.error.is_some()).count(),
        });
    }
    Ok(BenchReport { theorems: corpus.theorems.len(), runs: setup.runs, methods: methods_out, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{RuleSet, Theorem};
    use crate::tacticgen::Heuristic;

    fn corpus(lines: &[(&str, &str, &str)]) -> Corpus {
        Corpus::new(
            RuleSet::peano(),
            lines
                .iter()
                .map(|(id, l, r)| Theorem { id: id.to_string(), lhs: l.parse().unwrap(), rhs: r.parse().unwrap() })
                .collect(),
        )
    }

    fn setup(expansions: usize) -> BenchSetup {
        BenchSetup {
            gen: GenConfig::new(32, 0.7, Heuristic::Uniform),
            limits: SearchLimits::expansions(expansions),
            runs: 3,
            seed: 5,
            workers: Some(2),
        }
    }

    #[test]
    fn one_expansion_cannot_prove_two_step_theorems() {
        let c = corpus(&[("a", "add(s(z),s(z))", "s(s(z))"), ("b", "mul(s(z),z)", "z")]);
        let methods = [Method::logp(), Method::combined("combined", 0.2, 4.0, PredictorSpec::Exact)];
        let rep = benchmark(&c, &methods, &setup(1)).unwrap();
        for m in &rep.methods {
            assert_eq!(m.mean, 0.0);
        }
    }

    #[test]
    fn deterministic_methods_have_zero_std_and_sorted_rows() {
        let c = corpus(&[("b", "mul(s(z),z)", "z"), ("a", "add(s(z),s(z))", "s(s(z))")]);
        let rep = benchmark(&c, &[Method::logp()], &setup(50)).unwrap();
        assert_eq!(rep.methods[0].pass_rates, vec![100.0; 3]);
        assert_eq!(rep.methods[0].std, 0.0);
        assert_eq!(rep.outcomes[0].theorem_id, "a");
        assert_eq!(rep.outcomes[0].proof_length, Some(2));
        assert!(rep.to_csv().starts_with("method,run,theorem_id"));
    }

    #[test]
    fn predictor_failure_fails_only_that_theorem() {
        struct Broken;
        impl Predictor for Broken {
            fn predict(&self, q: &crate::predictor::PredictorQuery) -> Result<crate::predictor::Prediction, crate::error::PredictError> {
                Err(crate::error::PredictError::Transport(q.state_fp.clone()))
            }
            fn name(&self) -> String {
                "broken".into()
            }
        }
        let c = corpus(&[("a", "add(s(z),s(z))", "s(s(z))"), ("z", "z", "z")]);
        let m = Method::combined("broken", 0.2, 4.0, PredictorSpec::Shared(Arc::new(Broken)));
        let rep = benchmark(&c, &[m], &setup(10)).unwrap();
        assert_eq!(rep.methods[0].mean, 50.0);
        assert_eq!(rep.methods[0].errors, 3);
    }
}
