use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use progress_prover::dataset::{
    apply_split, balance, extract_records, read_dataset, split, write_dataset, DatasetRecord, RatioTable, Split,
    SplitFractions,
};
use progress_prover::env::{gen_corpus, load_corpus, Corpus, CorpusReport, RuleSet};
use progress_prover::error::{CorpusError, DatasetError, ModelFileError};
use progress_prover::eval::{benchmark, per_range_report_within, sweep, BenchSetup, Method, PredictorSpec, SweepParam};
use progress_prover::predictor::{
    train_regressor, ExactOracle, InputMode, NoisyOracle, Predictor, RegressorModel, RemoteConfig, RemotePredictor,
    TrainConfig,
};
use progress_prover::search::{mine, read_trajectories, write_trajectories, ScoreMode, SearchConfig, SearchLimits};
use progress_prover::tacticgen::{GenConfig, Heuristic};

use super::config::{write_manifest, Settings};
use super::{
    BenchArgs, BenchFlags, BuildDatasetArgs, CliError, Command, Common, EvalArgs, GenCorpusArgs, MineArgs,
    PredictorFlags, SearchFlags, SweepArgs, TrainArgs,
};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::GenCorpus(a) => gen_corpus_cmd(a),
        Command::Mine(a) => mine_cmd(a),
        Command::BuildDataset(a) => build_dataset_cmd(a),
        Command::Train(a) => train_cmd(a),
        Command::EvalPredictor(a) => eval_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn corpus_err(e: CorpusError) -> CliError {
    match e {
        CorpusError::Io { .. } => CliError::Io(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

fn dataset_err(e: DatasetError) -> CliError {
    match e {
        DatasetError::Io { .. } => CliError::Io(e.to_string()),
        other => CliError::Runtime(other.to_string()),
    }
}

fn model_err(e: ModelFileError) -> CliError {
    match e {
        ModelFileError::Io { .. } => CliError::Io(e.to_string()),
        other => CliError::Config(format!("model file: {other}")),
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn start(common: &Common) -> Result<Settings, CliError> {
    let settings = Settings::load(common.config.as_deref())?;
    if let Some(n) = common.workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        // Only the first call per process can set the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(settings)
}

fn finish(settings: &Settings) {
    for key in settings.unused() {
        eprintln!("progress: warning: config key {key:?} is not used by this command");
    }
}

fn parse_rules(text: &str) -> Result<RuleSet, CliError> {
    text.parse().map_err(|e| CliError::Config(format!("--rules: {e}")))
}

fn search_config(s: &mut Settings, f: &SearchFlags) -> Result<SearchConfig<f64>, CliError> {
    let samples = s.get("samples", f.samples, 32usize)?;
    let temperature = s.get("temperature", f.temperature, 0.7f64)?;
    let heuristic = s.get("heuristic", f.heuristic, Heuristic::Uniform)?;
    if samples == 0 {
        return Err(CliError::Config("--samples must be at least 1".into()));
    }
    if !(temperature > 0.0) {
        return Err(CliError::Config("--temperature must be positive".into()));
    }
    let limits = SearchLimits {
        max_expansions: s.get("budget", f.budget, 200usize)?,
        max_depth: s.get("max-depth", f.max_depth, 64usize)?,
        timeout: Duration::from_secs(s.get("timeout-secs", f.timeout_secs, 120u64)?),
    };
    Ok(SearchConfig { gen: GenConfig::new(samples, temperature, heuristic), limits, ..SearchConfig::default() })
}

fn gen_corpus_cmd(a: GenCorpusArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let count = s.get("count", a.count, 500u64)?;
    let max_size = s.get("max-size", a.max_size, 9usize)?;
    let seed = s.require::<u64>("seed", a.seed)?;
    let rules = parse_rules(&s.get("rules", a.rules, RuleSet::peano().to_string())?)?;
    if count == 0 {
        return Err(CliError::Config("--count must be at least 1".into()));
    }
    if max_size < 3 {
        return Err(CliError::Config("--max-size must be at least 3".into()));
    }
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let corpus = Corpus::new(rules, gen_corpus(count as usize, max_size, seed));
    let report = CorpusReport::of(&corpus.theorems).to_string();
    let corpus_path = out.join("corpus.txt");
    let report_path = out.join("corpus_report.txt");
    write(&corpus_path, &corpus.render())?;
    write(&report_path, &report)?;
    print!("{report}");
    write_manifest(&out, "gen-corpus", &s, &[("corpus.txt", &corpus_path), ("corpus_report.txt", &report_path)])
}

fn mine_cmd(a: MineArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let corpus_path = s.input("corpus", a.corpus)?;
    let cfg = search_config(&mut s, &a.search)?;
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let corpus = load_corpus(&corpus_path).map_err(corpus_err)?;
    let mined = mine(&corpus, &cfg).map_err(runtime)?;

    let trees = out.join("trees.txt");
    let trajectories = out.join("trajectories.jsonl");
    let unmined = out.join("unmined.txt");
    let report_path = out.join("mine_report.txt");
    write(&trees, &mined.render_trees())?;
    write_trajectories(&mined.trajectories, &trajectories).map_err(dataset_err)?;
    write(&unmined, &mined.unmined.iter().map(|id| format!("{id}\n")).collect::<String>())?;
    let report = format!(
        "theorems {}\nproved {}\nunmined {}\nsolve rate {:.1}%\n",
        corpus.theorems.len(),
        mined.trajectories.len(),
        mined.unmined.len(),
        mined.solve_rate()
    );
    write(&report_path, &report)?;
    print!("{report}");
    write_manifest(
        &out,
        "mine",
        &s,
        &[
            ("corpus", &corpus_path),
            ("trees.txt", &trees),
            ("trajectories.jsonl", &trajectories),
            ("unmined.txt", &unmined),
            ("mine_report.txt", &report_path),
        ],
    )
}

fn build_dataset_cmd(a: BuildDatasetArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let traj_path = s.input("trajectories", a.trajectories)?;
    let ratios = s.get("ratios", a.ratios, RatioTable::default().to_string())?;
    let ratios = RatioTable::parse(&ratios).map_err(|e| CliError::Config(format!("--ratios: {e}")))?;
    let fractions = s.get("fractions", a.fractions, "0.8,0.1,0.1".to_string())?;
    let fractions = SplitFractions::parse(&fractions).map_err(|e| CliError::Config(format!("--fractions: {e}")))?;
    let seed = s.require::<u64>("seed", a.seed)?;
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let trajectories = read_trajectories(&traj_path).map_err(dataset_err)?;
    if trajectories.is_empty() {
        return Err(CliError::Runtime(format!("{}: no trajectories", traj_path.display())));
    }
    let mut records = Vec::new();
    for t in &trajectories {
        let env = t.env().map_err(runtime)?;
        let traj = t.to_trajectory::<f64>().map_err(dataset_err)?;
        records.extend(extract_records(&env, &traj).map_err(dataset_err)?);
    }
    let (mut kept, report) = balance(&records, &ratios, seed);
    let assignment = split(kept.iter().map(|r| r.theorem_id.as_str()), &fractions, seed.wrapping_add(1))
        .map_err(dataset_err)?;
    apply_split(&mut kept, &assignment);

    let mut text = format!("ratios {ratios}\n{report}");
    for sp in [Split::Train, Split::Val, Split::Test] {
        let n = kept.iter().filter(|r| r.split == sp).count();
        let _ = writeln!(text, "{sp} {n}");
    }
    let dataset = out.join("dataset.jsonl");
    let report_path = out.join("balance_report.txt");
    write_dataset(&kept, &dataset).map_err(dataset_err)?;
    write(&report_path, &text)?;
    print!("{text}");
    write_manifest(
        &out,
        "build-dataset",
        &s,
        &[("trajectories", &traj_path), ("dataset.jsonl", &dataset), ("balance_report.txt", &report_path)],
    )
}

fn train_cmd(a: TrainArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let data_path = s.input("dataset", a.dataset)?;
    let mode = s.get("input", a.input, InputMode::StateWithHistory.to_string())?;
    let mode: InputMode = mode.parse().map_err(|e| CliError::Config(format!("--input: {e}")))?;
    let cfg = TrainConfig {
        epochs: s.get("epochs", a.epochs, 2000usize)?,
        learning_rate: s.get("learning-rate", a.learning_rate, 0.1f64)?,
        seed: s.get("seed", a.seed, 0u64)?,
        mode,
    };
    if !(cfg.learning_rate > 0.0) {
        return Err(CliError::Config("--learning-rate must be positive".into()));
    }
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let records = read_dataset(&data_path).map_err(dataset_err)?;
    let (model, report) = train_regressor(&records, &cfg).map_err(runtime)?;
    let model_path = out.join("model.txt");
    let loss_path = out.join("loss.csv");
    let report_path = out.join("train_report.txt");
    model.save(&model_path).map_err(model_err)?;
    let mut loss = String::from("epoch,mse\n");
    for (i, l) in report.loss_curve.iter().enumerate() {
        let _ = writeln!(loss, "{i},{l:.9}");
    }
    write(&loss_path, &loss)?;
    let text = format!(
        "input {}\ntrain records {}\nepochs {}\nfinal mse {:.6}\nfinal learning rate {:.3e}\nn_max {}\n",
        model.mode,
        report.train_records,
        cfg.epochs,
        report.loss_curve.last().copied().unwrap_or(f64::NAN),
        report.final_learning_rate,
        model.n_max
    );
    write(&report_path, &text)?;
    print!("{text}");
    write_manifest(
        &out,
        "train",
        &s,
        &[("dataset", &data_path), ("model.txt", &model_path), ("loss.csv", &loss_path), ("train_report.txt", &report_path)],
    )
}

/// The predictor a stage queries, resolved from flags.
enum Source {
    Model(Arc<RegressorModel<f64>>, PathBuf),
    Exact,
    Noisy(u32),
    Remote(Arc<RemotePredictor>),
}

fn predictor_source(s: &mut Settings, f: &PredictorFlags) -> Result<Source, CliError> {
    let kind = s.get("predictor", f.predictor.clone(), "model".to_string())?;
    match kind.as_str() {
        "model" => {
            let path = s.input("model", f.model.clone())?;
            let model = RegressorModel::load(&path).map_err(model_err)?;
            Ok(Source::Model(Arc::new(model), path))
        }
        "exact" => Ok(Source::Exact),
        "noisy" => Ok(Source::Noisy(s.get("epsilon", f.epsilon, 2u32)?)),
        "remote" => {
            let mut cfg = RemoteConfig::new(s.require::<String>("endpoint", f.endpoint.clone())?);
            cfg.deadline = Duration::from_millis(s.get("deadline-ms", f.deadline_ms, 5000u64)?);
            let mode = s.get("input", f.input.clone(), InputMode::StateOnly.to_string())?;
            cfg.mode = mode.parse().map_err(|e| CliError::Config(format!("--input: {e}")))?;
            Ok(Source::Remote(Arc::new(RemotePredictor::new(cfg).map_err(runtime)?)))
        }
        other => Err(CliError::Config(format!("--predictor: unknown predictor {other:?}"))),
    }
}

fn eval_cmd(a: EvalArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let data_path = s.input("dataset", a.dataset)?;
    let split_name = s.get("split", a.split, Split::Test.to_string())?;
    let which: Split = split_name.parse().map_err(|e| CliError::Config(format!("--split: {e}")))?;
    let rules = parse_rules(&s.get("rules", a.rules, RuleSet::peano().to_string())?)?;
    let source = predictor_source(&mut s, &a.predictor)?;
    let runs = s.get("runs", a.runs, 3usize)?;
    let seed = s.require::<u64>("seed", a.seed)?;
    let tolerance = s.get("tolerance", a.tolerance, 0u64)?;
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let records: Vec<DatasetRecord> =
        read_dataset(&data_path).map_err(dataset_err)?.into_iter().filter(|r| r.split == which).collect();
    if records.is_empty() {
        return Err(CliError::Runtime(format!("no records in the {which} split")));
    }
    let exact = Arc::new(ExactOracle::new(progress_prover::env::Environment::new(rules)));
    let report = per_range_report_within(&records, runs, seed, tolerance, |run_seed| -> Arc<dyn Predictor> {
        match &source {
            Source::Model(m, _) => m.clone(),
            Source::Exact => exact.clone(),
            Source::Noisy(eps) => Arc::new(NoisyOracle::new(exact.clone(), *eps, run_seed)),
            Source::Remote(r) => r.clone(),
        }
    })
    .map_err(runtime)?;

    let text = format!("predictor {}  split {which}  tolerance {tolerance}\n{report}", report.predictor);
    let txt = out.join("range.txt");
    let csv = out.join("range.csv");
    write(&txt, &text)?;
    write(&csv, &report.to_csv())?;
    print!("{text}");
    let mut artifacts: Vec<(&str, &Path)> = vec![("dataset", &data_path)];
    if let Source::Model(_, p) = &source {
        artifacts.push(("model", p));
    }
    artifacts.extend([("range.txt", txt.as_path()), ("range.csv", csv.as_path())]);
    write_manifest(&out, "eval-predictor", &s, &artifacts)
}

/// Corpus, methods and setup shared by `bench` and `sweep`.
struct Bench {
    corpus: Corpus,
    corpus_path: PathBuf,
    model_path: Option<PathBuf>,
    logp: Method,
    guided: Option<Method>,
    setup: BenchSetup,
}

fn bench_inputs(s: &mut Settings, f: &BenchFlags, workers: Option<usize>) -> Result<Bench, CliError> {
    let corpus_path = s.input("corpus", f.corpus.clone())?;
    let corpus = load_corpus(&corpus_path).map_err(corpus_err)?;
    let scorer = s.get("scorer", f.scorer.clone(), ScoreMode::Combined.to_string())?;
    let scorer: ScoreMode = scorer.parse().map_err(|e| CliError::Config(format!("--scorer: {e}")))?;
    let cfg = search_config(s, &f.search)?;
    let runs = s.get("runs", f.runs, 3usize)?;
    let seed = s.require::<u64>("seed", f.seed)?;
    if runs == 0 {
        return Err(CliError::Config("--runs must be at least 1".into()));
    }
    let setup = BenchSetup { gen: cfg.gen, limits: cfg.limits, runs, seed, workers };

    let mut model_path = None;
    let guided = match scorer {
        ScoreMode::LogP => None,
        ScoreMode::Combined => {
            let alpha = s.get("alpha", f.alpha, 0.2f64)?;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(CliError::Config("--alpha must lie in [0, 1]".into()));
            }
            let source = predictor_source(s, &f.predictor)?;
            let default_n_max = match &source {
                Source::Model(m, _) => m.n_max as f64,
                _ => longest_oracle_proof(&corpus)?,
            };
            let n_max = s.get("n-max", f.n_max, default_n_max.max(1.0))?;
            if !(n_max > 0.0) {
                return Err(CliError::Config("--n-max must be positive".into()));
            }
            let (name, spec) = match source {
                Source::Model(m, p) => {
                    model_path = Some(p);
                    ("model".to_string(), PredictorSpec::Shared(m))
                }
                Source::Exact => ("exact".to_string(), PredictorSpec::Exact),
                Source::Noisy(epsilon) => (format!("noisy(eps={epsilon})"), PredictorSpec::Noisy { epsilon }),
                Source::Remote(r) => ("remote".to_string(), PredictorSpec::Shared(r)),
            };
            Some(Method::combined(format!("combined[{name}]"), alpha, n_max, spec))
        }
    };
    Ok(Bench { corpus, corpus_path, model_path, logp: Method::logp(), guided, setup })
}

fn longest_oracle_proof(corpus: &Corpus) -> Result<f64, CliError> {
    let oracle = ExactOracle::new(corpus.env());
    let mut longest = 0;
    for th in &corpus.theorems {
        let d = oracle.distance(&th.goal()).map_err(runtime)?;
        longest = longest.max(d);
    }
    Ok(longest as f64)
}

fn bench_cmd(a: BenchArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let b = bench_inputs(&mut s, &a.bench, a.common.workers)?;
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let mut methods = vec![b.logp.clone()];
    methods.extend(b.guided.clone());
    let report = benchmark(&b.corpus, &methods, &b.setup).map_err(runtime)?;
    let txt = out.join("bench.txt");
    let csv = out.join("outcomes.csv");
    write(&txt, &report.to_string())?;
    write(&csv, &report.to_csv())?;
    print!("{report}");
    let mut artifacts: Vec<(&str, &Path)> = vec![("corpus", &b.corpus_path)];
    if let Some(p) = &b.model_path {
        artifacts.push(("model", p));
    }
    artifacts.extend([("bench.txt", txt.as_path()), ("outcomes.csv", csv.as_path())]);
    write_manifest(&out, "bench", &s, &artifacts)
}

fn sweep_cmd(a: SweepArgs) -> Result<(), CliError> {
    let mut s = start(&a.common)?;
    let param = s.require::<String>("param", a.param)?;
    let param: SweepParam = param.parse().map_err(|e| CliError::Config(format!("--param: {e}")))?;
    let values = s.require::<String>("values", a.values)?;
    let values: Vec<f64> = values
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("--values: {e}")))?;
    if values.is_empty() {
        return Err(CliError::Config("--values is empty".into()));
    }
    let b = bench_inputs(&mut s, &a.bench, a.common.workers)?;
    let out = s.out_dir(a.common.out)?;
    finish(&s);

    let base = match (&b.guided, param) {
        (Some(m), _) => m.clone(),
        (None, SweepParam::Alpha) => {
            return Err(CliError::Config("an alpha sweep needs --scorer combined".into()));
        }
        (None, _) => b.logp.clone(),
    };
    for &v in &values {
        let ok = match param {
            SweepParam::Alpha => (0.0..=1.0).contains(&v),
            SweepParam::Temperature => v > 0.0,
            SweepParam::Samples => v >= 1.0 && v.fract() == 0.0,
        };
        if !ok {
            return Err(CliError::Config(format!("--values: {v} is not a valid {param}")));
        }
    }
    let table = sweep(&b.corpus, param, &values, &base, &b.setup).map_err(runtime)?;
    let text = format!("method {}\n{table}", base.name);
    let txt = out.join("sweep.txt");
    let csv = out.join("sweep.csv");
    write(&txt, &text)?;
    write(&csv, &table.to_csv())?;
    print!("{text}");
    let mut artifacts: Vec<(&str, &Path)> = vec![("corpus", &b.corpus_path)];
    if let Some(p) = &b.model_path {
        artifacts.push(("model", p));
    }
    artifacts.extend([("sweep.txt", txt.as_path()), ("sweep.csv", csv.as_path())]);
    write_manifest(&out, "sweep", &s, &artifacts)
}
