use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn progress(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_progress")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = progress(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn zero_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = progress(dir.path(), &["gen-corpus", "--count", "0", "--seed", "1", "--out", "c"]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("cfg"), "count=0\nseed=1\n").unwrap();
    let out = progress(dir.path(), &["gen-corpus", "--config", "cfg", "--out", "c"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_seed_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = progress(dir.path(), &["gen-corpus", "--count", "5", "--out", "c"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_corpus_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen-corpus", "--count", "500", "--max-size", "9", "--seed", "1", "--out", "a"]);
    ok(dir.path(), &["gen-corpus", "--count", "500", "--max-size", "9", "--seed", "1", "--out", "b"]);
    let a = fs::read_to_string(dir.path().join("a/corpus.txt")).unwrap();
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 500);
    assert_eq!(a, fs::read_to_string(dir.path().join("b/corpus.txt")).unwrap());
}

#[test]
fn manifest_reruns_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen-corpus", "--count", "20", "--seed", "3", "--rules", "R1,R2,R3,R4,R7", "--out", "a"]);
    ok(dir.path(), &["gen-corpus", "--config", "a/manifest.txt", "--out", "b"]);
    for f in ["corpus.txt", "manifest.txt"] {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap());
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg"), "count=7\nseed=1\n").unwrap();
    ok(dir.path(), &["gen-corpus", "--config", "cfg", "--count", "4", "--out", "c"]);
    let manifest = fs::read_to_string(dir.path().join("c/manifest.txt")).unwrap();
    assert!(manifest.contains("count=4\n"), "{manifest}");
}

#[test]
fn pipeline_with_default_and_identity_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-corpus", "--count", "30", "--max-size", "7", "--seed", "2", "--out", "c"]);
    let mined = ok(d, &["mine", "--corpus", "c/corpus.txt", "--budget", "300", "--out", "m"]);
    assert!(mined.contains("solve rate"));
    let report = ok(d, &["build-dataset", "--trajectories", "m/trajectories.jsonl", "--seed", "5", "--out", "d"]);
    assert!(report.starts_with("ratios 0.01/0.3/0.5/0.7/1.0\n"), "{report}");
    let identity = ok(
        d,
        &["build-dataset", "--trajectories", "m/trajectories.jsonl", "--ratios", "1,1,1,1,1", "--seed", "5", "--out", "i"],
    );
    let total = identity.lines().find(|l| l.trim_start().starts_with("total")).unwrap();
    let cols: Vec<&str> = total.split_whitespace().collect();
    assert_eq!(cols[1], cols[2], "{identity}");

    ok(d, &["train", "--dataset", "d/dataset.jsonl", "--epochs", "50", "--out", "t"]);
    let out = progress(d, &["eval-predictor", "--dataset", "d/dataset.jsonl", "--model", "nope.txt", "--seed", "1", "--out", "e"]);
    assert_eq!(out.status.code(), Some(2));
    ok(d, &["eval-predictor", "--dataset", "i/dataset.jsonl", "--split", "train", "--predictor", "exact", "--seed", "1", "--out", "e"]);
    let range = fs::read_to_string(d.join("e/range.txt")).unwrap();
    assert!(range.contains("Overall"));
}

#[test]
fn alpha_sweep_prints_the_appendix_layout() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-corpus", "--count", "10", "--max-size", "7", "--seed", "2", "--out", "c"]);
    let table = ok(
        d,
        &["sweep", "--corpus", "c/corpus.txt", "--predictor", "exact", "--param", "alpha", "--values", "0,0.2,0.5,1.0", "--seed", "1", "--out", "s"],
    );
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("0.0") && rows[0].contains("Pure LogP"));
    assert!(rows[1].starts_with("0.2"));
    assert!(rows[3].starts_with("1.0") && rows[3].contains("Pure Steps"));
}

#[test]
fn runtime_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.jsonl"), "").unwrap();
    let out = progress(dir.path(), &["build-dataset", "--trajectories", "empty.jsonl", "--seed", "1", "--out", "d"]);
    assert_eq!(out.status.code(), Some(3));
}
