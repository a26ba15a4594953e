use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::Value;

use super::{DatasetRecord, Split};
use crate::error::DatasetError;

/// One JSON object per line: `theorem_id`, `state`, `history`, `label`, `split`.
pub fn write_dataset(records: &[DatasetRecord], path: &Path) -> Result<(), DatasetError> {
    let io = |source| DatasetError::Io { path: path.to_path_buf(), source };
    let mut out = BufWriter::new(fs::File::create(path).map_err(io)?);
    for r in records {
        serde_json::to_writer(&mut out, r).expect("dataset records serialize");
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_dataset(path: &Path) -> Result<Vec<DatasetRecord>, DatasetError> {
    let text =
        fs::read_to_string(path).map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })?;
    parse_dataset(&text)
}

pub fn parse_dataset(text: &str) -> Result<Vec<DatasetRecord>, DatasetError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_line(l).map_err(|message| DatasetError::Malformed { line: i + 1, message }))
        .collect()
}

fn parse_line(line: &str) -> Result<DatasetRecord, String> {
    let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let field = |k: &str| v.get(k).ok_or_else(|| format!("missing key {k:?}"));
    let string = |k: &str| -> Result<String, String> {
        field(k)?.as_str().map(str::to_string).ok_or_else(|| format!("{k:?} must be a string"))
    };
    let label = field("label")?
        .as_i64()
        .ok_or_else(|| "\"label\" must be an integer".to_string())?;
    if label < 0 {
        return Err(format!("negative label {label}"));
    }
    let label = u32::try_from(label).map_err(|_| format!("label {label} out of range"))?;
    let history = field("history")?
        .as_array()
        .ok_or_else(|| "\"history\" must be an array".to_string())?
        .iter()
        .map(|h| h.as_str().map(str::to_string).ok_or_else(|| "history entries must be strings".to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let split: Split = string("split")?.parse().map_err(|e: crate::error::ParseError| e.message)?;
    Ok(DatasetRecord { theorem_id: string("theorem_id")?, state: string("state")?, history, label, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_line_layout() {
        let r = DatasetRecord {
            theorem_id: "t1".into(),
            state: "add(z,z)|z".into(),
            history: vec!["R2@[]".into()],
            label: 3,
            split: Split::Val,
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.jsonl");
        write_dataset(&[r.clone()], &p).unwrap();
        assert_eq!(
            fs::read_to_string(&p).unwrap(),
            "{\"theorem_id\":\"t1\",\"state\":\"add(z,z)|z\",\"history\":[\"R2@[]\"],\"label\":3,\"split\":\"val\"}\n"
        );
        assert_eq!(read_dataset(&p).unwrap(), vec![r]);
    }

    #[test]
    fn rejects_negative_labels_with_line_number() {
        let text = "{\"theorem_id\":\"a\",\"state\":\"z|z\",\"history\":[],\"label\":0,\"split\":\"train\"}\n\
                    {\"theorem_id\":\"a\",\"state\":\"z|z\",\"history\":[],\"label\":-1,\"split\":\"train\"}\n";
        match parse_dataset(text) {
            Err(DatasetError::Malformed { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("negative"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_empty_dataset() {
        assert!(parse_dataset("").unwrap().is_empty());
    }

    fn arb_record() -> impl Strategy<Value = DatasetRecord> {
        (
            "[a-z0-9_]{1,8}",
            "[a-z(),|]{1,20}",
            prop::collection::vec("R[1-7]@\\[[0-9,]{0,5}\\]", 0..4),
            0u32..100,
            prop_oneof![Just(Split::Train), Just(Split::Val), Just(Split::Test)],
        )
            .prop_map(|(theorem_id, state, history, label, split)| DatasetRecord {
                theorem_id,
                state,
                history,
                label,
                split,
            })
    }

    proptest! {
        #[test]
        fn write_read_round_trip(records in prop::collection::vec(arb_record(), 0..20)) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("d.jsonl");
            write_dataset(&records, &p).unwrap();
            prop_assert_eq!(read_dataset(&p).unwrap(), records);
        }
    }
}
