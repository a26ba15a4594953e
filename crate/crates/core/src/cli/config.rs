//! Flag, config-file and default resolution, plus run manifests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::CliError;

/// Resolves settings with precedence flag > config file > default and
/// remembers every resolved value for the manifest.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
}

/// Parses `key = value` lines. `#` starts a comment; `sha256.*` keys written
/// into manifests are skipped so a manifest can be fed back as a config.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.starts_with("sha256.") {
            continue;
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("config line {}: duplicate key {key:?}", i + 1)));
        }
    }
    Ok(out)
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            None => BTreeMap::new(),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
                parse_config(&text)?
            }
        };
        Ok(Settings { file, ..Settings::default() })
    }

    fn lookup<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.consumed.insert(key.to_string());
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(text) => Some(
                    text.parse::<T>()
                        .map_err(|e| CliError::Config(format!("config key {key}: {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.lookup(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.resolved.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.lookup(key, flag)?.ok_or_else(|| CliError::Config(format!("missing --{key}")))
    }

    /// A required input file; it must exist.
    pub fn input(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        let text = self.require::<String>(key, flag.map(|p| p.display().to_string()))?;
        let path = PathBuf::from(text);
        if !path.is_file() {
            return Err(CliError::Config(format!("--{key}: no such file {}", path.display())));
        }
        Ok(path)
    }

    /// The output directory, created if needed. Not recorded in the manifest.
    pub fn out_dir(&mut self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.consumed.insert("out".into());
        let dir = match flag {
            Some(p) => p,
            None => self.file.get("out").map(PathBuf::from).ok_or_else(|| CliError::Config("missing --out".into()))?,
        };
        fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(dir)
    }

    /// Config-file keys no stage setting asked for.
    pub fn unused(&self) -> Vec<&str> {
        self.file.keys().filter(|k| !self.consumed.contains(*k)).map(String::as_str).collect()
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Writes `manifest.txt` into `dir`: the command, every resolved setting,
/// and a hash per input and output artifact. Usable as a `--config` file.
pub fn write_manifest(
    dir: &Path,
    command: &str,
    settings: &Settings,
    artifacts: &[(&str, &Path)],
) -> Result<(), CliError> {
    let mut text = format!("# progress {command}\n");
    for (k, v) in settings.resolved() {
        let _ = writeln!(text, "{k}={v}");
    }
    for (name, path) in artifacts {
        let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let _ = writeln!(text, "sha256.{name}={}", sha256_hex(&bytes));
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_file_beats_default() {
        let mut s = Settings { file: parse_config("alpha = 0.5\nsamples=8\n# note\n").unwrap(), ..Settings::default() };
        assert_eq!(s.get("alpha", Some(0.3), 0.2).unwrap(), 0.3);
        assert_eq!(s.get::<usize>("samples", None, 32).unwrap(), 8);
        assert_eq!(s.get("temperature", None, 0.7).unwrap(), 0.7);
        assert_eq!(s.resolved()["alpha"], "0.3");
        assert!(s.require::<u64>("seed", None).is_err());
    }

    #[test]
    fn manifests_read_back_as_configs() {
        let c = parse_config("seed=4\nsha256.corpus=abc\nmax_size=9\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c["max-size"], "9");
        assert!(parse_config("novalue\n").is_err());
        assert!(parse_config("a=1\na=2\n").is_err());
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
