//! Runtime configuration: defaults, a `key=value` file and environment overrides.
//!
//! Precedence, highest first: command-line flags, `ZKDISTILL_*` environment
//! variables, the config file, built-in defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;
use zkdistill_core::distillation::DEFAULT_BISECTION_TOL;
use zkdistill_core::protosim::{DEFAULT_EXHAUSTIVE_LIMIT, MAX_EXHAUSTIVE_LIMIT};

pub const ENV_PREFIX: &str = "ZKDISTILL_";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("reading config {path}: {message}")]
    Io { path: String, message: String },
    #[error("{origin}: line {line}: expected key=value")]
    Syntax { origin: String, line: usize },
    #[error("{origin}: unknown key {key:?}")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: invalid value {value:?} for {key}")]
    Value { origin: String, key: String, value: String },
    #[error("bisection tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("exhaustive limit {0} exceeds {MAX_EXHAUSTIVE_LIMIT}")]
    Limit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub output_format: OutputFormat,
    pub mek_params_path: Option<PathBuf>,
    pub bisection_tol: f64,
    pub exhaustive_limit: usize,
    /// `None` means one thread per core.
    pub parallel_degree: Option<usize>,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            output_format: OutputFormat::Text,
            mek_params_path: None,
            bisection_tol: DEFAULT_BISECTION_TOL,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            parallel_degree: None,
        }
    }
}

const KEYS: [&str; 5] = ["format", "mek_params", "bisection_tol", "exhaustive_limit", "parallel_degree"];

impl CliConfig {
    fn set(&mut self, origin: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::Value { origin: origin.into(), key: key.into(), value: value.into() };
        match key {
            "format" => self.output_format = value.parse().map_err(|_| bad())?,
            "mek_params" => self.mek_params_path = (!value.is_empty()).then(|| PathBuf::from(value)),
            "bisection_tol" => self.bisection_tol = value.parse().map_err(|_| bad())?,
            "exhaustive_limit" => self.exhaustive_limit = value.parse().map_err(|_| bad())?,
            "parallel_degree" => {
                self.parallel_degree = match value {
                    "auto" | "" => None,
                    v => Some(v.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(bad)?),
                }
            }
            _ => return Err(ConfigError::UnknownKey { origin: origin.into(), key: key.into() }),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, origin: &str, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| ConfigError::Syntax { origin: origin.into(), line: i + 1 })?;
            self.set(origin, key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        self.apply_file_text(&path.display().to_string(), &text)
    }

    /// Applies `ZKDISTILL_FORMAT`, `ZKDISTILL_MEK_PARAMS`, ... from `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        for key in KEYS {
            let var = format!("{ENV_PREFIX}{}", key.to_ascii_uppercase());
            if let Some(value) = lookup(&var) {
                self.set(&var, key, value.trim())?;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.bisection_tol > 0.0) {
            return Err(ConfigError::Tolerance(self.bisection_tol));
        }
        if self.exhaustive_limit > MAX_EXHAUSTIVE_LIMIT {
            return Err(ConfigError::Limit(self.exhaustive_limit));
        }
        Ok(())
    }

    /// Defaults, then the config file (explicit path or `ZKDISTILL_CONFIG`), then the environment.
    pub fn load(file: Option<&Path>, lookup: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        let from_env = lookup(&format!("{ENV_PREFIX}CONFIG")).map(PathBuf::from);
        if let Some(path) = file.map(Path::to_path_buf).or(from_env) {
            c.apply_file(&path)?;
        }
        c.apply_env(lookup)?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn file_then_env() {
        let mut c = CliConfig::default();
        c.apply_file_text("f", "format = json\nexhaustive_limit=20 # comment\n\nparallel_degree=auto\n").unwrap();
        assert_eq!(c.output_format, OutputFormat::Json);
        assert_eq!(c.exhaustive_limit, 20);
        let env: HashMap<&str, &str> = [("ZKDISTILL_FORMAT", "csv"), ("ZKDISTILL_PARALLEL_DEGREE", "4")].into();
        c.apply_env(|k| env.get(k).map(|v| v.to_string())).unwrap();
        assert_eq!(c.output_format, OutputFormat::Csv);
        assert_eq!(c.exhaustive_limit, 20);
        assert_eq!(c.parallel_degree, Some(4));
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = CliConfig::default();
        assert!(matches!(c.apply_file_text("f", "format=xml"), Err(ConfigError::Value { .. })));
        assert!(matches!(c.apply_file_text("f", "colour=red"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(c.apply_file_text("f", "just words"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(c.apply_file_text("f", "parallel_degree=0"), Err(ConfigError::Value { .. })));
        c.exhaustive_limit = 32;
        assert_eq!(c.validate(), Err(ConfigError::Limit(32)));
        c.exhaustive_limit = 25;
        c.bisection_tol = 0.0;
        assert_eq!(c.validate(), Err(ConfigError::Tolerance(0.0)));
    }

    #[test]
    fn defaults() {
        let c = CliConfig::load(None, |_| None).unwrap();
        assert_eq!(c, CliConfig::default());
        assert_eq!(c.exhaustive_limit, 25);
        assert_eq!(c.bisection_tol, 1e-12);
    }
}
