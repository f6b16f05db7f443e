//! Flag > config file > built-in default resolution.

use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::CliError;

pub const SEED_ENV: &str = "GDS_SEED";

/// Values from an optional JSON config file, keyed by flag name
/// (`max-iters` and `max_iters` are both accepted).
#[derive(Debug, Default)]
pub struct Layers {
    file: Map<String, Value>,
    source: String,
}

impl Layers {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: cannot read config: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: line {}: {e}", path.display(), e.line())))?;
        let Value::Object(file) = value else {
            return Err(CliError::Input(format!("{}: config must be a JSON object", path.display())));
        };
        Ok(Self {
            file,
            source: path.display().to_string(),
        })
    }

    #[cfg(test)]
    pub fn from_json(text: &str) -> Self {
        let Value::Object(file) = serde_json::from_str(text).unwrap() else {
            panic!("not an object")
        };
        Self {
            file,
            source: "test".into(),
        }
    }

    fn raw(&self, key: &str) -> Option<String> {
        let v = self.file.get(key).or_else(|| self.file.get(&key.replace('-', "_")))?;
        Some(match v {
            Value::String(s) => s.clone(),
            Value::Array(items) => items
                .iter()
                .map(|i| match i {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(text) => text
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Input(format!("{}: key `{key}`: {e}", self.source))),
        }
    }

    /// Flag if given, else config value, else `None`.
    pub fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file_value(key),
        }
    }

    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    /// A boolean switch: set by the flag or by `true` in the config file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.file_value::<bool>(key)?.unwrap_or(false))
    }

    /// Flag, then config file, then `GDS_SEED`, then `default`.
    pub fn seed(&self, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        if let Some(s) = self.opt(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
            Err(_) => Ok(default),
        }
    }
}
