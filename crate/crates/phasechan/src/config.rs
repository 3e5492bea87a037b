//! Flat key-value experiment configuration files.
//!
//! One `key = value` pair per line, `#` starts a comment; keys mirror the
//! CLI flag names (`n`, `nbar`, `tau`, `sweep`, ...). The `sweep` key may
//! repeat. Command-line flags override file values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::AppError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    sweeps: Vec<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, AppError> {
        let mut cfg = ConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AppError::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(AppError::Config(format!(
                    "line {}: empty key or value",
                    lineno + 1
                )));
            }
            if key == "sweep" {
                cfg.sweeps.push(value.to_string());
            } else {
                cfg.values.insert(key.to_string(), value.to_string());
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, AppError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                AppError::Config(format!("key '{key}': cannot parse '{raw}'"))
            }),
        }
    }

    pub fn sweeps(&self) -> &[String] {
        &self.sweeps
    }

    /// Serialize back to the flat text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        for s in &self.sweeps {
            out.push_str(&format!("sweep = {s}\n"));
        }
        out
    }
}
