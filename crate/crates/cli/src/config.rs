//! Config files carry the glue-data table and optional limit overrides.
//! Rationals travel as strings so nothing is ever rounded.

use crate::Failure;
use crepant_core::geometry::LambdaTable;
use crepant_core::rational::parse_q;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambdas: Vec<LambdaEntry>,
    #[serde(default)]
    pub limits: LimitsFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaEntry {
    pub j: u32,
    pub k: u32,
    pub value: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsFile {
    pub max_arity: Option<usize>,
    pub truncate: Option<u32>,
    pub max_index: Option<i64>,
}

/// Effective limits after applying precedence: command-line flag, then
/// environment variable, then config file, then the built-in default.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_arity: usize,
    pub truncate: u32,
    pub max_index: i64,
}

pub const DEFAULT_LIMITS: Limits = Limits {
    max_arity: 8,
    truncate: 8,
    max_index: 10,
};

fn env_override<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    match std::env::var(name) {
        Ok(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| Failure::Config(format!("environment variable {name}={raw}: {e}"))),
        Err(_) => Ok(None),
    }
}

impl LimitsFile {
    pub fn resolve(&self) -> Result<Limits, Failure> {
        Ok(Limits {
            max_arity: env_override("CREPANT_MAX_ARITY")?
                .or(self.max_arity)
                .unwrap_or(DEFAULT_LIMITS.max_arity),
            truncate: env_override("CREPANT_TRUNCATE")?
                .or(self.truncate)
                .unwrap_or(DEFAULT_LIMITS.truncate),
            max_index: env_override("CREPANT_MAX_INDEX")?
                .or(self.max_index)
                .unwrap_or(DEFAULT_LIMITS.max_index),
        })
    }
}

pub struct LoadedConfig {
    pub table: LambdaTable,
    pub limits: Limits,
}

/// Read and validate a config file; the format is chosen by extension
/// (`.toml` for TOML, JSON otherwise). Errors carry the parser's
/// line/column information.
pub fn load(path: &Path) -> Result<LoadedConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let file: ConfigFile = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
    } else {
        serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
    };

    let mut entries = Vec::with_capacity(file.lambdas.len());
    for entry in &file.lambdas {
        let value = parse_q(&entry.value).map_err(|e| {
            Failure::Config(format!(
                "{}: lambda ({},{}): {e}",
                path.display(),
                entry.j,
                entry.k
            ))
        })?;
        entries.push((entry.j, entry.k, value));
    }
    let table = LambdaTable::from_entries(entries)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let limits = file.limits.resolve()?;
    Ok(LoadedConfig { table, limits })
}
