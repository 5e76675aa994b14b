//! CSV and JSON emission. Numbers are written with 17 significant digits so that
//! every f64 round-trips; missing values are empty cells.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// Negative zero is written as zero.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        String::new()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Run metadata written next to the data files.
#[derive(Debug, Serialize)]
pub struct Sidecar {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seedless: bool,
    pub seed: u64,
    pub outputs: Vec<String>,
    /// The effective configuration, defaults resolved, as TOML text.
    pub effective_config: String,
    pub notes: Vec<String>,
}

impl Sidecar {
    pub fn new(command: &str, cfg: &RunConfig, seedless: bool, seed: u64) -> Self {
        Sidecar {
            tool: "ncdirac",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seedless,
            seed,
            outputs: Vec::new(),
            effective_config: cfg.to_toml(),
            notes: Vec::new(),
        }
    }
}

pub fn prepare_dir(out: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out)?;
    Ok(out.to_path_buf())
}
