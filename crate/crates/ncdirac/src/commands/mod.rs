//! The four subcommands. Each writes its data files and a `run.json` sidecar into
//! the output directory.

mod correct;
mod scan;
mod solve;
mod validate;

use std::path::PathBuf;

pub use correct::{cmd_correct, CORRECTIONS_HEADER, SPLIT_HEADER};
pub use scan::{cmd_scan, parse_axis, ScanAxis, ScanSpec, SCAN_HEADER};
pub use solve::{cmd_solve, SPECTRUM_HEADER};
pub use validate::{cmd_validate, cmd_validate_with};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{write_json, Sidecar};

/// Seed used when `--seedless` is on (the default).
pub const FIXED_SEED: u64 = 0x5eed_0f_d1_7ac;

pub struct RunContext {
    pub cfg: RunConfig,
    pub out: PathBuf,
    pub seedless: bool,
    pub seed: u64,
}

impl RunContext {
    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write_sidecar(&self, mut sidecar: Sidecar, outputs: &[&str]) -> Result<(), CliError> {
        sidecar.outputs = outputs.iter().map(|s| s.to_string()).collect();
        write_json(&self.path(&self.cfg.output.sidecar), &sidecar)
    }
}
