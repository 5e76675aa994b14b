use ncdirac_core::specfun::{Lanczos, GODFREY};

use super::RunContext;
use crate::error::CliError;
use crate::output::{write_json, Sidecar};
use crate::validate::{run_suite, ValidationReport};

/// Runs the invariant suite with the built-in Γ table.
pub fn cmd_validate(ctx: &RunContext) -> Result<ValidationReport, CliError> {
    cmd_validate_with(ctx, &GODFREY)
}

/// Same as [`cmd_validate`] with an explicit Γ table; the report is written even
/// when checks fail.
pub fn cmd_validate_with(ctx: &RunContext, lanczos: &Lanczos) -> Result<ValidationReport, CliError> {
    let cfg = &ctx.cfg;
    let report = run_suite(cfg, lanczos, ctx.seed)?;
    write_json(&ctx.path(&cfg.output.validation), &report)?;
    let mut sidecar = Sidecar::new("validate", cfg, ctx.seedless, ctx.seed);
    sidecar.notes = report.failures().map(|c| format!("{}: {}", c.id, c.detail)).collect();
    ctx.write_sidecar(sidecar, &[&cfg.output.validation])?;
    if !report.passed {
        let ids: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
        return Err(CliError::Validation(format!("failed checks: {}", ids.join(", "))));
    }
    Ok(report)
}
