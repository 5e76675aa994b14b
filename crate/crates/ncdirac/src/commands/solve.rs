use ncdirac_core::spectrum::QuantizationCondition;

use super::RunContext;
use crate::error::CliError;
use crate::output::{opt, write_csv, write_json, Sidecar};
use crate::pipeline::{is_hard_failure, resolve_all, status, Resolved};
use crate::report::DiscrepancyReport;

pub const SPECTRUM_HEADER: [&str; 18] = [
    "n",
    "l",
    "kappa",
    "paper_status",
    "E_paper",
    "paper_residual_imag",
    "nu_status",
    "E_nu",
    "nu_Lambda",
    "oracle_status",
    "E_oracle",
    "oracle_nodes",
    "oracle_richardson_change",
    "abs_E_nu_minus_E_oracle",
    "wavefunction_status",
    "wavefunction_energy_source",
    "norm_quadrature",
    "norm_error",
];

fn row(r: &Resolved) -> Vec<String> {
    let paper = r.selected_root(QuantizationCondition::PaperPrinted);
    let nu = r.selected_root(QuantizationCondition::ParametricNu);
    let oracle = r.oracle.as_ref().ok();
    let e_nu = nu.as_ref().ok().map(|x| x.energy);
    let e_oracle = oracle.map(|o| o.energy);
    let bound = r.bound.as_ref().ok();
    vec![
        r.n.to_string(),
        r.l.to_string(),
        (-(r.l as i32) - 1).to_string(),
        status(&paper),
        opt(paper.as_ref().ok().map(|x| x.energy)),
        opt(paper.as_ref().ok().map(|x| x.residual_imag)),
        status(&nu),
        opt(e_nu),
        opt(nu.as_ref().ok().map(|x| x.lambda)),
        status(&r.oracle),
        opt(e_oracle),
        oracle.map(|o| o.node_count.to_string()).unwrap_or_default(),
        opt(oracle.and_then(|o| o.richardson).map(|x| x.change())),
        opt(e_nu.zip(e_oracle).map(|(a, b)| (a - b).abs())),
        status(&r.bound),
        r.source.map(|s| s.name().to_string()).unwrap_or_default(),
        opt(bound.map(|b| b.quadrature_norm)),
        opt(bound.map(|b| (b.quadrature_norm - 1.0).abs())),
    ]
}

/// Spectrum table plus the discrepancy report.
pub fn cmd_solve(ctx: &RunContext) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let p = cfg.potential_params()?;
    let resolved = resolve_all(cfg, &p)?;
    let rows: Vec<_> = resolved.iter().map(row).collect();
    write_csv(&ctx.path(&cfg.output.spectrum), &SPECTRUM_HEADER, &rows)?;
    write_json(&ctx.path(&cfg.output.discrepancy), &DiscrepancyReport::build(&p, &resolved))?;
    let mut sidecar = Sidecar::new("solve", cfg, ctx.seedless, ctx.seed);
    let hard: Vec<String> = resolved
        .iter()
        .flat_map(|r| {
            let errs = [
                r.oracle.as_ref().err(),
                r.bound.as_ref().err(),
                r.nu.as_ref().err(),
                r.paper.as_ref().err(),
            ];
            errs.into_iter().flatten().filter(|e| is_hard_failure(e)).map(move |e| format!("n={} l={}: {e}", r.n, r.l))
        })
        .collect();
    sidecar.notes = hard.clone();
    ctx.write_sidecar(sidecar, &[&cfg.output.spectrum, &cfg.output.discrepancy])?;
    if !hard.is_empty() {
        return Err(CliError::Solver(hard.join("; ")));
    }
    Ok(())
}
