use ncdirac_core::perturbation::{correction_reports, split_spectrum, CorrectionReport};

use super::RunContext;
use crate::error::CliError;
use crate::output::{num, opt, write_csv, Sidecar};
use crate::pipeline::{error_status, is_hard_failure, resolve_all, status};

pub const CORRECTIONS_HEADER: [&str; 33] = [
    "n",
    "l",
    "m_l",
    "state_status",
    "E0",
    "E0_source",
    "theta",
    "ekq",
    "d_eps_centrifugal_theta",
    "d_eps_potential_theta",
    "d_eps_coulomb",
    "d_eps_coulomb_theta",
    "d_eps_total",
    "quad_status",
    "dE_theta_quad",
    "dE_field_quad",
    "relative_size",
    "closed_status",
    "dE_closed_re",
    "dE_closed_im",
    "discrepancy",
    "closed_term1",
    "closed_term1_re",
    "closed_term1_im",
    "closed_term2",
    "closed_term2_re",
    "closed_term2_im",
    "closed_term3",
    "closed_term3_re",
    "closed_term3_im",
    "closed_term4",
    "closed_term4_re",
    "closed_term4_im",
];

pub const SPLIT_HEADER: [&str; 6] = ["n", "l", "m_l", "E0", "dE", "E"];

fn report_row(rep: &CorrectionReport, source: &str) -> Vec<String> {
    let s = rep.state;
    let t = rep.terms;
    let mut row = vec![
        s.n.to_string(),
        s.l.to_string(),
        s.m_l.to_string(),
        "ok".into(),
        num(rep.energy),
        source.into(),
        num(rep.theta),
        num(rep.field.strength()),
        num(t.centrifugal_theta),
        num(t.potential_theta),
        num(t.coulomb),
        num(t.coulomb_theta),
        num(rep.d_eps_quad),
        status(&rep.de_quad),
        opt(rep.de_theta_quad.as_ref().ok().copied()),
        opt(rep.de_quad.as_ref().ok().copied()),
        opt(rep.relative_size()),
        status(&rep.de_closed),
        opt(rep.de_closed.as_ref().ok().map(|z| z.re)),
        opt(rep.de_closed.as_ref().ok().map(|z| z.im)),
        opt(rep.discrepancy),
    ];
    for term in &rep.closed_terms {
        match &term.value {
            Ok(Some(z)) => row.extend(["ok".into(), num(z.re), num(z.im)]),
            Ok(None) => row.extend(["omitted".into(), String::new(), String::new()]),
            Err(e) => row.extend([error_status(e), String::new(), String::new()]),
        }
    }
    row
}

fn failed_row(n: u32, l: u32, status: String) -> Vec<String> {
    let mut row = vec![n.to_string(), l.to_string(), String::new(), status];
    row.resize(CORRECTIONS_HEADER.len(), String::new());
    row
}

/// First-order corrections for every m_l of each configured (n, l), plus the split table.
pub fn cmd_correct(ctx: &RunContext) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let p = cfg.potential_params()?;
    let field = cfg.field_params()?;
    let theta = cfg.nc.theta;
    let resolved = resolve_all(cfg, &p)?;
    let mut rows = Vec::new();
    let mut split_rows = Vec::new();
    let mut failures = Vec::new();
    for r in &resolved {
        let bs = match &r.bound {
            Ok(bs) => bs,
            Err(e) => {
                rows.push(failed_row(r.n, r.l, error_status(e)));
                failures.push(format!("n={} l={}: {e}", r.n, r.l));
                continue;
            }
        };
        let source = r.source.map(|s| s.name()).unwrap_or_default();
        match correction_reports(bs, &p, theta, &field) {
            Ok(reps) => rows.extend(reps.iter().map(|rep| report_row(rep, source))),
            Err(e) => {
                rows.push(failed_row(r.n, r.l, error_status(&e)));
                failures.push(format!("n={} l={}: {e}", r.n, r.l));
                continue;
            }
        }
        match split_spectrum(bs, &p, theta, &field) {
            Ok(split) => split_rows.extend(split.iter().map(|s| {
                vec![r.n.to_string(), r.l.to_string(), s.m_l.to_string(), num(s.energy0), num(s.delta_e), num(s.energy)]
            })),
            Err(e) if !is_hard_failure(&e) => {}
            Err(e) => failures.push(format!("n={} l={} split: {e}", r.n, r.l)),
        }
    }
    write_csv(&ctx.path(&cfg.output.corrections), &CORRECTIONS_HEADER, &rows)?;
    write_csv(&ctx.path(&cfg.output.split), &SPLIT_HEADER, &split_rows)?;
    let mut sidecar = Sidecar::new("correct", cfg, ctx.seedless, ctx.seed);
    sidecar.notes = failures.clone();
    ctx.write_sidecar(sidecar, &[&cfg.output.corrections, &cfg.output.split])?;
    if !failures.is_empty() {
        return Err(CliError::Solver(failures.join("; ")));
    }
    Ok(())
}
