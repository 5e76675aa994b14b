use ncdirac_core::perturbation::{to_energy_shift, unit_integrals, UnitIntegrals};
use ncdirac_core::potential::NcParams;

use super::RunContext;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, opt, write_csv, Sidecar};
use crate::pipeline::{error_status, is_hard_failure, resolve_all, Resolved};

pub const SCAN_HEADER: [&str; 11] = [
    "axis",
    "value",
    "n",
    "l",
    "m_l",
    "state_status",
    "E0",
    "E0_source",
    "dE_theta_quad",
    "dE_field_quad",
    "d_eps_total",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    Theta,
    V0,
    Alpha,
    Q,
    RC,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Theta => "theta",
            ScanAxis::V0 => "V0",
            ScanAxis::Alpha => "alpha",
            ScanAxis::Q => "q",
            ScanAxis::RC => "r_c",
        }
    }

    /// Axes that leave the unperturbed states untouched.
    fn perturbation_only(self) -> bool {
        matches!(self, ScanAxis::Theta | ScanAxis::Q)
    }

    fn apply(self, cfg: &mut RunConfig, value: f64) {
        match self {
            ScanAxis::Theta => cfg.nc.theta = value,
            ScanAxis::V0 => cfg.potential.v0 = value,
            ScanAxis::Alpha => cfg.potential.alpha = value,
            ScanAxis::Q => cfg.field.q = value,
            ScanAxis::RC => cfg.potential.r_c = value,
        }
    }
}

pub fn parse_axis(name: &str) -> Result<ScanAxis, CliError> {
    match name {
        "theta" => Ok(ScanAxis::Theta),
        "V0" => Ok(ScanAxis::V0),
        "alpha" => Ok(ScanAxis::Alpha),
        "q" => Ok(ScanAxis::Q),
        "r_c" => Ok(ScanAxis::RC),
        other => Err(CliError::Config(format!("unknown scan axis '{other}' (theta, V0, alpha, q, r_c)"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub axis: ScanAxis,
    pub values: Vec<f64>,
}

impl ScanSpec {
    /// `lo:hi` with `steps` equispaced values (both ends included when steps ≥ 2).
    pub fn from_range(axis: ScanAxis, range: &str, steps: usize) -> Result<Self, CliError> {
        let (lo, hi) = range
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("range '{range}' is not lo:hi")))?;
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| CliError::Config(format!("range bound '{s}' is not a number")))
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if steps == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CliError::Config(format!("empty scan range {lo}:{hi} with {steps} steps")));
        }
        let values = if steps == 1 {
            vec![lo]
        } else {
            (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
        };
        Ok(ScanSpec { axis, values })
    }

    pub fn from_values(axis: ScanAxis, list: &str) -> Result<Self, CliError> {
        let values = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("scan value '{s}' is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("empty scan value list".into()));
        }
        Ok(ScanSpec { axis, values })
    }
}

struct Point {
    value: f64,
    n: u32,
    l: u32,
    m_l: i32,
    de_theta: Option<f64>,
}

fn rows_for(
    cfg: &RunConfig,
    axis: ScanAxis,
    value: f64,
    resolved: &[Resolved],
    units: &[Result<UnitIntegrals, ncdirac_core::Error>],
    points: &mut Vec<Point>,
    failures: &mut Vec<String>,
) -> Result<Vec<Vec<String>>, CliError> {
    let field = cfg.field_params()?;
    let mut rows = Vec::new();
    for s in &cfg.states {
        let idx = resolved.iter().position(|r| r.n == s.n && r.l == s.l).expect("resolved");
        let r = &resolved[idx];
        let mut row = vec![axis.name().to_string(), num(value), s.n.to_string(), s.l.to_string(), s.m_l.to_string()];
        let (bs, u) = match (&r.bound, &units[idx]) {
            (Ok(bs), Ok(u)) => (bs, u),
            (Err(e), _) | (_, Err(e)) => {
                if is_hard_failure(e) {
                    failures.push(format!("{}={value} n={} l={}: {e}", axis.name(), s.n, s.l));
                }
                row.push(error_status(e));
                row.resize(SCAN_HEADER.len(), String::new());
                rows.push(row);
                continue;
            }
        };
        let nc = NcParams::new(cfg.nc.theta, s.m_l).map_err(CliError::invalid)?;
        let shifts = u.shifts(&nc, &field);
        let de_theta = to_energy_shift(shifts.theta_part(), bs.energy).ok();
        let de_total = to_energy_shift(shifts.total(), bs.energy).ok();
        points.push(Point { value, n: s.n, l: s.l, m_l: s.m_l, de_theta });
        row.extend([
            "ok".into(),
            num(bs.energy),
            r.source.map(|x| x.name().to_string()).unwrap_or_default(),
            opt(de_theta),
            opt(de_total),
            num(shifts.total()),
        ]);
        rows.push(row);
    }
    Ok(rows)
}

/// ΔE_θ must be exactly proportional to θ along a θ sweep.
fn theta_linearity(points: &[Point]) -> Vec<String> {
    let mut problems = Vec::new();
    let mut keys: Vec<(u32, u32, i32)> = points.iter().map(|p| (p.n, p.l, p.m_l)).collect();
    keys.dedup();
    for key in keys {
        let series: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| (p.n, p.l, p.m_l) == key)
            .filter_map(|p| p.de_theta.map(|d| (p.value, d)))
            .collect();
        let sxx: f64 = series.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = series.iter().map(|(x, y)| x * y).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let scale = series.iter().map(|(_, y)| y.abs()).fold(0.0, f64::max);
        let worst = series.iter().map(|(x, y)| (y - slope * x).abs()).fold(0.0, f64::max);
        if worst > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            problems.push(format!(
                "n={} l={} m_l={}: dE_theta not proportional to theta (residual {worst:e})",
                key.0, key.1, key.2
            ));
        }
    }
    problems
}

/// E and ΔE along one parameter axis, one row per (value, configured state).
pub fn cmd_scan(ctx: &RunContext, spec: &ScanSpec) -> Result<(), CliError> {
    if spec.values.is_empty() {
        return Err(CliError::Config("empty scan".into()));
    }
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    let mut cached: Option<(Vec<Resolved>, Vec<Result<UnitIntegrals, ncdirac_core::Error>>)> = None;
    for &value in &spec.values {
        let mut cfg = ctx.cfg.clone();
        spec.axis.apply(&mut cfg, value);
        cfg.check()?;
        let p = cfg.potential_params()?;
        if cached.is_none() || !spec.axis.perturbation_only() {
            let resolved = resolve_all(&cfg, &p)?;
            let units = resolved
                .iter()
                .map(|r| r.bound.clone().and_then(|bs| unit_integrals(&bs, &p)))
                .collect();
            cached = Some((resolved, units));
        }
        let (resolved, units) = cached.as_ref().expect("cached");
        rows.extend(rows_for(&cfg, spec.axis, value, resolved, units, &mut points, &mut failures)?);
    }
    let cfg = &ctx.cfg;
    write_csv(&ctx.path(&cfg.output.scan), &SCAN_HEADER, &rows)?;
    let mut sidecar = Sidecar::new(&format!("scan {}", spec.axis.name()), cfg, ctx.seedless, ctx.seed);
    let linearity = if spec.axis == ScanAxis::Theta { theta_linearity(&points) } else { Vec::new() };
    sidecar.notes = failures.iter().chain(&linearity).cloned().collect();
    if spec.axis == ScanAxis::Theta && linearity.is_empty() {
        sidecar.notes.push("dE_theta is proportional to theta for every state".into());
    }
    ctx.write_sidecar(sidecar, &[&cfg.output.scan])?;
    if !failures.is_empty() {
        return Err(CliError::Solver(failures.join("; ")));
    }
    if !linearity.is_empty() {
        return Err(CliError::Validation(linearity.join("; ")));
    }
    Ok(())
}
