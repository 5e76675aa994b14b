//! Per-state resolution shared by the commands: condition roots, oracle energy, and
//! the normalized state the corrections are computed in.

use ncdirac_core::oracle::{richardson_energy, self_consistent_energy, RichardsonEnergy};
use ncdirac_core::potential::PotentialParams;
use ncdirac_core::spectrum::{
    build_wavefunction, find_roots, BoundState, EnergyOrigin, EnergyRoot, QuantizationCondition, SolverOptions,
};
use ncdirac_core::Error;

use crate::config::RunConfig;
use crate::error::CliError;

pub type Outcome<T> = Result<T, Error>;

/// Short status for CSV cells: `ok`, or the error tag (with the term for poles).
pub fn status<T>(o: &Outcome<T>) -> String {
    match o {
        Ok(_) => "ok".into(),
        Err(e) => error_status(e),
    }
}

pub fn error_status(e: &Error) -> String {
    match e {
        Error::Pole { context, .. } if !context.is_empty() => format!("PoleError:{context}"),
        other => other.tag().into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEnergy {
    pub energy: f64,
    pub node_count: usize,
    pub richardson: Option<RichardsonEnergy>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySource {
    PaperPrinted,
    ParametricNu,
    Oracle,
}

impl EnergySource {
    pub fn name(self) -> &'static str {
        match self {
            EnergySource::PaperPrinted => "paper_printed",
            EnergySource::ParametricNu => "parametric_nu",
            EnergySource::Oracle => "oracle",
        }
    }
}

/// Everything known about one (n, l).
#[derive(Debug, Clone)]
pub struct Resolved {
    pub n: u32,
    pub l: u32,
    pub paper: Outcome<Vec<EnergyRoot>>,
    pub nu: Outcome<Vec<EnergyRoot>>,
    pub oracle: Outcome<OracleEnergy>,
    pub source: Option<EnergySource>,
    pub bound: Outcome<BoundState>,
}

impl Resolved {
    pub fn roots(&self, condition: QuantizationCondition) -> &Outcome<Vec<EnergyRoot>> {
        match condition {
            QuantizationCondition::PaperPrinted => &self.paper,
            QuantizationCondition::ParametricNu => &self.nu,
        }
    }

    /// The root closest to the oracle energy (the only root, if there is one).
    pub fn selected_root(&self, condition: QuantizationCondition) -> Outcome<EnergyRoot> {
        let roots = self.roots(condition).clone()?;
        if roots.len() == 1 {
            return Ok(roots[0]);
        }
        match &self.oracle {
            Ok(o) => Ok(*roots
                .iter()
                .min_by(|a, b| (a.energy - o.energy).abs().total_cmp(&(b.energy - o.energy).abs()))
                .expect("non-empty")),
            Err(_) => Err(Error::MultipleRoots(roots.iter().map(|r| r.energy).collect())),
        }
    }

    pub fn energy(&self) -> Option<f64> {
        self.bound.as_ref().ok().map(|b| b.energy)
    }
}

pub fn oracle_energy(cfg: &RunConfig, p: &PotentialParams, n: u32, l: u32) -> Result<Outcome<OracleEnergy>, CliError> {
    let grid = cfg.radial_grid(p)?;
    let settings = cfg.oracle_settings();
    let base = match self_consistent_energy(n, l, p, &grid, &settings) {
        Ok(r) => r,
        Err(e) => return Ok(Err(e)),
    };
    if !cfg.oracle.richardson {
        return Ok(Ok(OracleEnergy { energy: base.energy, node_count: base.node_count, richardson: None }));
    }
    Ok(richardson_energy(n, l, p, &grid, &settings).map(|r| OracleEnergy {
        energy: r.extrapolated,
        node_count: base.node_count,
        richardson: Some(r),
    }))
}

pub fn resolve(cfg: &RunConfig, p: &PotentialParams, n: u32, l: u32) -> Result<Resolved, CliError> {
    let opts = cfg.solver_options();
    let paper = find_roots(n, l, p, &SolverOptions { condition: QuantizationCondition::PaperPrinted, ..opts });
    let nu = find_roots(n, l, p, &SolverOptions { condition: QuantizationCondition::ParametricNu, ..opts });
    let oracle = oracle_energy(cfg, p, n, l)?;
    let mut res = Resolved { n, l, paper, nu, oracle, source: None, bound: Err(Error::NoBoundState(String::new())) };

    let condition = opts.condition;
    let form = cfg.solver.wavefunction_form.form();
    let root = res.selected_root(condition);
    let (energy, source, origin) = match (&root, &res.oracle) {
        (Ok(r), _) => {
            let src = match condition {
                QuantizationCondition::PaperPrinted => EnergySource::PaperPrinted,
                QuantizationCondition::ParametricNu => EnergySource::ParametricNu,
            };
            (r.energy, src, EnergyOrigin::Condition(condition))
        }
        (Err(_), Ok(o)) if cfg.solver.fallback_to_oracle => (o.energy, EnergySource::Oracle, EnergyOrigin::Oracle),
        (Err(e), _) => {
            res.bound = Err(e.clone());
            return Ok(res);
        }
    };
    res.source = Some(source);
    res.bound = build_wavefunction(energy, n, l, p, form, origin);
    Ok(res)
}

/// Resolves every distinct (n, l) of the config, in config order.
pub fn resolve_all(cfg: &RunConfig, p: &PotentialParams) -> Result<Vec<Resolved>, CliError> {
    let mut seen: Vec<(u32, u32)> = Vec::new();
    let mut out = Vec::new();
    for s in &cfg.states {
        if seen.contains(&(s.n, s.l)) {
            continue;
        }
        seen.push((s.n, s.l));
        out.push(resolve(cfg, p, s.n, s.l)?);
    }
    Ok(out)
}

/// Failures that are not physics outcomes (no root, no bound state) but numerical
/// breakdowns; these turn a run into exit code 3.
pub fn is_hard_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::ConvergenceFailure { .. } | Error::QuadratureFailure { .. } | Error::Overflow(_) | Error::GridTooCoarse { .. }
    )
}
