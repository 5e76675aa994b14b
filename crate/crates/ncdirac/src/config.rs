//! Run configuration: a sectioned TOML file, parsed strictly.

use std::path::Path;

use ncdirac_core::oracle::{Centrifugal, OracleModel, OracleSettings, RadialGrid, SelfConsistency};
use ncdirac_core::potential::{FieldParams, NcParams, PekerisVariant, PotentialParams};
use ncdirac_core::radial::QuantumState;
use ncdirac_core::spectrum::{QuantizationCondition, SolverOptions, WavefunctionForm};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// The configuration compiled into the binary, used when `--config` is absent.
pub const CANONICAL: &str = include_str!("../configs/canonical.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialSection,
    #[serde(default)]
    pub nc: NcSection,
    #[serde(default)]
    pub field: FieldSection,
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    #[serde(rename = "V0")]
    pub v0: f64,
    pub a: f64,
    pub b: f64,
    pub g: f64,
    pub alpha: f64,
    pub r_c: f64,
    #[serde(rename = "M")]
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NcSection {
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub e: f64,
    pub k: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub n: u32,
    pub l: u32,
    #[serde(default)]
    pub m_l: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionName {
    PaperPrinted,
    #[default]
    ParametricNu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default)]
    pub condition: ConditionName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[f64; 2]>,
    #[serde(default = "default_panels")]
    pub scan_panels: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Build wavefunctions at the oracle energy when the condition has no root.
    #[serde(default = "yes")]
    pub fallback_to_oracle: bool,
    #[serde(default)]
    pub wavefunction_form: ConditionName,
}

fn default_panels() -> usize {
    2000
}

fn default_tolerance() -> f64 {
    1e-12
}

fn yes() -> bool {
    true
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            condition: ConditionName::default(),
            bracket: None,
            scan_panels: default_panels(),
            tolerance: default_tolerance(),
            fallback_to_oracle: true,
            wavefunction_form: ConditionName::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentrifugalName {
    #[default]
    Exact,
    Pekeris,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PekerisName {
    #[default]
    AsPrinted,
    Conventional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    #[default]
    Hylleraas,
    SSpaceImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default = "default_extent")]
    pub r_max_alpha: f64,
    #[serde(default)]
    pub centrifugal: CentrifugalName,
    #[serde(default)]
    pub pekeris_variant: PekerisName,
    #[serde(default)]
    pub model: ModelName,
    /// Report the Richardson-extrapolated energy from three nested grids.
    #[serde(default = "yes")]
    pub richardson: bool,
}

fn default_points() -> usize {
    RadialGrid::DEFAULT_POINTS
}

fn default_extent() -> f64 {
    RadialGrid::DEFAULT_EXTENT
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            n_points: default_points(),
            r_max_alpha: default_extent(),
            centrifugal: CentrifugalName::default(),
            pekeris_variant: PekerisName::default(),
            model: ModelName::default(),
            richardson: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "names::spectrum")]
    pub spectrum: String,
    #[serde(default = "names::corrections")]
    pub corrections: String,
    #[serde(default = "names::split")]
    pub split: String,
    #[serde(default = "names::scan")]
    pub scan: String,
    #[serde(default = "names::validation")]
    pub validation: String,
    #[serde(default = "names::discrepancy")]
    pub discrepancy: String,
    #[serde(default = "names::sidecar")]
    pub sidecar: String,
}

mod names {
    pub fn spectrum() -> String {
        "spectrum.csv".into()
    }
    pub fn corrections() -> String {
        "corrections.csv".into()
    }
    pub fn split() -> String {
        "split.csv".into()
    }
    pub fn scan() -> String {
        "scan.csv".into()
    }
    pub fn validation() -> String {
        "validation.json".into()
    }
    pub fn discrepancy() -> String {
        "discrepancy.json".into()
    }
    pub fn sidecar() -> String {
        "run.json".into()
    }
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            spectrum: names::spectrum(),
            corrections: names::corrections(),
            split: names::split(),
            scan: names::scan(),
            validation: names::validation(),
            discrepancy: names::discrepancy(),
            sidecar: names::sidecar(),
        }
    }
}

impl ConditionName {
    pub fn condition(self) -> QuantizationCondition {
        match self {
            ConditionName::PaperPrinted => QuantizationCondition::PaperPrinted,
            ConditionName::ParametricNu => QuantizationCondition::ParametricNu,
        }
    }

    pub fn form(self) -> WavefunctionForm {
        match self {
            ConditionName::PaperPrinted => WavefunctionForm::PaperPrinted,
            ConditionName::ParametricNu => WavefunctionForm::ParametricNu,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Self::from_toml(CANONICAL),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                Self::from_toml(&text)
            }
        }
    }

    /// Effective configuration with every default filled in; parses back to `self`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Type invariants that serde cannot express.
    pub fn check(&self) -> Result<(), CliError> {
        self.potential_params()?;
        NcParams::new(self.nc.theta, 0).map_err(CliError::invalid)?;
        self.field_params()?;
        if self.states.is_empty() {
            return Err(CliError::Config("at least one [[states]] entry is required".into()));
        }
        for s in &self.states {
            QuantumState::aligned(s.n, s.l, s.m_l).map_err(CliError::invalid)?;
        }
        if let Some([lo, hi]) = self.solver.bracket {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(CliError::Config("solver.bracket must be [lo, hi] with lo <= hi".into()));
            }
        }
        if self.solver.scan_panels == 0 {
            return Err(CliError::Config("solver.scan_panels must be positive".into()));
        }
        if !(self.solver.tolerance > 0.0) {
            return Err(CliError::Config("solver.tolerance must be positive".into()));
        }
        if self.oracle.n_points < 3 {
            return Err(CliError::Config("oracle.n_points must be at least 3".into()));
        }
        if !(self.oracle.r_max_alpha > 0.0) {
            return Err(CliError::Config("oracle.r_max_alpha must be positive".into()));
        }
        Ok(())
    }

    pub fn potential_params(&self) -> Result<PotentialParams, CliError> {
        let p = &self.potential;
        PotentialParams::new(p.v0, p.a, p.b, p.g, p.alpha, p.r_c, p.mass).map_err(CliError::invalid)
    }

    pub fn field_params(&self) -> Result<FieldParams, CliError> {
        FieldParams::new(self.field.e, self.field.k, self.field.q).map_err(CliError::invalid)
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            condition: self.solver.condition.condition(),
            bracket: self.solver.bracket.map(|[lo, hi]| (lo, hi)),
            panels: self.solver.scan_panels,
            tolerance: self.solver.tolerance,
        }
    }

    pub fn oracle_settings(&self) -> OracleSettings {
        let variant = match self.oracle.pekeris_variant {
            PekerisName::AsPrinted => PekerisVariant::AsPrinted,
            PekerisName::Conventional => PekerisVariant::Conventional,
        };
        OracleSettings {
            centrifugal: match self.oracle.centrifugal {
                CentrifugalName::Exact => Centrifugal::Exact,
                CentrifugalName::Pekeris => Centrifugal::Pekeris(variant),
            },
            model: match self.oracle.model {
                ModelName::Hylleraas => OracleModel::Hylleraas,
                ModelName::SSpaceImage => OracleModel::SSpaceImage,
            },
            method: SelfConsistency::default(),
        }
    }

    pub fn radial_grid(&self, p: &PotentialParams) -> Result<RadialGrid, CliError> {
        RadialGrid::for_params(p, self.oracle.n_points, self.oracle.r_max_alpha).map_err(CliError::invalid)
    }
}
