//! The discrepancy report: places where the printed formulas and the independent
//! routes disagree, archived without pass/fail.

use ncdirac_core::potential::PotentialParams;
use ncdirac_core::spectrum::{default_bracket, residual_scan, sign_changes, QuantizationCondition};
use serde::Serialize;

use crate::pipeline::{status, Resolved};

pub const CONDITION_SCAN_POINTS: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct ConditionScan {
    pub n: u32,
    pub l: u32,
    pub condition: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub residual_min: f64,
    pub residual_max: f64,
    /// Largest |Im| of the residual over the scan.
    pub imag_abs_max: f64,
    /// Scan intervals [E_a, E_b] containing a sign change of the real part.
    pub sign_changes: Vec<[f64; 2]>,
}

pub fn condition_scan(
    p: &PotentialParams,
    n: u32,
    l: u32,
    condition: QuantizationCondition,
    points: usize,
) -> ConditionScan {
    let (lo, hi) = default_bracket(p);
    let scan = residual_scan(condition, n, l, p, lo, hi, points);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut imag: f64 = 0.0;
    for (_, f) in &scan {
        min = min.min(f.re);
        max = max.max(f.re);
        imag = imag.max(f.im.abs());
    }
    ConditionScan {
        n,
        l,
        condition: match condition {
            QuantizationCondition::PaperPrinted => "paper_printed",
            QuantizationCondition::ParametricNu => "parametric_nu",
        },
        lo,
        hi,
        points,
        residual_min: min,
        residual_max: max,
        imag_abs_max: imag,
        sign_changes: sign_changes(&scan).into_iter().map(|(a, b)| [a, b]).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NuOracleRow {
    pub n: u32,
    pub l: u32,
    pub nu_status: String,
    pub e_nu: Option<f64>,
    pub oracle_status: String,
    pub e_oracle: Option<f64>,
    pub abs_difference: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizationRow {
    pub n: u32,
    pub l: u32,
    pub energy: f64,
    /// N′ from the exact Beta sum.
    pub n_prime: f64,
    /// N′ from the single-₃F₂ reading of the squared integral.
    pub n_prime_paper_re: Option<f64>,
    pub n_prime_paper_im: Option<f64>,
    pub relative_difference: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub paper_condition_scans: Vec<ConditionScan>,
    pub nu_vs_oracle: Vec<NuOracleRow>,
    pub normalization_routes: Vec<NormalizationRow>,
}

impl DiscrepancyReport {
    pub fn build(p: &PotentialParams, resolved: &[Resolved]) -> Self {
        let mut scans = Vec::new();
        let mut nu_vs_oracle = Vec::new();
        let mut norms = Vec::new();
        for r in resolved {
            scans.push(condition_scan(p, r.n, r.l, QuantizationCondition::PaperPrinted, CONDITION_SCAN_POINTS));
            let nu = r.selected_root(QuantizationCondition::ParametricNu);
            let e_nu = nu.as_ref().ok().map(|x| x.energy);
            let e_oracle = r.oracle.as_ref().ok().map(|o| o.energy);
            nu_vs_oracle.push(NuOracleRow {
                n: r.n,
                l: r.l,
                nu_status: status(&nu),
                e_nu,
                oracle_status: status(&r.oracle),
                e_oracle,
                abs_difference: e_nu.zip(e_oracle).map(|(a, b)| (a - b).abs()),
            });
            if let Ok(bs) = &r.bound {
                let paper = bs.n_prime_paper_route;
                norms.push(NormalizationRow {
                    n: r.n,
                    l: r.l,
                    energy: bs.energy,
                    n_prime: bs.n_prime,
                    n_prime_paper_re: paper.map(|z| z.re + 0.0),
                    n_prime_paper_im: paper.map(|z| z.im + 0.0),
                    relative_difference: paper.map(|z| (z - bs.n_prime).norm() / bs.n_prime),
                });
            }
        }
        DiscrepancyReport { paper_condition_scans: scans, nu_vs_oracle, normalization_routes: norms }
    }
}
