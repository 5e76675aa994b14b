//! First-order energy shifts from the Bopp-shift terms and the weak electric field.
//!
//! The radial equation has spectral parameter ε = E² − M², so a perturbing operator
//! ΔU shifts ε by ⟨ΔU⟩ and E by ⟨ΔU⟩/(2E). Both are reported.
//!
//! ⟨ΔU⟩ is assembled from four state-dependent integrals, each of which multiplies
//! one scalar coupling:
//!
//! | piece          | operator                        | coupling    |
//! |----------------|---------------------------------|-------------|
//! | centrifugal-θ  | l(l+1) [P(r)]²                   | θ m_l       |
//! | potential-θ    | 2(E+M) · (−1/2r) dV/dr           | θ m_l       |
//! | Coulomb        | 2(E+M) · (−1/r)                  | e k q       |
//! | Coulomb-θ      | 2(E+M) · (−1/2r³)                | e k q θ m_l |
//!
//! P is the Pekeris-type stand-in for 1/r², so [P]² stands in for 1/r⁴. Splitting
//! this way makes the shifts exactly linear in each coupling.

use alloc::vec::Vec;

use crate::oracle::{quad_integrate_with, QuadTolerance};
use crate::potential::{
    dv_dr, pekeris_inv_r2, v_efield, v_efield_nc, v_nc_term, FieldParams, NcParams, PotentialParams,
};
use crate::radial::QuantumState;
use crate::spectrum::BoundState;
use crate::specfun::{gamma, hyp3f2_unit_terminating, real};
use crate::{ComplexScalar, Error, Result};

/// Upper end of the r-quadrature, in units of α beyond r_c.
pub const QUAD_EXTENT: f64 = 60.0;

/// ΔU_θ(r) = l(l+1) θ m_l [P(r)]² + 2(E+M) v_nc(r).
pub fn perturbing_operator_theta(r: f64, bs: &BoundState, p: &PotentialParams, nc: &NcParams) -> Result<f64> {
    let l = bs.state.l;
    let ll = (l * (l + 1)) as f64;
    let pk = pekeris_inv_r2(r, p);
    Ok(ll * nc.theta_dot_l() * pk * pk + 2.0 * (bs.energy + p.mass) * v_nc_term(r, p, nc)?)
}

/// ΔU_E(r) = 2(E+M) [V_E(r) + V_E^θ(r)].
pub fn perturbing_operator_efield(
    r: f64,
    bs: &BoundState,
    p: &PotentialParams,
    nc: &NcParams,
    f: &FieldParams,
) -> Result<f64> {
    Ok(2.0 * (bs.energy + p.mass) * (v_efield(r, f)? + v_efield_nc(r, f, nc)?))
}

/// ⟨·⟩ of the four unit operators in one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitIntegrals {
    pub centrifugal_theta: f64,
    pub potential_theta: f64,
    pub coulomb: f64,
    pub coulomb_theta: f64,
}

fn expectation<F: Fn(f64) -> f64>(bs: &BoundState, p: &PotentialParams, op: F) -> Result<f64> {
    let tol = QuadTolerance { abs: 1e-12, rel: 1e-10, max_panels: 4000 };
    let hi = p.r_c + QUAD_EXTENT * p.alpha;
    quad_integrate_with(|r| bs.density(r, p).unwrap_or(f64::NAN) * op(r), p.r_c, hi, tol)
}

pub fn unit_integrals(bs: &BoundState, p: &PotentialParams) -> Result<UnitIntegrals> {
    let l = bs.state.l;
    let ll = (l * (l + 1)) as f64;
    let coupling = 2.0 * (bs.energy + p.mass);
    let centrifugal_theta = if ll == 0.0 {
        0.0
    } else {
        expectation(bs, p, |r| {
            let pk = pekeris_inv_r2(r, p);
            ll * pk * pk
        })?
    };
    Ok(UnitIntegrals {
        centrifugal_theta,
        potential_theta: expectation(bs, p, |r| coupling * (-dv_dr(r, p) / (2.0 * r)))?,
        coulomb: expectation(bs, p, |r| -coupling / r)?,
        coulomb_theta: expectation(bs, p, |r| -coupling / (2.0 * r * r * r))?,
    })
}

/// Per-piece shifts of ε = E² − M².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TermBreakdown {
    pub centrifugal_theta: f64,
    pub potential_theta: f64,
    pub coulomb: f64,
    pub coulomb_theta: f64,
}

impl TermBreakdown {
    pub fn theta_part(&self) -> f64 {
        self.centrifugal_theta + self.potential_theta
    }

    pub fn field_part(&self) -> f64 {
        self.coulomb + self.coulomb_theta
    }

    pub fn total(&self) -> f64 {
        self.theta_part() + self.field_part()
    }
}

impl UnitIntegrals {
    pub fn shifts(&self, nc: &NcParams, f: &FieldParams) -> TermBreakdown {
        let tl = nc.theta_dot_l();
        let ekq = f.strength();
        TermBreakdown {
            centrifugal_theta: tl * self.centrifugal_theta,
            potential_theta: tl * self.potential_theta,
            coulomb: ekq * self.coulomb,
            coulomb_theta: ekq * tl * self.coulomb_theta,
        }
    }
}

/// Δε → ΔE = Δε/(2E).
pub fn to_energy_shift(d_eps: f64, energy: f64) -> Result<f64> {
    if energy == 0.0 {
        return Err(Error::Domain("dE = d_eps/(2E) is undefined at E = 0"));
    }
    Ok(d_eps / (2.0 * energy))
}

/// ΔE from the θ pieces, by quadrature.
pub fn delta_e_theta_quad(bs: &BoundState, p: &PotentialParams, nc: &NcParams) -> Result<f64> {
    nc.check_against(bs.state.l)?;
    let units = unit_integrals(bs, p)?;
    to_energy_shift(units.shifts(nc, &FieldParams::zero()).total(), bs.energy)
}

/// ΔE from the θ and field pieces, by quadrature.
pub fn delta_e_efield_quad(bs: &BoundState, p: &PotentialParams, nc: &NcParams, f: &FieldParams) -> Result<f64> {
    nc.check_against(bs.state.l)?;
    let units = unit_integrals(bs, p)?;
    to_energy_shift(units.shifts(nc, f).total(), bs.energy)
}

/// One term of a printed closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedTerm {
    pub index: usize,
    /// `None` when the term's l(l+1) prefactor removes it.
    pub value: Result<Option<ComplexScalar>>,
}

fn term_context(index: usize) -> &'static str {
    match index {
        1 => "term 1",
        2 => "term 2",
        3 => "term 3",
        _ => "term 4",
    }
}

fn gamma_ratio(num1: ComplexScalar, num2: ComplexScalar, den: ComplexScalar, index: usize) -> Result<ComplexScalar> {
    let ctx = term_context(index);
    let tag = |e: Error| match e {
        Error::Pole { at, .. } => Error::Pole { at, context: ctx },
        other => other,
    };
    let g1 = gamma(num1).map_err(tag)?;
    let g2 = gamma(num2).map_err(tag)?;
    let g3 = gamma(den).map_err(tag)?;
    Ok(g1 * g2 / g3)
}

/// Inputs shared by the printed terms.
struct ClosedParts {
    n: usize,
    sl: ComplexScalar,
    xi: ComplexScalar,
    b2: ComplexScalar,
    c: ComplexScalar,
    np2: f64,
    e_plus_m: f64,
}

impl ClosedParts {
    fn new(bs: &BoundState, p: &PotentialParams) -> Self {
        let sl = real(bs.sqrt_lambda);
        let xi = bs.scoef.xi;
        let n = bs.state.n as usize;
        ClosedParts {
            n,
            sl,
            xi,
            b2: sl * 2.0 + xi * 2.0 + (n as f64 + 1.0),
            c: sl * 2.0 + 1.0,
            np2: bs.n_prime * bs.n_prime,
            e_plus_m: bs.energy + p.mass,
        }
    }

    /// Γ(2√Λ + s₁)Γ(2Ξ + s₂)/Γ(2√Λ + 2Ξ + s₁ + s₂) · ₃F₂(−n, b₂, 2Ξ + s₂; c, 2Ξ + 2√Λ + s₁ + s₂; 1).
    fn factor(&self, s1: f64, s2: f64, index: usize) -> Result<ComplexScalar> {
        let two_sl = self.sl * 2.0;
        let two_xi = self.xi * 2.0;
        let g = gamma_ratio(two_sl + s1, two_xi + s2, two_sl + two_xi + (s1 + s2), index)?;
        let f = hyp3f2_unit_terminating(self.n, self.b2, two_xi + s2, self.c, two_xi + two_sl + (s1 + s2))?;
        Ok(g * f)
    }
}

const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);

fn closed_terms(bs: &BoundState, p: &PotentialParams, nc: &NcParams, f: Option<&FieldParams>) -> Vec<ClosedTerm> {
    let parts = ClosedParts::new(bs, p);
    let a = p.alpha;
    let l = bs.state.l;
    let ll = (l * (l + 1)) as f64;
    let tl = nc.theta_dot_l();
    let mut terms = Vec::new();
    let t1 = if ll == 0.0 {
        Ok(None)
    } else {
        parts.factor(0.0, -2.0, 1).map(|v| Some(v * (-16.0 * parts.np2 * libm::pow(a, 7.0) * ll * tl)))
    };
    terms.push(ClosedTerm { index: 1, value: t1 });
    let pre2 = -I * (2.0 * parts.np2 * a * a * a * parts.e_plus_m * p.v0 * (p.g - p.a) * tl / p.b);
    terms.push(ClosedTerm { index: 2, value: parts.factor(-0.5, -1.0, 2).map(|v| Some(v * pre2)) });
    if let Some(f) = f {
        let ekq = f.strength();
        let pre3 = I * (4.0 * ekq * libm::pow(a, 4.0) * parts.e_plus_m * parts.np2);
        terms.push(ClosedTerm { index: 3, value: parts.factor(-1.5, 1.0, 3).map(|v| Some(v * pre3)) });
        let pre4 = -I * (8.0 * libm::pow(a, 6.0) * ekq * tl * parts.e_plus_m * parts.np2);
        terms.push(ClosedTerm { index: 4, value: parts.factor(-0.5, -1.0, 4).map(|v| Some(v * pre4)) });
    }
    terms
}

fn sum_terms(terms: &[ClosedTerm]) -> Result<ComplexScalar> {
    let mut total = real(0.0);
    for t in terms {
        if let Some(v) = t.value.clone()? {
            total += v;
        }
    }
    Ok(total)
}

/// The two-term θ correction as printed, with N′ and the printed Ξ.
pub fn delta_e_theta_closed_terms(bs: &BoundState, p: &PotentialParams, nc: &NcParams) -> Vec<ClosedTerm> {
    closed_terms(bs, p, nc, None)
}

pub fn delta_e_theta_closed(bs: &BoundState, p: &PotentialParams, nc: &NcParams) -> Result<ComplexScalar> {
    sum_terms(&delta_e_theta_closed_terms(bs, p, nc))
}

/// The four-term θ + field correction as printed.
pub fn delta_e_efield_closed_terms(
    bs: &BoundState,
    p: &PotentialParams,
    nc: &NcParams,
    f: &FieldParams,
) -> Vec<ClosedTerm> {
    closed_terms(bs, p, nc, Some(f))
}

pub fn delta_e_efield_closed(bs: &BoundState, p: &PotentialParams, nc: &NcParams, f: &FieldParams) -> Result<ComplexScalar> {
    sum_terms(&delta_e_efield_closed_terms(bs, p, nc, f))
}

/// Quadrature and closed-form corrections for one state and one m_l.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionReport {
    pub state: QuantumState,
    pub energy: f64,
    pub theta: f64,
    pub field: FieldParams,
    /// Per-piece shifts of ε.
    pub terms: TermBreakdown,
    /// Δε of all pieces.
    pub d_eps_quad: f64,
    /// ΔE of the θ pieces.
    pub de_theta_quad: Result<f64>,
    /// ΔE of all pieces.
    pub de_quad: Result<f64>,
    pub closed_terms: Vec<ClosedTerm>,
    pub de_closed: Result<ComplexScalar>,
    /// |Re ΔE_closed − ΔE_quad|, when both exist.
    pub discrepancy: Option<f64>,
}

impl CorrectionReport {
    /// |ΔE|/|E|.
    pub fn relative_size(&self) -> Option<f64> {
        self.de_quad.as_ref().ok().map(|d| d.abs() / self.energy.abs())
    }
}

pub fn correction_report(bs: &BoundState, p: &PotentialParams, nc: &NcParams, f: &FieldParams) -> Result<CorrectionReport> {
    nc.check_against(bs.state.l)?;
    let units = unit_integrals(bs, p)?;
    Ok(report_from_units(bs, p, &units, nc, f))
}

fn report_from_units(
    bs: &BoundState,
    p: &PotentialParams,
    units: &UnitIntegrals,
    nc: &NcParams,
    f: &FieldParams,
) -> CorrectionReport {
    let terms = units.shifts(nc, f);
    let d_eps_quad = terms.total();
    let de_theta_quad = to_energy_shift(terms.theta_part(), bs.energy);
    let de_quad = to_energy_shift(d_eps_quad, bs.energy);
    let closed = delta_e_efield_closed_terms(bs, p, nc, f);
    let de_closed = sum_terms(&closed);
    let discrepancy = match (&de_closed, &de_quad) {
        (Ok(c), Ok(q)) => Some((c.re - q).abs()),
        _ => None,
    };
    CorrectionReport {
        state: QuantumState { m_l: nc.m_l, ..bs.state },
        energy: bs.energy,
        theta: nc.theta,
        field: *f,
        terms,
        d_eps_quad,
        de_theta_quad,
        de_quad,
        closed_terms: closed,
        de_closed,
        discrepancy,
    }
}

/// One level of the split multiplet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRow {
    pub m_l: i32,
    pub energy0: f64,
    pub delta_e: f64,
    pub energy: f64,
}

/// E⁰ + ΔE for m_l = −l … l.
pub fn split_spectrum(bs: &BoundState, p: &PotentialParams, theta: f64, f: &FieldParams) -> Result<Vec<SplitRow>> {
    let units = unit_integrals(bs, p)?;
    let l = bs.state.l as i32;
    (-l..=l)
        .map(|m_l| {
            let nc = NcParams::new(theta, m_l)?;
            let delta_e = to_energy_shift(units.shifts(&nc, f).total(), bs.energy)?;
            Ok(SplitRow { m_l, energy0: bs.energy, delta_e, energy: bs.energy + delta_e })
        })
        .collect()
}

/// Reports for every m_l = −l … l from one set of unit integrals.
pub fn correction_reports(bs: &BoundState, p: &PotentialParams, theta: f64, f: &FieldParams) -> Result<Vec<CorrectionReport>> {
    let units = unit_integrals(bs, p)?;
    let l = bs.state.l as i32;
    (-l..=l)
        .map(|m_l| Ok(report_from_units(bs, p, &units, &NcParams::new(theta, m_l)?, f)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_wavefunction, EnergyOrigin, WavefunctionForm};

    fn p0() -> PotentialParams {
        PotentialParams::new(1.0, -4.0, 1.0, 0.0, 1.0, 0.5, 1.0).unwrap()
    }

    fn state(n: u32, l: u32, e: f64) -> BoundState {
        build_wavefunction(e, n, l, &p0(), WavefunctionForm::ParametricNu, EnergyOrigin::Oracle).unwrap()
    }

    #[test]
    fn operators_vanish_and_flip() {
        let p = p0();
        let bs = state(0, 1, 0.447_606_63);
        let zero = NcParams::new(0.0, 1).unwrap();
        let plus = NcParams::new(1e-3, 1).unwrap();
        let minus = NcParams::new(1e-3, -1).unwrap();
        for r in [0.6, 1.0, 3.0] {
            assert_eq!(perturbing_operator_theta(r, &bs, &p, &zero).unwrap(), 0.0);
            let a = perturbing_operator_theta(r, &bs, &p, &plus).unwrap();
            let b = perturbing_operator_theta(r, &bs, &p, &minus).unwrap();
            assert_eq!(a, -b);
            let f = FieldParams::new(1.0, 1.0, 0.1).unwrap();
            let f2 = FieldParams::new(1.0, 1.0, 0.2).unwrap();
            let e1 = perturbing_operator_efield(r, &bs, &p, &plus, &f).unwrap();
            let e2 = perturbing_operator_efield(r, &bs, &p, &plus, &f2).unwrap();
            assert!((e2 - 2.0 * e1).abs() <= 1e-15 * e2.abs());
            assert_eq!(perturbing_operator_efield(r, &bs, &p, &plus, &FieldParams::zero()).unwrap(), 0.0);
        }
    }

    #[test]
    fn linearity_and_reduction() {
        let p = p0();
        let bs = state(0, 1, 0.447_606_63);
        let nc = NcParams::new(1e-3, 1).unwrap();
        let nc2 = NcParams::new(2e-3, 1).unwrap();
        let d1 = delta_e_theta_quad(&bs, &p, &nc).unwrap();
        let d2 = delta_e_theta_quad(&bs, &p, &nc2).unwrap();
        assert!((d2 - 2.0 * d1).abs() <= 1e-15 * d2.abs());
        assert_eq!(delta_e_theta_quad(&bs, &p, &NcParams::new(0.0, 1).unwrap()).unwrap(), 0.0);
        assert_eq!(delta_e_efield_quad(&bs, &p, &nc, &FieldParams::zero()).unwrap(), d1);
    }

    #[test]
    fn coulomb_shift_is_m_independent() {
        let p = p0();
        let bs = state(0, 1, 0.447_606_63);
        let f = FieldParams::new(1.0, 1.0, 0.1).unwrap();
        let rows = split_spectrum(&bs, &p, 0.0, &f).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.delta_e == rows[0].delta_e && r.delta_e != 0.0));
        let split = split_spectrum(&bs, &p, 1e-3, &FieldParams::zero()).unwrap();
        assert!((split[0].delta_e + split[2].delta_e).abs() <= 1e-18);
        assert_eq!(split[1].delta_e, 0.0);
    }

    #[test]
    fn closed_form_pole_for_s_states() {
        let p = p0();
        let bs = state(0, 0, 0.122_563_44);
        let nc = NcParams::new(1e-3, 0).unwrap();
        let terms = delta_e_theta_closed_terms(&bs, &p, &nc);
        assert_eq!(terms[0].value, Ok(None));
        assert!(matches!(terms[1].value, Err(Error::Pole { context: "term 2", .. })));
        assert!(delta_e_theta_closed(&bs, &p, &nc).is_err());
    }

    #[test]
    fn closed_form_reductions() {
        let p = p0();
        let bs = state(0, 1, 0.447_606_63);
        let zero = NcParams::new(0.0, 1).unwrap();
        assert_eq!(delta_e_theta_closed(&bs, &p, &zero).unwrap(), real(0.0));
        assert_eq!(delta_e_efield_closed(&bs, &p, &zero, &FieldParams::zero()).unwrap(), real(0.0));
        let nc = NcParams::new(1e-3, 1).unwrap();
        let theta_only = delta_e_theta_closed_terms(&bs, &p, &nc);
        let four = delta_e_efield_closed_terms(&bs, &p, &nc, &FieldParams::zero());
        assert_eq!(four[0], theta_only[0]);
        assert_eq!(four[1], theta_only[1]);
        assert_eq!(four[2].value, Ok(Some(real(0.0))));
        assert_eq!(four[3].value, Ok(Some(real(0.0))));
    }
}
