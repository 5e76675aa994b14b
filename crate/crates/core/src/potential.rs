//! The modified Hylleraas well and the pieces derived from it.
//!
//! With `u = exp(−(r − r_c)/α)` the well reads
//!
//! ```text
//! V(r) = (V₀/b) (g + a u) / (1 + u)
//! ```
//!
//! To first order in θ the Bopp shift `x̂ᵢ = xᵢ − ½ θᵢⱼ pⱼ` turns `V(r)` into
//! `V(r) − (θ·L / 2r) dV/dr`; with θ along the quantization axis `θ·L → θ m_l`.

use libm::{exp, log};

use crate::{Error, Result};

/// Hylleraas well plus the fermion mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub v0: f64,
    pub a: f64,
    pub b: f64,
    pub g: f64,
    pub alpha: f64,
    pub r_c: f64,
    pub mass: f64,
}

impl PotentialParams {
    pub fn new(v0: f64, a: f64, b: f64, g: f64, alpha: f64, r_c: f64, mass: f64) -> Result<Self> {
        let p = PotentialParams { v0, a, b, g, alpha, r_c, mass };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.v0, self.a, self.b, self.g, self.alpha, self.r_c, self.mass];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite potential parameter"));
        }
        if self.b == 0.0 {
            return Err(Error::InvalidParams("b must be nonzero"));
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidParams("alpha must be positive"));
        }
        if self.r_c < 0.0 {
            return Err(Error::InvalidParams("r_c must be nonnegative"));
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParams("M must be positive"));
        }
        Ok(())
    }

    /// `exp(−(r − r_c)/α)`.
    pub fn u(&self, r: f64) -> f64 {
        exp(-(r - self.r_c) / self.alpha)
    }

    /// V(∞) = V₀ g / b.
    pub fn asymptote(&self) -> f64 {
        self.v0 * self.g / self.b
    }
}

/// Noncommutativity strength and the magnetic quantum number θ·L is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcParams {
    pub theta: f64,
    pub m_l: i32,
}

impl NcParams {
    pub fn new(theta: f64, m_l: i32) -> Result<Self> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::InvalidParams("theta must be finite and nonnegative"));
        }
        Ok(NcParams { theta, m_l })
    }

    pub fn zero() -> Self {
        NcParams { theta: 0.0, m_l: 0 }
    }

    /// θ·L as the scalar θ m_l.
    pub fn theta_dot_l(&self) -> f64 {
        self.theta * self.m_l as f64
    }

    pub fn check_against(&self, l: u32) -> Result<()> {
        if self.m_l.unsigned_abs() > l {
            return Err(Error::InvalidParams("|m_l| exceeds l"));
        }
        Ok(())
    }
}

/// Weak radial field `E = k q / r²` acting on a particle of charge `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub e_charge: f64,
    pub k_const: f64,
    pub q_source: f64,
}

impl FieldParams {
    pub fn new(e_charge: f64, k_const: f64, q_source: f64) -> Result<Self> {
        if ![e_charge, k_const, q_source].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParams("non-finite field parameter"));
        }
        Ok(FieldParams { e_charge, k_const, q_source })
    }

    pub fn zero() -> Self {
        FieldParams { e_charge: 0.0, k_const: 0.0, q_source: 0.0 }
    }

    /// The coupling e·k·q.
    pub fn strength(&self) -> f64 {
        self.e_charge * self.k_const * self.q_source
    }
}

pub fn v_hylleraas(r: f64, p: &PotentialParams) -> f64 {
    let u = p.u(r);
    if u.is_infinite() {
        // r far below r_c: the ratio tends to a
        return p.v0 * p.a / p.b;
    }
    p.v0 / p.b * (p.g + p.a * u) / (1.0 + u)
}

/// dV/dr = V₀(g − a) u / (b α (1 + u)²).
pub fn dv_dr(r: f64, p: &PotentialParams) -> f64 {
    let u = p.u(r);
    let one_plus = 1.0 + u;
    p.v0 * (p.g - p.a) * u / (p.b * p.alpha * one_plus * one_plus)
}

/// First-order Bopp-shift term `−(θ m_l / 2r) dV/dr`.
pub fn v_nc_term(r: f64, p: &PotentialParams, nc: &NcParams) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain("v_nc_term needs r > 0"));
    }
    Ok(-(nc.theta_dot_l() / (2.0 * r)) * dv_dr(r, p))
}

/// Which exponential stand-in for 1/r² to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PekerisVariant {
    /// `4α² u/(1+u)²`, coefficient as printed in the source derivation. Note the
    /// coefficient carries length², not 1/length²; the two only agree when α = 1.
    #[default]
    AsPrinted,
    /// Greene–Aldrich form `w/(α²(1−w)²)` with `w = exp(−r/α)`, exact as r → 0.
    Conventional,
}

pub fn pekeris_inv_r2(r: f64, p: &PotentialParams) -> f64 {
    pekeris_inv_r2_variant(r, p, PekerisVariant::AsPrinted)
}

pub fn pekeris_inv_r2_variant(r: f64, p: &PotentialParams, variant: PekerisVariant) -> f64 {
    match variant {
        PekerisVariant::AsPrinted => {
            let u = p.u(r);
            if u.is_infinite() {
                return 0.0;
            }
            4.0 * p.alpha * p.alpha * u / ((1.0 + u) * (1.0 + u))
        }
        PekerisVariant::Conventional => {
            let w = exp(-r / p.alpha);
            let d = 1.0 - w;
            w / (p.alpha * p.alpha * d * d)
        }
    }
}

/// Coulomb piece of the weak-field potential, `−e k q / r`.
pub fn v_efield(r: f64, f: &FieldParams) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain("v_efield needs r > 0"));
    }
    Ok(-f.strength() / r)
}

/// Noncommutative piece of the weak-field potential, `−e k q θ m_l / (2 r³)`.
pub fn v_efield_nc(r: f64, f: &FieldParams, nc: &NcParams) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain("v_efield_nc needs r > 0"));
    }
    Ok(-f.strength() * nc.theta_dot_l() / (2.0 * r * r * r))
}

/// s = exp(−(r − r_c)/α); `[r_c, ∞)` maps onto `(0, 1]`.
pub fn to_s(r: f64, p: &PotentialParams) -> Result<f64> {
    if !(r >= p.r_c) {
        return Err(Error::Domain("to_s needs r >= r_c"));
    }
    Ok(p.u(r))
}

/// Inverse of [`to_s`]: r = r_c − α ln s. Note dr = −(α/s) ds.
pub fn to_r(s: f64, p: &PotentialParams) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain("to_r needs s in (0, 1]"));
    }
    Ok(p.r_c - p.alpha * log(s))
}

/// Largest deviation of a Pekeris form from 1/r² over `[lo, hi]`, sampled on `samples` points.
/// Returns `(max_abs_error, r_at_max)`.
pub fn pekeris_max_error(
    p: &PotentialParams,
    variant: PekerisVariant,
    lo: f64,
    hi: f64,
    samples: usize,
) -> (f64, f64) {
    let mut worst = (0.0, lo);
    let steps = samples.max(2) - 1;
    for i in 0..=steps {
        let r = lo + (hi - lo) * i as f64 / steps as f64;
        if r <= 0.0 {
            continue;
        }
        let err = (pekeris_inv_r2_variant(r, p, variant) - 1.0 / (r * r)).abs();
        if err > worst.0 {
            worst = (err, r);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p0() -> PotentialParams {
        PotentialParams::new(1.0, -4.0, 1.0, 0.0, 1.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PotentialParams::new(1.0, -4.0, 0.0, 0.0, 1.0, 0.5, 1.0).is_err());
        assert!(PotentialParams::new(1.0, -4.0, 1.0, 0.0, 0.0, 0.5, 1.0).is_err());
        assert!(PotentialParams::new(1.0, -4.0, 1.0, 0.0, 1.0, -0.1, 1.0).is_err());
        assert!(PotentialParams::new(1.0, -4.0, 1.0, 0.0, 1.0, 0.5, 0.0).is_err());
        assert!(NcParams::new(-1e-3, 0).is_err());
        assert!(NcParams::new(1e-3, 2).unwrap().check_against(1).is_err());
    }

    #[test]
    fn hylleraas_values() {
        let p = p0();
        assert_eq!(v_hylleraas(p.r_c, &p), -2.0);
        assert!(v_hylleraas(1e4, &p).abs() < 1e-300);
        let v = v_hylleraas(p.r_c + p.alpha, &p);
        assert!((v - -1.075_765_685_479_980_5).abs() < 1e-15);
    }

    #[test]
    fn derivative_values() {
        let p = p0();
        assert_eq!(dv_dr(p.r_c, &p), 1.0);
        let flat = PotentialParams { g: 2.0, a: 2.0, ..p };
        for r in [0.1, 0.5, 3.0, 20.0] {
            assert_eq!(dv_dr(r, &flat), 0.0);
        }
        let h = 1e-6 * p.alpha;
        let fd = (v_hylleraas(2.0 + h, &p) - v_hylleraas(2.0 - h, &p)) / (2.0 * h);
        assert!((dv_dr(2.0, &p) - fd).abs() / fd.abs() < 1e-6);
    }

    #[test]
    fn bopp_term_examples() {
        let p = p0();
        let zero_theta = NcParams::new(0.0, 1).unwrap();
        let zero_m = NcParams::new(1e-3, 0).unwrap();
        for r in [0.3, 1.0, 7.0] {
            assert_eq!(v_nc_term(r, &p, &zero_theta).unwrap(), 0.0);
            assert_eq!(v_nc_term(r, &p, &zero_m).unwrap(), 0.0);
        }
        let nc = NcParams::new(1e-3, 1).unwrap();
        let v = v_nc_term(1.0, &p, &nc).unwrap();
        let composed = -(1e-3 / 2.0) * dv_dr(1.0, &p);
        assert!((v - composed).abs() <= 1e-12 * composed.abs());
        assert!(v_nc_term(0.0, &p, &nc).is_err());
    }

    #[test]
    fn pekeris_values() {
        let p = p0();
        assert_eq!(pekeris_inv_r2(p.r_c, &p), 1.0);
        assert!(pekeris_inv_r2(1e3, &p) < 1e-300);
        assert!((pekeris_inv_r2(1.5, &p) - 0.786_447_732_965_927_4).abs() < 1e-15);
        // Greene–Aldrich is accurate for r ≪ α.
        let r = 1e-3;
        let ga = pekeris_inv_r2_variant(r, &p, PekerisVariant::Conventional);
        assert!((ga * r * r - 1.0).abs() < 1e-6);
    }

    #[test]
    fn field_terms() {
        let f0 = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let nc = NcParams::new(1e-3, 1).unwrap();
        assert_eq!(v_efield(2.0, &f0).unwrap(), 0.0);
        assert_eq!(v_efield_nc(2.0, &f0, &nc).unwrap(), 0.0);
        let f = FieldParams::new(1.0, 1.0, 0.1).unwrap();
        assert!((v_efield(2.0, &f).unwrap() - -0.05).abs() < 1e-17);
        assert!((v_efield_nc(2.0, &f, &nc).unwrap() - -6.25e-6).abs() < 1e-20);
        assert!(v_efield(0.0, &f).is_err());
    }

    #[test]
    fn s_transform_edges() {
        let p = p0();
        assert_eq!(to_s(p.r_c, &p).unwrap(), 1.0);
        assert!(to_s(p.r_c + 800.0 * p.alpha, &p).unwrap() < 1e-300);
        assert!(to_s(p.r_c - 0.1, &p).is_err());
        assert!(to_r(0.0, &p).is_err());
        assert!(to_r(1.5, &p).is_err());
        assert_eq!(to_r(1.0, &p).unwrap(), p.r_c);
    }

    proptest! {
        #[test]
        fn s_round_trip(x in 0.0f64..40.0) {
            let p = p0();
            let r = p.r_c + x * p.alpha;
            let back = to_r(to_s(r, &p).unwrap(), &p).unwrap();
            prop_assert!((back - r).abs() <= 1e-12 * r.max(1e-300) + 1e-15);
        }

        #[test]
        fn bopp_identity(r in 0.125f64..30.5, theta in 0.0f64..1e-2, m in -3i32..=3) {
            let p = p0();
            let nc = NcParams::new(theta, m).unwrap();
            let lhs = v_nc_term(r, &p, &nc).unwrap() + (theta * m as f64 / (2.0 * r)) * dv_dr(r, &p);
            prop_assert!(lhs.abs() <= 1e-16 * dv_dr(r, &p).abs().max(1e-300));
        }
    }
}
