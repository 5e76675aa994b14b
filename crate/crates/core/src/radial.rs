//! Quantum numbers and the s-space form of the radial equation.
//!
//! After the substitution `s = exp(−(r − r_c)/α)` and the Pekeris-type replacement
//! of 1/r², the θ = 0 radial equation is written (as typeset)
//!
//! ```text
//! φ'' + φ'/s + { −α²[2V₀a(E+M) − b(E²−M²)] s²
//!                + 2α²[2α²b l(l+1) + V₀(g+a)(E+M) + b(M²−E²)] s
//!                + α²[2V₀g(E+M) − b(E²−M²)] } / (b s²(1−s)²) · φ = 0
//! ```
//!
//! This module freezes one reading of it: the braces are a single numerator over the
//! common denominator `s²(1−s)²`,
//!
//! ```text
//! φ'' + φ'/s + (−ξ₁ s² + ξ₂ s − ξ₃) / (s²(1−s)²) · φ = 0
//! ξ₁ = α²[2V₀a(E+M) − b(E²−M²)]/b
//! ξ₂ = 2α²[2α²b l(l+1) + V₀(g+a)(E+M) + b(M²−E²)]/b
//! ξ₃ = Λ = α²[2V₀g(E+M) − b(E²−M²)]/b
//! ```
//!
//! The constant term is taken as `−Λ`, i.e. with the opposite sign to the typeset
//! one. That is the sign the substitution actually produces, and the only one for
//! which the wavefunction's small-s behaviour `s^√Λ` is a solution.

use alloc::vec::Vec;

use crate::potential::PotentialParams;
use crate::specfun::real;
use crate::{ComplexScalar, Error, Result};

/// Radial index plus the spin–orbit labels of a Dirac state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumState {
    pub n: u32,
    pub kappa: i32,
    pub l: u32,
    /// Twice the total angular momentum j.
    pub j2: u32,
    pub m_l: i32,
}

impl QuantumState {
    pub fn from_kappa(n: u32, kappa: i32, m_l: i32) -> Result<Self> {
        let (l, j2) = kappa_to_lj(kappa)?;
        if m_l.unsigned_abs() > l {
            return Err(Error::InvalidParams("|m_l| exceeds l"));
        }
        Ok(QuantumState { n, kappa, l, j2, m_l })
    }

    /// The aligned-spin state j = l + ½ (κ = −(l+1)).
    pub fn aligned(n: u32, l: u32, m_l: i32) -> Result<Self> {
        Self::from_kappa(n, -(l as i32) - 1, m_l)
    }

    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }
}

/// κ > 0: j = κ − ½, l = j + ½. κ < 0: j = −κ − ½, l = j − ½. Returns (l, 2j).
pub fn kappa_to_lj(kappa: i32) -> Result<(u32, u32)> {
    if kappa == 0 {
        return Err(Error::Domain("kappa must be nonzero"));
    }
    let j2 = 2 * kappa.unsigned_abs() - 1;
    let l = if kappa > 0 { kappa as u32 } else { kappa.unsigned_abs() - 1 };
    Ok((l, j2))
}

/// Coefficients of the s-space equation at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SCoefficients {
    pub lambda: ComplexScalar,
    /// Ξ = √(−α⁴ l(l+1)) as typeset; imaginary for l ≥ 1.
    pub xi: ComplexScalar,
    /// ℵ, defined alongside Λ and Ξ but not used by any downstream formula.
    pub aleph: ComplexScalar,
    pub xi1: ComplexScalar,
    pub xi2: ComplexScalar,
    pub xi3: ComplexScalar,
    /// √(¼ + ξ₁ − ξ₂ + ξ₃) = √(¼ − 4α⁴ l(l+1)): the s → 1 exponent is ½ plus this.
    pub boundary_exponent: ComplexScalar,
}

impl SCoefficients {
    pub fn sqrt_lambda(&self) -> ComplexScalar {
        self.lambda.sqrt()
    }

    /// Q(s) = (−ξ₁s² + ξ₂s − ξ₃)/(s²(1−s)²), the coefficient of φ.
    pub fn potential_term(&self, s: f64) -> ComplexScalar {
        let one_minus = 1.0 - s;
        (-self.xi1 * s * s + self.xi2 * s - self.xi3) / (s * s * one_minus * one_minus)
    }
}

pub fn s_coefficients(energy: f64, p: &PotentialParams, l: u32) -> SCoefficients {
    let (v0, a, b, g, m) = (p.v0, p.a, p.b, p.g, p.mass);
    let a2 = p.alpha * p.alpha;
    let ll = (l * (l + 1)) as f64;
    let e_plus_m = energy + m;
    let e2_minus_m2 = energy * energy - m * m;

    let lambda = a2 * (2.0 * v0 * g * e_plus_m - b * e2_minus_m2) / b;
    let aleph = (-2.0 * a2 * v0 * e_plus_m * a + b * a2 * e2_minus_m2) / b;
    let xi1 = a2 * (2.0 * v0 * a * e_plus_m - b * e2_minus_m2) / b;
    let xi2 = 2.0 * a2 * (2.0 * a2 * b * ll + v0 * (g + a) * e_plus_m - b * e2_minus_m2) / b;
    let xi3 = lambda;

    SCoefficients {
        lambda: real(lambda),
        xi: real(-a2 * a2 * ll).sqrt(),
        aleph: real(aleph),
        xi1: real(xi1),
        xi2: real(xi2),
        xi3: real(xi3),
        boundary_exponent: real(0.25 - 4.0 * a2 * a2 * ll).sqrt(),
    }
}

/// dΛ/dE = α²(2V₀g − 2bE)/b.
pub fn lambda_derivative(energy: f64, p: &PotentialParams) -> f64 {
    p.alpha * p.alpha * (2.0 * p.v0 * p.g - 2.0 * p.b * energy) / p.b
}

/// Uniform grid strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl SGrid {
    pub const MIN_POINTS: usize = 200;

    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi < 1.0 && lo < hi) {
            return Err(Error::Domain("s-grid must lie strictly inside (0, 1)"));
        }
        if points < Self::MIN_POINTS {
            return Err(Error::GridTooCoarse { points, required: Self::MIN_POINTS });
        }
        Ok(SGrid { lo, hi, points })
    }

    /// 2000 points on [0.05, 0.95]. Closer to s = 0 the stencils cannot follow
    /// s^√Λ for non-integer √Λ, and the truncation error swamps the residual.
    pub fn standard() -> Self {
        SGrid { lo: 0.05, hi: 0.95, points: 2000 }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + self.step() * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.point(i)).collect()
    }
}

/// Fourth-order first and second derivatives of uniformly sampled data; one-sided
/// stencils on the two outermost points at each end.
pub(crate) fn derivatives(f: &[ComplexScalar], h: f64) -> (Vec<ComplexScalar>, Vec<ComplexScalar>) {
    let n = f.len();
    debug_assert!(n >= 6);
    let mut d1 = alloc::vec![real(0.0); n];
    let mut d2 = alloc::vec![real(0.0); n];
    let c1 = 1.0 / (12.0 * h);
    let c2 = 1.0 / (12.0 * h * h);
    for i in 2..n - 2 {
        d1[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * c1;
        d2[i] = (-f[i - 2] + f[i - 1] * 16.0 - f[i] * 30.0 + f[i + 1] * 16.0 - f[i + 2]) * c2;
    }
    let fwd1_0 = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let fwd1_1 = [-3.0, -10.0, 18.0, -6.0, 1.0];
    let fwd2_0 = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    let fwd2_1 = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    let dot = |w: &[f64], at: &dyn Fn(usize) -> ComplexScalar| -> ComplexScalar {
        w.iter().enumerate().fold(real(0.0), |acc, (k, &c)| acc + at(k) * c)
    };
    d1[0] = dot(&fwd1_0, &|k| f[k]) * c1;
    d1[1] = dot(&fwd1_1, &|k| f[k]) * c1;
    d2[0] = dot(&fwd2_0, &|k| f[k]) * c2;
    d2[1] = dot(&fwd2_1, &|k| f[k]) * c2;
    // mirrored stencils: first derivative flips sign
    d1[n - 1] = -dot(&fwd1_0, &|k| f[n - 1 - k]) * c1;
    d1[n - 2] = -dot(&fwd1_1, &|k| f[n - 1 - k]) * c1;
    d2[n - 1] = dot(&fwd2_0, &|k| f[n - 1 - k]) * c2;
    d2[n - 2] = dot(&fwd2_1, &|k| f[n - 1 - k]) * c2;
    (d1, d2)
}

/// Scaled max-norm of `φ'' + φ'/s + Q(s) φ` on `grid`, with Q built from
/// [`s_coefficients`] at `energy`.
///
/// Point i is scaled by `max|φ| · (1 + 1/sᵢ + |Q(sᵢ)|)`, so the result is a relative
/// residual that stays meaningful where the coefficients blow up towards s = 0 and
/// s = 1. Returns 0 for φ ≡ 0.
pub fn s_equation_residual(
    phi: &[ComplexScalar],
    energy: f64,
    p: &PotentialParams,
    l: u32,
    grid: &SGrid,
) -> Result<f64> {
    if grid.points < SGrid::MIN_POINTS {
        return Err(Error::GridTooCoarse { points: grid.points, required: SGrid::MIN_POINTS });
    }
    if phi.len() != grid.points {
        return Err(Error::Domain("phi must be sampled on every grid point"));
    }
    let peak = phi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let coeffs = s_coefficients(energy, p, l);
    let (d1, d2) = derivatives(phi, grid.step());
    let mut worst: f64 = 0.0;
    for i in 0..grid.points {
        let s = grid.point(i);
        let q = coeffs.potential_term(s);
        let residual = d2[i] + d1[i] / s + q * phi[i];
        let scale = peak * (1.0 + 1.0 / s + q.norm());
        worst = worst.max(residual.norm() / scale);
    }
    Ok(worst)
}
