//! θ = 0 bound states: quantization conditions, energy roots, normalized wavefunctions.

use alloc::vec::Vec;

use crate::oracle::{exact_poly_beta_integral, poly_abs_squared, poly_eval, quad_integrate_with, QuadTolerance};
use crate::potential::{to_s, PotentialParams};
use crate::radial::{s_coefficients, QuantumState, SCoefficients};
use crate::specfun::{gamma, hyp2f1_coefficients, hyp3f2_unit_terminating, beta, real};
use crate::{ComplexScalar, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantizationCondition {
    /// The relation as typeset, with the printed Ξ.
    PaperPrinted,
    /// Re-derived from ξ₁, ξ₂, ξ₃ with the parametric NU relation (α₁ = α₂ = α₃ = 1).
    #[default]
    ParametricNu,
}

/// `2n + ½ + (2n+1)Ξ + n(n−1) − 4α⁴l(l+1) + (2Ξ+2n+1)√Λ + 2α²V₀(E+M)(g−a)/b`,
/// in complex arithmetic.
pub fn quantization_residual_paper(energy: f64, n: u32, l: u32, p: &PotentialParams) -> ComplexScalar {
    let c = s_coefficients(energy, p, l);
    let nf = n as f64;
    let a2 = p.alpha * p.alpha;
    let ll = (l * (l + 1)) as f64;
    let xi = c.xi;
    real(2.0 * nf + 0.5 + nf * (nf - 1.0) - 4.0 * a2 * a2 * ll)
        + xi * (2.0 * nf + 1.0)
        + (xi * 2.0 + (2.0 * nf + 1.0)) * c.sqrt_lambda()
        + 2.0 * a2 * p.v0 * (energy + p.mass) * (p.g - p.a) / p.b
}

/// Parametric NU relation with α₁ = α₂ = α₃ = 1:
///
/// ```text
/// n + (2n+1)/2 + (2n+1)(√α₉ + √ξ₃) + n(n−1) − ξ₂ + 2ξ₃ + 2√ξ₃√α₉,   α₉ = ¼ + ξ₁ − ξ₂ + ξ₃
/// ```
pub fn quantization_residual_nu(energy: f64, n: u32, l: u32, p: &PotentialParams) -> ComplexScalar {
    let c = s_coefficients(energy, p, l);
    let nf = n as f64;
    let root9 = c.boundary_exponent;
    let root3 = c.xi3.sqrt();
    real(nf + (2.0 * nf + 1.0) / 2.0 + nf * (nf - 1.0)) + (root9 + root3) * (2.0 * nf + 1.0) - c.xi2
        + c.xi3 * 2.0
        + root3 * root9 * 2.0
}

pub fn quantization_residual(
    condition: QuantizationCondition,
    energy: f64,
    n: u32,
    l: u32,
    p: &PotentialParams,
) -> ComplexScalar {
    match condition {
        QuantizationCondition::PaperPrinted => quantization_residual_paper(energy, n, l, p),
        QuantizationCondition::ParametricNu => quantization_residual_nu(energy, n, l, p),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub condition: QuantizationCondition,
    /// Defaults to the bound window shrunk by 1e−6·M at each end.
    pub bracket: Option<(f64, f64)>,
    pub panels: usize,
    /// Root tolerance in units of M.
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { condition: QuantizationCondition::default(), bracket: None, panels: 2000, tolerance: 1e-12 }
    }
}

/// `(−M, M + 2 min(0, V₀g/b))`: below the continuum edge of 2(E+M)V(∞) + M².
pub fn bound_window(p: &PotentialParams) -> (f64, f64) {
    crate::oracle::bound_window(p)
}

/// Default search bracket: the bound window shrunk by 1e−6·M.
pub fn default_bracket(p: &PotentialParams) -> (f64, f64) {
    let (lo, hi) = bound_window(p);
    let eps = 1e-6 * p.mass;
    (lo + eps, hi - eps)
}

/// One root of a quantization condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRoot {
    pub energy: f64,
    /// Λ at the root; a normalizable state needs Λ > 0.
    pub lambda: f64,
    /// Imaginary part of the residual at the root (the root is taken on the real part).
    pub residual_imag: f64,
}

/// Real part of the residual on `points` equispaced energies in `[lo, hi]`.
pub fn residual_scan(
    condition: QuantizationCondition,
    n: u32,
    l: u32,
    p: &PotentialParams,
    lo: f64,
    hi: f64,
    points: usize,
) -> Vec<(f64, ComplexScalar)> {
    let steps = points.max(2) - 1;
    (0..=steps)
        .map(|i| {
            let e = lo + (hi - lo) * i as f64 / steps as f64;
            (e, quantization_residual(condition, e, n, l, p))
        })
        .collect()
}

/// Energies in a scan where the real part of the residual changes sign or vanishes.
pub fn sign_changes(scan: &[(f64, ComplexScalar)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (i, &(e, f)) in scan.iter().enumerate() {
        if f.re == 0.0 {
            out.push((e, e));
        } else if let Some(&(e2, f2)) = scan.get(i + 1) {
            if f2.re != 0.0 && (f.re < 0.0) != (f2.re < 0.0) {
                out.push((e, e2));
            }
        }
    }
    out
}

/// Root of `Re f` in `[a, b]` with `Re f(a)`, `Re f(b)` of opposite sign: Illinois
/// false position, bisecting whenever it stalls.
fn refine_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    let mut side = 0i8;
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        let width = b - a;
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let mid = 0.5 * (a + b);
            let fm = f(mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm < 0.0) == (fa < 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
                fb = fm;
            }
            side = 0;
        }
    }
    0.5 * (a + b)
}

/// All roots of the chosen condition inside the bracket; the scan's residual extrema
/// are reported when there are none.
pub fn find_roots(n: u32, l: u32, p: &PotentialParams, opts: &SolverOptions) -> Result<Vec<EnergyRoot>> {
    p.validate()?;
    let (lo, hi) = opts.bracket.unwrap_or_else(|| default_bracket(p));
    if !(lo <= hi) {
        return Err(Error::InvalidParams("bracket must satisfy lo <= hi"));
    }
    let cond = opts.condition;
    let root_at = |e: f64| {
        let c = s_coefficients(e, p, l);
        EnergyRoot { energy: e, lambda: c.lambda.re, residual_imag: quantization_residual(cond, e, n, l, p).im }
    };
    if lo == hi {
        let f = quantization_residual(cond, lo, n, l, p).re;
        return if f.abs() <= 1e-8 {
            Ok(alloc::vec![root_at(lo)])
        } else {
            Err(Error::NoRoot { residual_min: f, residual_max: f })
        };
    }
    let scan = residual_scan(cond, n, l, p, lo, hi, opts.panels.max(1) + 1);
    let brackets = sign_changes(&scan);
    if brackets.is_empty() {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (_, f) in &scan {
            min = min.min(f.re);
            max = max.max(f.re);
        }
        return Err(Error::NoRoot { residual_min: min, residual_max: max });
    }
    let tol = opts.tolerance * p.mass;
    Ok(brackets
        .into_iter()
        .map(|(a, b)| {
            let e = if a == b { a } else { refine_root(|e| quantization_residual(cond, e, n, l, p).re, a, b, tol) };
            root_at(e)
        })
        .collect())
}

/// The unique root of the condition in the bracket.
pub fn solve_energy(n: u32, l: u32, p: &PotentialParams, opts: &SolverOptions) -> Result<EnergyRoot> {
    let roots = find_roots(n, l, p, opts)?;
    if roots.len() > 1 {
        return Err(Error::MultipleRoots(roots.iter().map(|r| r.energy).collect()));
    }
    Ok(roots[0])
}

/// Exponent of (1−s) in the wavefunction, as ½ + β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WavefunctionForm {
    /// β = Ξ = √(−α⁴l(l+1)) as typeset.
    PaperPrinted,
    /// β = √(¼ − 4α⁴l(l+1)), the exponent that solves the s-equation at s → 1.
    #[default]
    ParametricNu,
}

/// Where the energy of a [`BoundState`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyOrigin {
    Condition(QuantizationCondition),
    Oracle,
    Supplied,
}

/// A normalized θ = 0 radial state
/// `φ(s) = N′ s^√Λ (1−s)^(½+β) ₂F₁(−n, n+2√Λ+2β+1; 1+2√Λ; s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub state: QuantumState,
    pub energy: f64,
    pub energy_origin: EnergyOrigin,
    pub form: WavefunctionForm,
    /// N′ = N Γ(n+2√Λ+1)/(n! Γ(2√Λ+1)), from the exact Beta sum.
    pub n_prime: f64,
    /// N, the coefficient in front of the Jacobi polynomial.
    pub n_bare: f64,
    /// N′ obtained by reading the squared-₂F₁ integral as a single ₃F₂; kept for comparison.
    pub n_prime_paper_route: Option<ComplexScalar>,
    pub scoef: SCoefficients,
    pub sqrt_lambda: f64,
    /// β in the (1−s) exponent ½ + β.
    pub beta: ComplexScalar,
    /// Coefficients of ₂F₁(−n, …; s) in powers of s.
    pub series: Vec<ComplexScalar>,
    /// ∫|φ(r)|²dr from adaptive quadrature plus the analytic tail.
    pub quadrature_norm: f64,
}

impl BoundState {
    pub fn exponent(&self) -> ComplexScalar {
        self.beta + 0.5
    }

    /// φ(s) for s ∈ [0, 1].
    pub fn phi_s(&self, s: f64) -> ComplexScalar {
        if s <= 0.0 {
            return real(0.0);
        }
        let tail = if s >= 1.0 { real(0.0) } else { (real(libm::log(1.0 - s)) * self.exponent()).exp() };
        tail * libm::pow(s, self.sqrt_lambda) * poly_eval(&self.series, real(s)) * self.n_prime
    }

    pub fn phi_r(&self, r: f64, p: &PotentialParams) -> Result<ComplexScalar> {
        Ok(self.phi_s(to_s(r, p)?))
    }

    /// |φ(r)|².
    pub fn density(&self, r: f64, p: &PotentialParams) -> Result<f64> {
        Ok(self.phi_r(r, p)?.norm_sqr())
    }

    /// Sign changes of Re φ strictly inside (0, 1), sampled on `points` nodes.
    pub fn interior_zeros(&self, points: usize) -> usize {
        let samples: Vec<f64> = (1..points).map(|i| self.phi_s(i as f64 / points as f64).re).collect();
        crate::oracle::count_nodes(&samples)
    }
}

/// Analytic tail ∫ beyond `r_c + extent·α`, from the s → 0 behaviour α N′² s^(2√Λ)/(2√Λ).
fn tail_bound(n_prime: f64, sqrt_lambda: f64, alpha: f64, extent: f64) -> f64 {
    let s_max = libm::exp(-extent);
    alpha * n_prime * n_prime * libm::pow(s_max, 2.0 * sqrt_lambda) / (2.0 * sqrt_lambda)
}

/// Upper end of the r-space post-check, in units of α beyond r_c.
pub const NORM_CHECK_EXTENT: f64 = 60.0;

/// Normalized state of radial index `n` at `energy`.
pub fn build_wavefunction(
    energy: f64,
    n: u32,
    l: u32,
    p: &PotentialParams,
    form: WavefunctionForm,
    origin: EnergyOrigin,
) -> Result<BoundState> {
    p.validate()?;
    let state = QuantumState::aligned(n, l, 0)?;
    let scoef = s_coefficients(energy, p, l);
    let sqrt_lambda_c = scoef.sqrt_lambda();
    if !(sqrt_lambda_c.re > 0.0) || sqrt_lambda_c.im != 0.0 {
        return Err(Error::NonNormalizable("needs Lambda > 0 for decay as s -> 0"));
    }
    let sqrt_lambda = sqrt_lambda_c.re;
    let beta_exp = match form {
        WavefunctionForm::PaperPrinted => scoef.xi,
        WavefunctionForm::ParametricNu => scoef.boundary_exponent,
    };
    let nn = n as usize;
    let series = hyp2f1_coefficients(nn, beta_exp * 2.0 + (2.0 * sqrt_lambda + n as f64 + 1.0), real(1.0 + 2.0 * sqrt_lambda))?;

    // ∫₀¹ (α/s)|φ|² ds = α N′² Σ c_k B(2√Λ + k, 2 Re(½+β) + 1)
    let xi = real(2.0 * sqrt_lambda);
    let sigma = real(2.0 * (beta_exp.re + 0.5) + 1.0);
    let integral = exact_poly_beta_integral(xi, sigma, &poly_abs_squared(&series))
        .map_err(|_| Error::NonNormalizable("divergent normalization integral"))?;
    if !(integral.re > 0.0 && integral.re.is_finite()) {
        return Err(Error::NonNormalizable("normalization integral not positive"));
    }
    let n_prime = 1.0 / libm::sqrt(p.alpha * integral.re);

    // N′ = N (2√Λ+1)_n / n!
    let mut ratio = 1.0;
    for k in 0..nn {
        ratio *= (2.0 * sqrt_lambda + 1.0 + k as f64) / (k + 1) as f64;
    }
    let n_bare = n_prime / ratio;

    let paper_sigma = beta_exp * 2.0 + 2.0;
    let n_prime_paper_route = beta(xi, paper_sigma)
        .and_then(|b| {
            let f = hyp3f2_unit_terminating(nn, series_b(&beta_exp, sqrt_lambda, n), paper_sigma, real(1.0) + xi, paper_sigma + xi)?;
            Ok((b * f * p.alpha).sqrt().inv())
        })
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite());

    let mut bs = BoundState {
        state,
        energy,
        energy_origin: origin,
        form,
        n_prime,
        n_bare,
        n_prime_paper_route,
        scoef,
        sqrt_lambda,
        beta: beta_exp,
        series,
        quadrature_norm: 0.0,
    };
    let hi = p.r_c + NORM_CHECK_EXTENT * p.alpha;
    let tol = QuadTolerance { abs: 1e-12, rel: 1e-10, max_panels: 4000 };
    let body = quad_integrate_with(|r| bs.density(r, p).unwrap_or(f64::NAN), p.r_c, hi, tol)?;
    bs.quadrature_norm = body + tail_bound(n_prime, sqrt_lambda, p.alpha, NORM_CHECK_EXTENT);
    if (bs.quadrature_norm - 1.0).abs() > 1e-8 {
        return Err(Error::NonNormalizable("quadrature post-check of the norm failed"));
    }
    Ok(bs)
}

fn series_b(beta_exp: &ComplexScalar, sqrt_lambda: f64, n: u32) -> ComplexScalar {
    *beta_exp * 2.0 + (2.0 * sqrt_lambda + n as f64 + 1.0)
}

/// Γ-form prefactor Γ(n+2√Λ+1)/(n! Γ(2√Λ+1)), for cross-checking the product form.
pub fn jacobi_prefactor_gamma(n: u32, sqrt_lambda: f64) -> Result<f64> {
    let a = real(2.0 * sqrt_lambda);
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= k as f64;
    }
    Ok((gamma(a + (n as f64 + 1.0))? / (gamma(a + 1.0)? * fact)).re)
}

/// Root of the condition plus the state built on it.
pub fn solve_state(n: u32, l: u32, p: &PotentialParams, opts: &SolverOptions, form: WavefunctionForm) -> Result<BoundState> {
    let root = solve_energy(n, l, p, opts)?;
    build_wavefunction(root.energy, n, l, p, form, EnergyOrigin::Condition(opts.condition))
}
