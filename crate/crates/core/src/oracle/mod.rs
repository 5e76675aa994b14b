//! Numerical ground truth, independent of the closed forms.
//!
//! The radial problem with equal scalar and vector coupling is
//!
//! ```text
//! −φ'' + W(r; E) φ = (E² − M²) φ,   W(r; E) = l(l+1)/r² + 2(E + M) V(r)
//! ```
//!
//! on `[r_c, r_max]` with Dirichlet ends. For fixed E this is a linear eigenproblem
//! whose n-th eigenvalue λ_n(E) is found on a uniform grid (second-order
//! differences, symmetric tridiagonal). A bound state is a solution of
//! `λ_n(E) = E² − M²`.

mod beta_sum;
mod quadrature;
mod tridiag;

use alloc::format;
use alloc::vec::Vec;

pub use beta_sum::{
    euler_single_factor, exact_poly_beta_integral, paper_squared_reading, poly_abs_squared, poly_eval, poly_mul,
};
pub use quadrature::{quad_integrate, quad_integrate_with, QuadTolerance};
pub use tridiag::{count_nodes, inverse_iteration, kth_eigenvalue, rayleigh_quotient, sturm_count};

use crate::potential::{pekeris_inv_r2_variant, v_hylleraas, PekerisVariant, PotentialParams};
use crate::{Error, Result};

/// Uniform grid of `n_points` interior nodes strictly between `r_min` and `r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub const DEFAULT_POINTS: usize = 6000;
    pub const DEFAULT_EXTENT: f64 = 60.0;
    /// Smallest grid accepted for acceptance-grade runs.
    pub const MIN_ACCEPTANCE_POINTS: usize = 1000;

    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite() && r_max > r_min) {
            return Err(Error::Domain("radial grid needs r_min < r_max"));
        }
        if n_points < 3 {
            return Err(Error::GridTooCoarse { points: n_points, required: 3 });
        }
        Ok(RadialGrid { r_min, r_max, n_points })
    }

    /// `[r_c, r_c + extent·α]`, the left Dirichlet wall sitting on r_c.
    pub fn for_params(p: &PotentialParams, n_points: usize, extent: f64) -> Result<Self> {
        Self::new(p.r_c, p.r_c + extent * p.alpha, n_points)
    }

    pub fn default_for(p: &PotentialParams) -> Self {
        RadialGrid { r_min: p.r_c, r_max: p.r_c + Self::DEFAULT_EXTENT * p.alpha, n_points: Self::DEFAULT_POINTS }
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points + 1) as f64
    }

    /// i-th interior node, 0-based.
    pub fn r(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.r(i)).collect()
    }

    /// Same interval with the step halved; every old node is a new node.
    pub fn refined(&self) -> Self {
        RadialGrid { n_points: 2 * self.n_points + 1, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    /// Grid-normalized: Σ vᵢ² h = 1, first significant component positive.
    pub vector: Vec<f64>,
}

fn tridiagonal(w: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let inv_h2 = 1.0 / (h * h);
    let diag = w.iter().map(|wi| 2.0 * inv_h2 + wi).collect();
    let off = alloc::vec![-inv_h2; w.len().saturating_sub(1)];
    (diag, off)
}

/// The `count` lowest eigenpairs of `−φ'' + Wφ = λφ`, Dirichlet at both ends.
pub fn grid_eigensolve(w: &[f64], grid: &RadialGrid, count: usize) -> Result<Vec<Eigenpair>> {
    if w.len() != grid.n_points {
        return Err(Error::Domain("W must be sampled on every grid node"));
    }
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("W must be finite on the grid"));
    }
    let h = grid.step();
    let (diag, off) = tridiagonal(w, h);
    let scale = 1.0 / libm::sqrt(h);
    (0..count.min(grid.n_points))
        .map(|k| {
            let lambda = kth_eigenvalue(&diag, &off, k);
            let mut vector = inverse_iteration(&diag, &off, lambda)?;
            vector.iter_mut().for_each(|x| *x *= scale);
            Ok(Eigenpair { lambda, vector })
        })
        .collect()
}

/// The centrifugal term of the effective operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Centrifugal {
    #[default]
    Exact,
    Pekeris(PekerisVariant),
}

/// Which radial problem the oracle solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleModel {
    /// The Hylleraas well itself, with the chosen centrifugal term.
    #[default]
    Hylleraas,
    /// The r-space image of the s-space equation the closed forms solve:
    /// `2(E+M)(V₀/b)(g − a u)/(1 − u) − 4α² l(l+1) u/(1 − u)²`. It reduces to the
    /// s-equation exactly under s = u, so it checks the closed forms themselves.
    SSpaceImage,
}

/// How `λ_n(E) = E² − M²` is solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelfConsistency {
    /// Scan the secular function `λ_n(E) − (E² − M²)` over the bound window, then
    /// bisect the lowest sign change.
    Secular { panels: usize },
    /// `E ← E + η(±√(λ_n(E) + M²) − E)`, starting from E = 0.
    DampedFixedPoint { eta: f64, max_iterations: usize },
}

impl Default for SelfConsistency {
    fn default() -> Self {
        SelfConsistency::Secular { panels: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleSettings {
    pub centrifugal: Centrifugal,
    pub model: OracleModel,
    pub method: SelfConsistency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub energy: f64,
    /// λ_n at the returned energy.
    pub lambda: f64,
    pub grid: RadialGrid,
    /// Grid-normalized eigenvector at the returned energy.
    pub wavefunction: Vec<f64>,
    pub node_count: usize,
    /// Secular-function evaluations, or fixed-point steps.
    pub iterations: usize,
    pub converged: bool,
}

/// W(r; E) of the chosen model.
pub fn effective_potential(r: f64, energy: f64, l: u32, p: &PotentialParams, settings: &OracleSettings) -> f64 {
    let ll = (l * (l + 1)) as f64;
    let coupling = 2.0 * (energy + p.mass);
    match settings.model {
        OracleModel::Hylleraas => {
            let centrifugal = match settings.centrifugal {
                Centrifugal::Exact => ll / (r * r),
                Centrifugal::Pekeris(variant) => ll * pekeris_inv_r2_variant(r, p, variant),
            };
            centrifugal + coupling * v_hylleraas(r, p)
        }
        OracleModel::SSpaceImage => {
            let u = p.u(r);
            let d = 1.0 - u;
            coupling * (p.v0 / p.b) * (p.g - p.a * u) / d - 4.0 * p.alpha * p.alpha * ll * u / (d * d)
        }
    }
}

struct Operator<'a> {
    n: usize,
    l: u32,
    p: &'a PotentialParams,
    grid: &'a RadialGrid,
    settings: &'a OracleSettings,
    nodes: Vec<f64>,
}

impl Operator<'_> {
    fn matrix(&self, energy: f64) -> (Vec<f64>, Vec<f64>) {
        let w: Vec<f64> =
            self.nodes.iter().map(|&r| effective_potential(r, energy, self.l, self.p, self.settings)).collect();
        tridiagonal(&w, self.grid.step())
    }

    fn lambda(&self, energy: f64) -> f64 {
        let (diag, off) = self.matrix(energy);
        kth_eigenvalue(&diag, &off, self.n)
    }

    fn secular(&self, energy: f64) -> f64 {
        let m = self.p.mass;
        self.lambda(energy) - (energy * energy - m * m)
    }

    fn finish(&self, energy: f64, iterations: usize, converged: bool) -> Result<OracleResult> {
        let (diag, off) = self.matrix(energy);
        let lambda = kth_eigenvalue(&diag, &off, self.n);
        let mut wavefunction = inverse_iteration(&diag, &off, lambda)?;
        let scale = 1.0 / libm::sqrt(self.grid.step());
        wavefunction.iter_mut().for_each(|x| *x *= scale);
        let node_count = count_nodes(&wavefunction);
        Ok(OracleResult { energy, lambda, grid: *self.grid, wavefunction, node_count, iterations, converged })
    }
}

/// Bound-state window `(−M, M + 2 min(0, V₀g/b))`, i.e. below the continuum edge of W.
pub fn bound_window(p: &PotentialParams) -> (f64, f64) {
    let m = p.mass;
    (-m, m + 2.0 * p.asymptote().min(0.0))
}

/// Solves `λ_n(E) = E² − M²` for the state with radial index `n`.
pub fn self_consistent_energy(
    n: u32,
    l: u32,
    p: &PotentialParams,
    grid: &RadialGrid,
    settings: &OracleSettings,
) -> Result<OracleResult> {
    p.validate()?;
    let op = Operator { n: n as usize, l, p, grid, settings, nodes: grid.nodes() };
    if op.n >= grid.n_points {
        return Err(Error::GridTooCoarse { points: grid.n_points, required: op.n + 1 });
    }
    match settings.method {
        SelfConsistency::Secular { panels } => secular_root(&op, panels.max(2)),
        SelfConsistency::DampedFixedPoint { eta, max_iterations } => damped_fixed_point(&op, eta, max_iterations),
    }
}

fn secular_root(op: &Operator<'_>, panels: usize) -> Result<OracleResult> {
    let m = op.p.mass;
    let (lo, hi) = bound_window(op.p);
    let eps = 1e-9 * m;
    let (lo, hi) = (lo + eps, hi - eps);
    if hi <= lo {
        return Err(Error::NoBoundState(format!("empty bound window for V(inf) = {}", op.p.asymptote())));
    }
    let tol = 1e-13 * m;
    let mut evals = 0;
    let mut prev_e = lo;
    let mut prev_f = op.secular(lo);
    evals += 1;
    if prev_f == 0.0 {
        return op.finish(lo, evals, true);
    }
    for i in 1..=panels {
        let e = lo + (hi - lo) * i as f64 / panels as f64;
        let f = op.secular(e);
        evals += 1;
        if f == 0.0 {
            return op.finish(e, evals, true);
        }
        if (f < 0.0) != (prev_f < 0.0) {
            let (mut a, mut fa, mut b) = (prev_e, prev_f, e);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = op.secular(mid);
                evals += 1;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return op.finish(0.5 * (a + b), evals, true);
        }
        prev_e = e;
        prev_f = f;
    }
    Err(Error::NoBoundState(format!(
        "no sign change of lambda_{}(E) - (E^2 - M^2) in ({lo}, {hi})",
        op.n
    )))
}

fn damped_fixed_point(op: &Operator<'_>, eta: f64, max_iterations: usize) -> Result<OracleResult> {
    let m = op.p.mass;
    let (lo, hi) = bound_window(op.p);
    let mut energy = 0.0_f64;
    for k in 1..=max_iterations {
        let lambda = op.lambda(energy);
        let e2 = lambda + m * m;
        if e2 < 0.0 {
            return Err(Error::NoBoundState(format!("lambda_{} + M^2 = {e2} < 0", op.n)));
        }
        let target = libm::sqrt(e2).copysign(if energy < 0.0 { -1.0 } else { 1.0 });
        let next = energy + eta * (target - energy);
        if !(next > lo && next < hi) {
            return Err(Error::NoBoundState(format!("iterate E = {next} left the bound window")));
        }
        if (next - energy).abs() < 1e-10 * m {
            return op.finish(next, k, true);
        }
        energy = next;
    }
    Err(Error::ConvergenceFailure { iterations: max_iterations })
}

/// Energies on three successively halved grids and their Richardson extrapolations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichardsonEnergy {
    pub coarse: f64,
    pub fine: f64,
    pub finest: f64,
    /// (4 E_fine − E_coarse)/3.
    pub extrapolated_coarse: f64,
    /// (4 E_finest − E_fine)/3; the reported value.
    pub extrapolated: f64,
    /// (E_coarse − E_fine)/(E_fine − E_finest); ≈ 4 for a second-order scheme.
    pub convergence_ratio: f64,
}

impl RichardsonEnergy {
    /// Change between the two extrapolations, the grid-convergence estimate.
    pub fn change(&self) -> f64 {
        (self.extrapolated - self.extrapolated_coarse).abs()
    }
}

pub fn richardson_energy(
    n: u32,
    l: u32,
    p: &PotentialParams,
    grid: &RadialGrid,
    settings: &OracleSettings,
) -> Result<RichardsonEnergy> {
    let fine_grid = grid.refined();
    let coarse = self_consistent_energy(n, l, p, grid, settings)?.energy;
    let fine = self_consistent_energy(n, l, p, &fine_grid, settings)?.energy;
    let finest = self_consistent_energy(n, l, p, &fine_grid.refined(), settings)?.energy;
    Ok(RichardsonEnergy {
        coarse,
        fine,
        finest,
        extrapolated_coarse: (4.0 * fine - coarse) / 3.0,
        extrapolated: (4.0 * finest - fine) / 3.0,
        convergence_ratio: (coarse - fine) / (fine - finest),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn p0() -> PotentialParams {
        PotentialParams::new(1.0, -4.0, 1.0, 0.0, 1.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn particle_in_a_box() {
        let grid = RadialGrid::new(0.0, 1.0, RadialGrid::DEFAULT_POINTS).unwrap();
        let w = alloc::vec![0.0; grid.n_points];
        let pairs = grid_eigensolve(&w, &grid, 4).unwrap();
        for (k, pair) in pairs.iter().enumerate() {
            let exact = ((k + 1) as f64 * PI).powi(2);
            assert!((pair.lambda - exact).abs() / exact < 1e-4);
            assert_eq!(count_nodes(&pair.vector), k);
            let norm: f64 = pair.vector.iter().map(|v| v * v).sum::<f64>() * grid.step();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_oscillator_spacing() {
        let grid = RadialGrid::new(0.0, 20.0, 4000).unwrap();
        let w: Vec<f64> = grid.nodes().iter().map(|r| (r - 10.0) * (r - 10.0)).collect();
        let pairs = grid_eigensolve(&w, &grid, 4).unwrap();
        for (k, pair) in pairs.iter().enumerate() {
            assert!((pair.lambda - (2 * k + 1) as f64).abs() < 1e-4, "{k}: {}", pair.lambda);
        }
    }

    #[test]
    fn free_case_has_no_bound_state() {
        let p = PotentialParams::new(0.0, -4.0, 1.0, 0.0, 1.0, 0.5, 1.0).unwrap();
        let grid = RadialGrid::for_params(&p, 1000, 60.0).unwrap();
        let res = self_consistent_energy(0, 0, &p, &grid, &OracleSettings::default());
        assert!(matches!(res, Err(Error::NoBoundState(_))));
        let fp = OracleSettings {
            method: SelfConsistency::DampedFixedPoint { eta: 0.5, max_iterations: 500 },
            ..Default::default()
        };
        assert!(self_consistent_energy(0, 0, &p, &grid, &fp).is_err());
    }

    #[test]
    fn canonical_ground_state_is_bound() {
        let p = p0();
        let grid = RadialGrid::for_params(&p, 2000, 60.0).unwrap();
        let res = self_consistent_energy(0, 0, &p, &grid, &OracleSettings::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.node_count, 0);
        assert!((res.energy - 0.122_563).abs() < 2e-4, "{}", res.energy);
        let secular = res.lambda - (res.energy * res.energy - 1.0);
        assert!(secular.abs() < 1e-9);
    }

    #[test]
    fn refined_grid_nests() {
        let grid = RadialGrid::new(0.5, 60.5, 100).unwrap();
        let fine = grid.refined();
        assert!((fine.step() * 2.0 - grid.step()).abs() < 1e-15);
        assert!((fine.r(1) - grid.r(0)).abs() < 1e-13);
    }
}
