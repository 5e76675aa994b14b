//! Symmetric tridiagonal eigenpairs: Sturm-sequence bisection for eigenvalues,
//! inverse iteration for eigenvectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const PIVOT_GUARD: f64 = 1e-300;

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if q.abs() < PIVOT_GUARD { PIVOT_GUARD.copysign(q) } else { q };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(diag, off);
    let pad = 1e-12 * (hi - lo).abs().max(1.0);
    lo -= pad;
    hi += pad;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) || mid == lo || mid == hi {
            break;
        }
        if sturm_count(diag, off, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// LU factorisation of a (nonsymmetric-storage) tridiagonal matrix with partial
/// pivoting, LAPACK `gttrf` layout.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>) -> Self {
        let n = d.len();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = PIVOT_GUARD;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = PIVOT_GUARD;
        }
        TridiagLu { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Eigenvector for an (accurate) eigenvalue `lambda`, unit Euclidean norm,
/// sign fixed so the first non-negligible component is positive.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    let shifted: Vec<f64> = diag.iter().map(|d| d - lambda).collect();
    let lu = TridiagLu::factor(off.to_vec(), shifted, off.to_vec());
    // deterministic, non-symmetric start vector
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * libm::sin(i as f64 * 0.7)).collect();
    let scale = diag.iter().map(|d| d.abs()).fold(0.0, f64::max).max(1.0);
    for _ in 0..6 {
        lu.solve(&mut v);
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::ConvergenceFailure { iterations: 0 });
        }
        v.iter_mut().for_each(|x| *x /= norm);
        if residual_norm(diag, off, lambda, &v) <= 1e-10 * scale {
            break;
        }
    }
    if residual_norm(diag, off, lambda, &v) > 1e-6 * scale {
        return Err(Error::ConvergenceFailure { iterations: 6 });
    }
    let peak = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-6 * peak) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(v)
}

fn residual_norm(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut sum = 0.0;
    for i in 0..n {
        let mut t = (diag[i] - lambda) * v[i];
        if i > 0 {
            t += off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            t += off[i] * v[i + 1];
        }
        sum += t * t;
    }
    libm::sqrt(sum)
}

/// vᵀTv / vᵀv.
pub fn rayleigh_quotient(diag: &[f64], off: &[f64], v: &[f64]) -> f64 {
    let n = diag.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let mut t = diag[i] * v[i];
        if i > 0 {
            t += off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            t += off[i] * v[i + 1];
        }
        num += v[i] * t;
        den += v[i] * v[i];
    }
    num / den
}

/// Sign changes, ignoring entries below `1e-9 · max|v|`.
pub fn count_nodes(v: &[f64]) -> usize {
    let peak = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let floor = 1e-9 * peak;
    let mut nodes = 0;
    let mut last = 0.0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && (x > 0.0) != (last > 0.0) {
            nodes += 1;
        }
        last = x;
    }
    nodes
}
