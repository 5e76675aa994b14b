//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule: `error ≤ max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        QuadTolerance { abs: 1e-12, rel: 1e-10, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// ∫ f over [lo, hi] to absolute tolerance `tol`.
pub fn quad_integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    quad_integrate_with(f, lo, hi, QuadTolerance { abs: tol, rel: 0.0, ..Default::default() })
}

/// ∫ f over [lo, hi]; splits the panel with the largest error estimate until the
/// summed estimate meets `tol`.
pub fn quad_integrate_with<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: QuadTolerance) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let mut panels: Vec<Panel> = alloc::vec![gauss_kronrod(&f, lo, hi)];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailure { estimate: total, error });
        }
        if error <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= tol.max_panels {
            return Err(Error::QuadratureFailure { estimate: total, error });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| if p.error > best.1 { (i, p.error) } else { best });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            return Err(Error::QuadratureFailure { estimate: total, error });
        }
        panels.push(gauss_kronrod(&f, p.lo, mid));
        panels.push(gauss_kronrod(&f, mid, p.hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{beta, real};

    #[test]
    fn constant_and_exponential() {
        assert!((quad_integrate(|_| 1.0, 0.0, 1.0, 1e-14).unwrap() - 1.0).abs() < 1e-15);
        let v = quad_integrate(|r| libm::exp(-r), 0.0, 60.0, 1e-13).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_integrand() {
        let v = quad_integrate(|s| libm::pow(s, 1.3) * libm::pow(1.0 - s, 2.2), 0.0, 1.0, 1e-14).unwrap();
        let b = beta(real(2.3), real(3.2)).unwrap().re;
        assert!((v - b).abs() / b < 1e-11);
        assert!((b - 0.054_029_791_748_357_24).abs() < 1e-15);
    }

    #[test]
    fn panel_budget_exhaustion_is_reported() {
        let tol = QuadTolerance { abs: 1e-15, rel: 0.0, max_panels: 3 };
        let res = quad_integrate_with(|x| libm::sin(50.0 * x), 0.0, 10.0, tol);
        assert!(matches!(res, Err(Error::QuadratureFailure { .. })));
    }
}
