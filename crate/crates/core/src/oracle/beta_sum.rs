//! Exact integrals of polynomial × s^(ξ−1)(1−s)^(σ−1) over (0, 1) as finite Beta sums.

use alloc::vec::Vec;

use crate::specfun::{beta, hyp3f2_unit_terminating, real};
use crate::{ComplexScalar, Error, Result};

/// ∫₀¹ s^(ξ−1)(1−s)^(σ−1) Σ c_k s^k ds = Σ c_k B(ξ+k, σ).
///
/// Consecutive Beta values come from B(x+1, σ) = B(x, σ)·x/(x+σ).
pub fn exact_poly_beta_integral(xi: ComplexScalar, sigma: ComplexScalar, poly: &[ComplexScalar]) -> Result<ComplexScalar> {
    if !(xi.re > 0.0 && sigma.re > 0.0) {
        return Err(Error::DivergentIntegral);
    }
    let mut b = beta(xi, sigma)?;
    let mut sum = real(0.0);
    for (k, c) in poly.iter().enumerate() {
        if k > 0 {
            let x = xi + (k - 1) as f64;
            b = b * x / (x + sigma);
        }
        sum += *c * b;
    }
    Ok(sum)
}

pub fn poly_mul(a: &[ComplexScalar], b: &[ComplexScalar]) -> Vec<ComplexScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![real(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of |F(s)|² for real s.
pub fn poly_abs_squared(f: &[ComplexScalar]) -> Vec<ComplexScalar> {
    let conj: Vec<_> = f.iter().map(|c| c.conj()).collect();
    poly_mul(f, &conj)
}

/// Horner evaluation.
pub fn poly_eval(poly: &[ComplexScalar], s: ComplexScalar) -> ComplexScalar {
    poly.iter().rev().fold(real(0.0), |acc, c| acc * s + c)
}

/// Euler-type closed form of ∫₀¹ s^(ξ−1)(1−s)^(σ−1) ₂F₁(−n, b; c; s) ds:
/// `B(ξ, σ) ₃F₂(−n, b, ξ; c, ξ+σ; 1)`.
pub fn euler_single_factor(
    n: usize,
    b: ComplexScalar,
    c: ComplexScalar,
    xi: ComplexScalar,
    sigma: ComplexScalar,
) -> Result<ComplexScalar> {
    Ok(beta(xi, sigma)? * hyp3f2_unit_terminating(n, b, xi, c, xi + sigma)?)
}

/// The single-₃F₂ expression offered for the squared integrand [₂F₁(−n, b; c; s)]²:
/// `B(ξ, σ) ₃F₂(−n, b, σ; c, σ+ξ; 1)`. Not an identity in general; kept for comparison.
pub fn paper_squared_reading(
    n: usize,
    b: ComplexScalar,
    c: ComplexScalar,
    xi: ComplexScalar,
    sigma: ComplexScalar,
) -> Result<ComplexScalar> {
    Ok(beta(xi, sigma)? * hyp3f2_unit_terminating(n, b, sigma, c, sigma + xi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quad_integrate;
    use crate::specfun::hyp2f1_coefficients;
    use proptest::prelude::*;

    #[test]
    fn unit_polynomial_is_beta() {
        let (x, y) = (real(2.3), real(3.2));
        let v = exact_poly_beta_integral(x, y, &[real(1.0)]).unwrap();
        assert_eq!(v, beta(x, y).unwrap());
        assert!(matches!(exact_poly_beta_integral(real(0.0), y, &[real(1.0)]), Err(Error::DivergentIntegral)));
        assert!(exact_poly_beta_integral(x, real(-0.5), &[real(1.0)]).is_err());
    }

    #[test]
    fn single_factor_euler_identity() {
        for n in 0..=6 {
            let (b, c) = (real(n as f64 + 2.7), real(1.9));
            let (xi, sigma) = (real(1.9), real(3.0));
            let poly = hyp2f1_coefficients(n, b, c).unwrap();
            let exact = exact_poly_beta_integral(xi, sigma, &poly).unwrap();
            let closed = euler_single_factor(n, b, c, xi, sigma).unwrap();
            let scale = poly
                .iter()
                .enumerate()
                .map(|(k, ck)| (ck * beta(xi + k as f64, sigma).unwrap()).norm())
                .fold(0.0, f64::max);
            assert!((exact - closed).norm() <= 1e-12 * scale, "n = {n}");
        }
    }

    #[test]
    fn squared_factor_reading_is_not_an_identity() {
        let (b, c, xi, sigma) = (real(4.7), real(2.4), real(2.4), real(3.0));
        let poly = hyp2f1_coefficients(1, b, c).unwrap();
        let exact = exact_poly_beta_integral(xi, sigma, &poly_abs_squared(&poly)).unwrap();
        let reading = paper_squared_reading(1, b, c, xi, sigma).unwrap();
        assert!((exact - reading).norm() > 1e-3 * exact.norm());
    }

    #[test]
    fn abs_squared_of_complex_polynomial() {
        let f = [ComplexScalar::new(1.0, 0.5), ComplexScalar::new(-0.3, 2.0)];
        let sq = poly_abs_squared(&f);
        for s in [0.0, 0.3, 0.9] {
            let direct = poly_eval(&f, real(s)).norm_sqr();
            let v = poly_eval(&sq, real(s));
            assert!((v.re - direct).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn beta_sum_matches_quadrature(
            xi in 1.0f64..4.0,
            sigma in 1.0f64..4.0,
            c0 in -2.0f64..2.0,
            c1 in -2.0f64..2.0,
            c2 in -2.0f64..2.0,
        ) {
            let poly = [real(c0), real(c1), real(c2)];
            let exact = exact_poly_beta_integral(real(xi), real(sigma), &poly).unwrap();
            let quad = quad_integrate(
                |s| libm::pow(s, xi - 1.0) * libm::pow(1.0 - s, sigma - 1.0) * (c0 + c1 * s + c2 * s * s),
                0.0,
                1.0,
                1e-13,
            )
            .unwrap();
            prop_assert!((exact.re - quad).abs() <= 1e-10 && exact.im == 0.0);
        }
    }
}
