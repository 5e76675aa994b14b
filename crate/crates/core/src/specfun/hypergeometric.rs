use alloc::vec::Vec;

use crate::specfun::{is_gamma_pole, real};
use crate::{ComplexScalar, Error, Result};

/// Rising factorial (x)_k = x(x+1)…(x+k−1), always as the explicit product.
pub fn pochhammer(x: ComplexScalar, k: usize) -> ComplexScalar {
    let mut acc = real(1.0);
    for i in 0..k {
        acc *= x + i as f64;
    }
    acc
}

/// Fails when some factor c + j, j < n, of a denominator Pochhammer is exactly zero.
fn check_denominator(c: ComplexScalar, n: usize) -> Result<()> {
    if c.im == 0.0 && c.re <= 0.0 && libm::floor(c.re) == c.re && -c.re < n as f64 {
        return Err(Error::DegenerateDenominator { index: (-c.re) as usize + 1 });
    }
    Ok(())
}

/// Coefficients of the degree-n polynomial ₂F₁(−n, b2; c; s) in powers of s.
pub fn hyp2f1_coefficients(n: usize, b2: ComplexScalar, c: ComplexScalar) -> Result<Vec<ComplexScalar>> {
    check_denominator(c, n)?;
    let minus_n = -(n as f64);
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = real(1.0);
    coeffs.push(t);
    for k in 0..n {
        let kf = k as f64;
        t = t * (minus_n + kf) * (b2 + kf) / ((c + kf) * (kf + 1.0));
        coeffs.push(t);
    }
    Ok(coeffs)
}

/// ₂F₁(−n, b2; c; s) = Σ_{k=0}^{n} (−n)_k (b2)_k / ((c)_k k!) s^k.
pub fn hyp2f1_terminating(n: usize, b2: ComplexScalar, c: ComplexScalar, s: ComplexScalar) -> Result<ComplexScalar> {
    let coeffs = hyp2f1_coefficients(n, b2, c)?;
    let mut sum = real(0.0);
    let mut power = real(1.0);
    for c_k in coeffs {
        sum += c_k * power;
        power *= s;
    }
    Ok(sum)
}

/// ₃F₂(−n, a2, a3; b1, b2; 1), a finite sum of n + 1 terms.
pub fn hyp3f2_unit_terminating(
    n: usize,
    a2: ComplexScalar,
    a3: ComplexScalar,
    b1: ComplexScalar,
    b2: ComplexScalar,
) -> Result<ComplexScalar> {
    check_denominator(b1, n)?;
    check_denominator(b2, n)?;
    let minus_n = -(n as f64);
    let mut term = real(1.0);
    let mut sum = term;
    for k in 0..n {
        let kf = k as f64;
        term = term * (minus_n + kf) * (a2 + kf) * (a3 + kf) / ((b1 + kf) * (b2 + kf) * (kf + 1.0));
        sum += term;
    }
    Ok(sum)
}

/// Jacobi polynomial P_n^(a,b)(1 − 2s) through its ₂F₁ representation,
/// `(a+1)_n / n! · ₂F₁(−n, n+a+b+1; a+1; s)`.
///
/// For s > ½ the series cancels badly (its terms reach ~1e6 times the result at
/// n = 8, s ≈ 0.93), so it is evaluated as (−1)^n P_n^(b,a)(1 − 2(1−s)) instead.
///
/// The prefactor is the ratio Γ(n+a+1)/(n! Γ(a+1)); it is undefined (a pole of the
/// Γ form) when `a` is a negative integer.
pub fn jacobi_p(n: usize, a: ComplexScalar, b: ComplexScalar, s: f64) -> Result<ComplexScalar> {
    if is_gamma_pole(a + 1.0) {
        return Err(Error::Pole { at: a.re + 1.0, context: "jacobi prefactor" });
    }
    if s > 0.5 && !is_gamma_pole(b + 1.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(jacobi_series(n, b, a, 1.0 - s)? * sign);
    }
    jacobi_series(n, a, b, s)
}

fn jacobi_series(n: usize, a: ComplexScalar, b: ComplexScalar, s: f64) -> Result<ComplexScalar> {
    let mut prefactor = pochhammer(a + 1.0, n);
    for k in 1..=n {
        prefactor /= k as f64;
    }
    let series = hyp2f1_terminating(n, b + a + (n as f64 + 1.0), a + 1.0, real(s))?;
    Ok(prefactor * series)
}
