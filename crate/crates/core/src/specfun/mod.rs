//! Special functions over complex scalars.
//!
//! Everything here is evaluated in complex arithmetic: the angular parameter Ξ of
//! the s-space equation is imaginary for l ≥ 1, and it enters Γ arguments, series
//! parameters and exponents.

mod gamma;
mod hypergeometric;

pub use gamma::{beta, gamma, ln_gamma, Lanczos, GODFREY};
pub use hypergeometric::{
    hyp2f1_coefficients, hyp2f1_terminating, hyp3f2_unit_terminating, jacobi_p, pochhammer,
};

use crate::ComplexScalar;

/// `true` when `z` sits exactly on a pole of Γ (0, −1, −2, …).
pub fn is_gamma_pole(z: ComplexScalar) -> bool {
    z.im == 0.0 && z.re <= 0.0 && libm::floor(z.re) == z.re
}

pub(crate) fn real(x: f64) -> ComplexScalar {
    ComplexScalar::new(x, 0.0)
}
