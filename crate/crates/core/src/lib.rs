#![no_std]

//! Bound states of the Dirac equation (equal scalar and vector coupling) in the
//! modified Hylleraas potential, with first-order noncommutative (Bopp shift) and
//! weak-electric-field energy corrections.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`specfun`]: complex Gamma/Beta, Pochhammer symbols, terminating ₂F₁/₃F₂, Jacobi polynomials.
//! - [`potential`]: the well, its derivative, the Bopp-shift term, Pekeris-type forms, field terms.
//! - [`radial`]: quantum-number bookkeeping, s-space coefficients, ODE residual.
//! - [`spectrum`]: quantization conditions, root finding, normalized wavefunctions.
//! - [`perturbation`]: first-order energy shifts by quadrature and by the closed ₃F₂ forms.
//! - [`oracle`]: finite-difference eigensolver, adaptive quadrature, exact Beta sums.
//!
//! Natural units (ħ = c = 1) are used throughout.

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod oracle;
pub mod perturbation;
pub mod potential;
pub mod radial;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex scalar used by every special-function routine.
pub type ComplexScalar = Complex64;
