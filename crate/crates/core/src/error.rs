use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Γ evaluated at a non-positive integer. `context` names the caller's term, if any.
    Pole { at: f64, context: &'static str },
    /// A denominator Pochhammer symbol of a terminating series vanished.
    DegenerateDenominator { index: usize },
    /// Argument outside the domain of the operation.
    Domain(&'static str),
    /// A finite input produced a non-finite result.
    Overflow(&'static str),
    /// Parameters violate a type invariant.
    InvalidParams(&'static str),
    NoRoot { residual_min: f64, residual_max: f64 },
    MultipleRoots(Vec<f64>),
    NonNormalizable(&'static str),
    QuadratureFailure { estimate: f64, error: f64 },
    DivergentIntegral,
    GridTooCoarse { points: usize, required: usize },
    ConvergenceFailure { iterations: usize },
    NoBoundState(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { at, context } if context.is_empty() => {
                write!(f, "gamma pole at {at}")
            }
            Error::Pole { at, context } => write!(f, "gamma pole at {at} ({context})"),
            Error::DegenerateDenominator { index } => {
                write!(f, "denominator Pochhammer vanishes at series index {index}")
            }
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Overflow(what) => write!(f, "overflow in {what}"),
            Error::InvalidParams(what) => write!(f, "invalid parameters: {what}"),
            Error::NoRoot { residual_min, residual_max } => write!(
                f,
                "no root in bracket (residual range [{residual_min:e}, {residual_max:e}])"
            ),
            Error::MultipleRoots(roots) => write!(f, "{} roots in bracket", roots.len()),
            Error::NonNormalizable(why) => write!(f, "non-normalizable state: {why}"),
            Error::QuadratureFailure { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate:e}, error {error:e})"
            ),
            Error::DivergentIntegral => write!(f, "divergent Beta integral"),
            Error::GridTooCoarse { points, required } => {
                write!(f, "grid has {points} points, need at least {required}")
            }
            Error::ConvergenceFailure { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::NoBoundState(why) => write!(f, "no bound state: {why}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Short machine-readable tag, used for status columns.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::Domain(_) => "DomainError",
            Error::Overflow(_) => "Overflow",
            Error::InvalidParams(_) => "InvalidParams",
            Error::NoRoot { .. } => "NoRoot",
            Error::MultipleRoots(_) => "MultipleRoots",
            Error::NonNormalizable(_) => "NonNormalizable",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::DivergentIntegral => "DivergentIntegral",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NoBoundState(_) => "NoBoundState",
        }
    }
}
