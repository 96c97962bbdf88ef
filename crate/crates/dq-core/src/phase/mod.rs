//! Exact polynomial algebra over flat phase space.
//!
//! Everything here is a pure function over immutable values. Coefficients are
//! complex doubles graded by powers of the formal deformation parameter ħ
//! ([`HbarPoly`]); ħ is bound to a number only at evaluation and grid
//! boundaries.

mod hbar;
mod parse;
mod poly;
mod print;

pub use hbar::HbarPoly;
pub use parse::{parse_expr, ParseError};
pub use poly::{poisson_bracket, to_canonical, to_holomorphic, Basis, PhasePoly, PoissonTensor, Var};

use thiserror::Error;

/// Largest exponent a single variable may carry. Exceeding it is treated as a
/// runaway-series bug, not a legitimate input.
pub const MAX_EXPONENT: u32 = 63;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("basis mismatch: {0:?} vs {1:?}")]
    BasisMismatch(Basis, Basis),
    #[error("variable `{var}` does not belong to the {basis:?} basis")]
    VarBasis { var: &'static str, basis: Basis },
    #[error("exponent {0} exceeds the supported maximum {MAX_EXPONENT}")]
    ExponentOverflow(u64),
    #[error("physical parameter `{0}` must be strictly positive, got {1}")]
    NonPositiveParam(&'static str, f64),
}

/// The physical constants ħ, m, ω. All strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl PhysParams {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self, PhaseError> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(PhaseError::NonPositiveParam(name, v));
            }
        }
        Ok(PhysParams { hbar, mass, omega })
    }

    /// ħ = m = ω = 1, the unit system used throughout the tests.
    pub fn unit() -> Self {
        PhysParams { hbar: 1.0, mass: 1.0, omega: 1.0 }
    }
}
