//! Deformation quantization on flat phase space.
//!
//! The crate is organized around an exact symbolic layer and a numeric layer
//! that cross-validate each other:
//!
//! * [`phase`] — sparse phase-space polynomials with ħ-graded complex
//!   coefficients, expression parsing, derivatives, Poisson brackets and the
//!   canonical ↔ holomorphic coordinate change.
//! * [`star`] — the Moyal, standard and normal star products, transition
//!   operators between them, and a closed Gaussian star calculus.
//! * [`oscillator`] — harmonic-oscillator projectors, star exponentials
//!   (closed form and radial PDE integration), spectra and the
//!   Fourier-Dirichlet projection.
//! * [`weyl`] — the correspondence between phase-space functions and
//!   truncated Fock-space matrices for five operator orderings.
//! * [`grid`] — sampled phase-space functions on uniform grids: quadrature,
//!   Wigner marginals and grid star products with spectral derivatives.
//! * [`kernel`] — the oscillator Feynman kernel: Mehler closed form,
//!   eigenfunction sums, short-time slice composition and the Fourier bridge
//!   back to the star exponential.

pub mod grid;
pub mod kernel;
pub mod oscillator;
pub mod phase;
pub mod star;
pub mod weyl;

pub use phase::{parse_expr, Basis, HbarPoly, PhasePoly, PhysParams, Var};
pub use star::{GaussianPoly, SchemeSpec};

/// Complex double, the coefficient type everywhere.
pub type C64 = num_complex::Complex64;
