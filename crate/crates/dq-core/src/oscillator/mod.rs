//! Harmonic-oscillator spectral objects: projectors in the normal and Moyal
//! schemes, *-genvalue residuals, spectra, star exponentials and the
//! Fourier-Dirichlet projection that extracts projectors from them.

mod fd;
mod ode;
pub mod orthopoly;

pub use fd::{pi0_norm_on_grid, scan_spectrum, DetectedLine, PeriodSamples};
pub use ode::{star_exponential_ode, OdeSolution, RadialGridSpec};
pub use orthopoly::{hermite, hermite_function, laguerre, oscillator_psi, oscillator_psi_momentum};

use thiserror::Error;

use crate::phase::{Basis, HbarPoly, PhaseError, PhasePoly, PhysParams, Var};
use crate::star::{star_gaussian_poly, star_poly_gaussian, GaussianPoly, SchemeSpec, StarError};
use crate::C64;

/// Largest projector index the exact layer will build.
pub const MAX_PROJECTOR_INDEX: u32 = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("projector index {0} out of range (max {MAX_PROJECTOR_INDEX})")]
    IndexOutOfRange(u32),
    #[error("star exponential singular at ωt = {0} (odd multiple of π)")]
    Singular(f64),
    #[error("phase-space integral diverges: Re μ = {0} is not negative")]
    NonNormalizable(f64),
    #[error("integration blew up at t = {t}: |E| reached {magnitude:.3e}")]
    Blowup { t: f64, magnitude: f64 },
    #[error("{0} time samples cannot resolve energies near {1} (Nyquist bound)")]
    InsufficientSampling(usize, f64),
}

/// The classical Hamilton function p²/2m + mω²q²/2.
pub fn hamiltonian(params: &PhysParams) -> PhasePoly {
    let q2 = PhasePoly::monomial(Basis::Canonical, (2, 0), HbarPoly::one());
    let p2 = PhasePoly::monomial(Basis::Canonical, (0, 2), HbarPoly::one());
    &p2.scale(C64::new(0.5 / params.mass, 0.0))
        + &q2.scale(C64::new(0.5 * params.mass * params.omega * params.omega, 0.0))
}

/// The same Hamilton function in the holomorphic chart, ω aā.
pub fn hamiltonian_holomorphic(params: &PhysParams) -> PhasePoly {
    PhasePoly::monomial(
        Basis::Holomorphic,
        (1, 1),
        HbarPoly::constant(C64::new(params.omega, 0.0)),
    )
}

/// Energy of the n-th line, with ħ bound numerically.
pub fn energy(n: u32, scheme: SchemeSpec, params: &PhysParams) -> f64 {
    let quantum = params.hbar * params.omega;
    match scheme {
        SchemeSpec::Moyal => (n as f64 + 0.5) * quantum,
        SchemeSpec::Normal => n as f64 * quantum,
        SchemeSpec::Standard => (n as f64 + 0.5) * quantum,
    }
}

fn check_index(n: u32) -> Result<(), OscError> {
    if n > MAX_PROJECTOR_INDEX {
        Err(OscError::IndexOutOfRange(n))
    } else {
        Ok(())
    }
}

/// Projector of the n-th state, direct closed form.
///
/// Normal scheme: (1/ħⁿn!) (aā)ⁿ e^{−aā/ħ}. Moyal scheme:
/// 2(−1)ⁿ e^{−2aā/ħ} Lₙ(4aā/ħ), expanded exactly with the Laguerre
/// coefficients (the argument carries ħ⁻¹, so the prefactor is a Laurent
/// polynomial in ħ).
pub fn projector(n: u32, scheme: SchemeSpec) -> Result<GaussianPoly, OscError> {
    check_index(n)?;
    let fact = |k: u32| (1..=k).map(|v| v as f64).product::<f64>();
    match scheme {
        SchemeSpec::Normal => {
            let coeff = HbarPoly::term(C64::new(1.0 / fact(n), 0.0), -(n as i32));
            let prefactor = PhasePoly::monomial(Basis::Holomorphic, (n, n), coeff);
            Ok(GaussianPoly::new(prefactor, C64::new(-1.0, 0.0))?)
        }
        SchemeSpec::Moyal => {
            // 2(−1)ⁿ Σₘ (−1)ᵐ n!/((n−m)! m! m!) (4aā/ħ)ᵐ
            let mut prefactor = PhasePoly::zero(Basis::Holomorphic);
            let lead = 2.0 * if n % 2 == 0 { 1.0 } else { -1.0 };
            for m in 0..=n {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let binom = fact(n) / (fact(n - m) * fact(m) * fact(m));
                let c = lead * sign * binom * 4.0f64.powi(m as i32);
                prefactor.add_term((m, m), &HbarPoly::term(C64::new(c, 0.0), -(m as i32)));
            }
            Ok(GaussianPoly::new(prefactor, C64::new(-2.0, 0.0))?)
        }
        SchemeSpec::Standard => Err(OscError::Star(StarError::Unsupported(
            "projectors are defined for the normal and Moyal schemes".into(),
        ))),
    }
}

/// Numerically stable projector value at radial argument aā.
///
/// The expanded prefactor of [`projector`] is exact symbolically but its
/// alternating monomials cancel catastrophically at large aā and large n;
/// the three-term Laguerre recurrence does not.
pub fn projector_value(n: u32, scheme: SchemeSpec, aabar: f64, hbar: f64) -> Result<f64, OscError> {
    check_index(n)?;
    match scheme {
        SchemeSpec::Moyal => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(2.0 * sign * (-2.0 * aabar / hbar).exp() * orthopoly::laguerre(n, 4.0 * aabar / hbar))
        }
        SchemeSpec::Normal => {
            let x = aabar / hbar;
            let mut weight = (-x).exp();
            for k in 1..=n {
                weight *= x / k as f64;
            }
            Ok(weight)
        }
        SchemeSpec::Standard => Err(OscError::Star(StarError::Unsupported(
            "projectors are defined for the normal and Moyal schemes".into(),
        ))),
    }
}

/// Projector built by the ladder route, (1/ħⁿn!) āⁿ ⋆ π₀ ⋆ aⁿ.
/// Agrees with [`projector`] coefficient-exactly.
pub fn projector_ladder(n: u32, scheme: SchemeSpec) -> Result<GaussianPoly, OscError> {
    check_index(n)?;
    let pi0 = projector(0, scheme)?;
    let raise = PhasePoly::var(Var::ABar).try_pow(n)?;
    let lower = PhasePoly::var(Var::A).try_pow(n)?;
    let mid = star_poly_gaussian(&raise, &pi0, scheme)?;
    let full = star_gaussian_poly(&mid, &lower, scheme)?;
    let fact: f64 = (1..=n).map(|v| v as f64).product();
    Ok(full.scale_hbar(&HbarPoly::term(C64::new(1.0 / fact, 0.0), -(n as i32))))
}

/// H ⋆ π − E π. Zero (after binding ħ) exactly on spectral lines.
pub fn genvalue_residual(
    h: &PhasePoly,
    pi: &GaussianPoly,
    e: f64,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<GaussianPoly, OscError> {
    let h_holo = crate::phase::to_holomorphic(h, params)?;
    let lhs = star_poly_gaussian(&h_holo, pi, scheme)?;
    Ok(lhs.sub(&pi.scale(C64::new(e, 0.0)))?)
}

/// Largest residual coefficient with ħ bound numerically, normalized by the
/// projector's own coefficient scale.
///
/// The expanded Laguerre coefficients are non-dyadic rationals of size up to
/// ~10³ at n = 8, so each f64 product already carries ~‖π‖·ε of input noise;
/// only the scale-relative residual is meaningful in doubles.
pub fn genvalue_residual_norm(
    h: &PhasePoly,
    pi: &GaussianPoly,
    e: f64,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<f64, OscError> {
    let residual = genvalue_residual(h, pi, e, scheme, params)?.max_abs_coeff_at(params.hbar);
    let scale = pi.max_abs_coeff_at(params.hbar).max(1.0);
    Ok(residual / scale)
}

/// One spectral line: index, energy and its projector.
#[derive(Debug, Clone)]
pub struct SpectralLine {
    pub n: u32,
    pub energy: f64,
    pub projector: GaussianPoly,
    /// Genvalue residual of this line, with ħ bound numerically.
    pub residual: f64,
}

/// Lines 0..=n_max of the oscillator in the given scheme, each verified
/// against the *-genvalue equation.
pub fn spectrum(
    scheme: SchemeSpec,
    n_max: u32,
    params: &PhysParams,
) -> Result<Vec<SpectralLine>, OscError> {
    let h = hamiltonian_holomorphic(params);
    let mut lines = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let pi = projector(n, scheme)?;
        let e = energy(n, scheme, params);
        let residual = genvalue_residual_norm(&h, &pi, e, scheme, params)?;
        lines.push(SpectralLine { n, energy: e, projector: pi, residual });
    }
    Ok(lines)
}

/// (1/2πħ) ∬ G dq dp by exact Gaussian moments. Only the diagonal
/// prefactor monomials (aā)ᵏ survive the angular integration:
/// each contributes c_k k! (−ħ/μ)^{k+1} / ħ.
pub fn phase_space_integral(g: &GaussianPoly, hbar: f64) -> Result<C64, OscError> {
    let mu = g.mu();
    if mu.re >= -1e-300 {
        return Err(OscError::NonNormalizable(mu.re));
    }
    let mut acc = C64::new(0.0, 0.0);
    for (&(e0, e1), coeff) in g.prefactor().terms() {
        if e0 != e1 {
            continue;
        }
        let k = e0;
        let fact: f64 = (1..=k).map(|v| v as f64).product();
        let width = (-C64::new(hbar, 0.0) / mu).powu(k + 1);
        acc += coeff.eval(hbar) * fact * width;
    }
    Ok(acc / hbar)
}

/// (1/2πħ) ∬ (H ⋆ π) dq dp, the expectation of H in the state π.
pub fn expectation(
    h: &PhasePoly,
    pi: &GaussianPoly,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<C64, OscError> {
    let h_holo = crate::phase::to_holomorphic(h, params)?;
    let prod = star_poly_gaussian(&h_holo, pi, scheme)?;
    phase_space_integral(&prod, params.hbar)
}

/// Time-evolution function of the oscillator in closed form.
///
/// Normal scheme: exp((e^{−iωt} − 1) aā/ħ). Moyal scheme:
/// sec(ωt/2) exp(−2i tan(ωt/2) aā/ħ), singular exactly where cos(ωt/2) = 0.
#[derive(Debug, Clone, Copy)]
pub struct StarExponential {
    pub scheme: SchemeSpec,
    pub params: PhysParams,
}

impl StarExponential {
    pub fn new(scheme: SchemeSpec, params: PhysParams) -> Self {
        StarExponential { scheme, params }
    }

    /// Period of the Fourier-Dirichlet expansion: 4π/ω covers the Moyal
    /// half-integer frequencies (the normal scheme is 2π/ω-periodic and
    /// simply repeats).
    pub fn period(&self) -> f64 {
        4.0 * std::f64::consts::PI / self.params.omega
    }

    /// Exponent coefficient μ(t) of the Gaussian representation at time t.
    pub fn mu_at(&self, t: C64) -> Result<C64, OscError> {
        let wt = t * self.params.omega;
        match self.scheme {
            SchemeSpec::Moyal => {
                let half = wt * 0.5;
                if half.cos().norm() < 1e-12 {
                    return Err(OscError::Singular(wt.re));
                }
                Ok(C64::new(0.0, -2.0) * half.tan())
            }
            SchemeSpec::Normal => Ok((-C64::i() * wt).exp() - 1.0),
            SchemeSpec::Standard => Err(OscError::Star(StarError::Unsupported(
                "star exponential implemented for the normal and Moyal schemes".into(),
            ))),
        }
    }

    /// Value at energy argument H (i.e. at aā = H/ω) and complex time t.
    pub fn value_at_h(&self, h: f64, t: C64) -> Result<C64, OscError> {
        let aabar = h / self.params.omega;
        let mu = self.mu_at(t)?;
        let prefactor = match self.scheme {
            SchemeSpec::Moyal => {
                let half = t * self.params.omega * 0.5;
                C64::new(1.0, 0.0) / half.cos()
            }
            _ => C64::new(1.0, 0.0),
        };
        Ok(prefactor * (mu * aabar / self.params.hbar).exp())
    }

    /// Closed Gaussian representation at a real time.
    pub fn gaussian_at(&self, t: f64) -> Result<GaussianPoly, OscError> {
        let tc = C64::new(t, 0.0);
        let mu = self.mu_at(tc)?;
        let prefactor = match self.scheme {
            SchemeSpec::Moyal => C64::new(1.0, 0.0) / (tc * self.params.omega * 0.5).cos(),
            _ => C64::new(1.0, 0.0),
        };
        Ok(GaussianPoly::exponential(mu).scale(prefactor))
    }
}
