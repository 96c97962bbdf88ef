//! The closed Gaussian star calculus.
//!
//! A [`GaussianPoly`] is a holomorphic-chart polynomial prefactor times
//! exp(μ aā/ħ). The class is closed under derivatives, under star products
//! with polynomials (terminating series) and under the Moyal product of two
//! Gaussians (exact Gaussian integration, done in [`super::moments`]).

use super::moments::moyal_gaussian_pair;
use super::transition::{TransitionKind, TransitionOp};
use super::{factorial, SchemeSpec, StarError};
use crate::phase::{Basis, HbarPoly, PhasePoly, Var};
use crate::C64;

/// Prefactor × exp(μ aā/ħ) in the holomorphic chart. μ = 0 degenerates to a
/// plain polynomial; normalizable states have Re μ < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPoly {
    prefactor: PhasePoly,
    mu: C64,
}

impl GaussianPoly {
    pub fn new(prefactor: PhasePoly, mu: C64) -> Result<Self, StarError> {
        if prefactor.basis() != Basis::Holomorphic {
            return Err(StarError::Unsupported(
                "Gaussian prefactors live in the holomorphic basis".into(),
            ));
        }
        Ok(GaussianPoly { prefactor, mu })
    }

    /// exp(μ aā/ħ) with unit prefactor.
    pub fn exponential(mu: C64) -> Self {
        GaussianPoly { prefactor: PhasePoly::one(Basis::Holomorphic), mu }
    }

    pub fn from_poly(prefactor: PhasePoly) -> Result<Self, StarError> {
        Self::new(prefactor, C64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::exponential(C64::new(0.0, 0.0))
    }

    pub fn prefactor(&self) -> &PhasePoly {
        &self.prefactor
    }

    pub fn mu(&self) -> C64 {
        self.mu
    }

    pub fn is_polynomial(&self) -> bool {
        self.mu == C64::new(0.0, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    pub fn scale(&self, c: C64) -> Self {
        GaussianPoly { prefactor: self.prefactor.scale(c), mu: self.mu }
    }

    pub fn scale_hbar(&self, h: &HbarPoly) -> Self {
        GaussianPoly { prefactor: self.prefactor.scale_hbar(h), mu: self.mu }
    }

    /// Multiply the prefactor by a polynomial (pointwise product).
    pub fn mul_poly(&self, p: &PhasePoly) -> Result<Self, StarError> {
        Ok(GaussianPoly { prefactor: self.prefactor.try_mul(p)?, mu: self.mu })
    }

    /// Add two members of the same exponential family.
    pub fn try_add(&self, other: &Self) -> Result<Self, StarError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.mu != other.mu {
            return Err(StarError::Unsupported(format!(
                "cannot add Gaussians with different exponents mu={} and mu={}",
                self.mu, other.mu
            )));
        }
        Ok(GaussianPoly { prefactor: &self.prefactor + &other.prefactor, mu: self.mu })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, StarError> {
        self.try_add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Exact partial derivative; the exponential contributes μā/ħ or μa/ħ.
    pub fn differentiate(&self, v: Var) -> Result<Self, StarError> {
        let dp = self.prefactor.differentiate(v, 1)?;
        let companion = match v {
            Var::A => PhasePoly::var(Var::ABar),
            Var::ABar => PhasePoly::var(Var::A),
            _ => {
                return Err(StarError::Unsupported(
                    "Gaussian derivatives act in the holomorphic basis".into(),
                ))
            }
        };
        let from_exp = self
            .prefactor
            .try_mul(&companion)?
            .scale_hbar(&HbarPoly::term(self.mu, -1));
        Ok(GaussianPoly { prefactor: &dp + &from_exp, mu: self.mu })
    }

    /// Numeric evaluation on the real slice ā = conj(a).
    pub fn evaluate(&self, a: C64, hbar: f64) -> C64 {
        self.evaluate_at(a, a.conj(), hbar)
    }

    pub fn evaluate_at(&self, a: C64, abar: C64, hbar: f64) -> C64 {
        let pre = self.prefactor.evaluate((a, abar), hbar);
        pre * (self.mu * a * abar / hbar).exp()
    }

    pub fn hermitean_conj(&self) -> Self {
        GaussianPoly { prefactor: self.prefactor.hermitean_conj(), mu: self.mu.conj() }
    }

    /// Largest prefactor coefficient magnitude with ħ bound to a number.
    pub fn max_abs_coeff_at(&self, hbar: f64) -> f64 {
        self.prefactor
            .terms()
            .map(|(_, h)| h.eval(hbar).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        (self.mu - other.mu).norm() <= tol && self.prefactor.approx_eq(&other.prefactor, tol)
    }
}

/// Polynomial ⋆ Gaussian. The series terminates on the polynomial side, so
/// the result is exact and stays in the Gaussian class.
pub fn star_poly_gaussian(
    f: &PhasePoly,
    g: &GaussianPoly,
    scheme: SchemeSpec,
) -> Result<GaussianPoly, StarError> {
    if f.basis() != Basis::Holomorphic {
        return Err(StarError::Unsupported(
            "polynomial ⋆ Gaussian requires a holomorphic-basis polynomial".into(),
        ));
    }
    match scheme {
        SchemeSpec::Moyal => {
            // Σ (ħ/2)^{m+n} (−1)^n/(m!n!) (∂a^m ∂ā^n f) (∂ā^m ∂a^n g)
            let mut acc = GaussianPoly { prefactor: PhasePoly::zero(Basis::Holomorphic), mu: g.mu };
            let m_max = f.degree_in(Var::A);
            let n_max = f.degree_in(Var::ABar);
            let mut g_abar = g.clone(); // ∂ā^m g
            for m in 0..=m_max {
                let fm = f.differentiate(Var::A, m)?;
                let mut g_mn = g_abar.clone(); // ∂ā^m ∂a^n g
                for n in 0..=n_max {
                    let fmn = fm.differentiate(Var::ABar, n)?;
                    if !fmn.is_zero() {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        let mag = 0.5f64.powi((m + n) as i32) * sign / (factorial(m) * factorial(n));
                        let coeff = HbarPoly::term(C64::new(mag, 0.0), (m + n) as i32);
                        let term = g_mn.mul_poly(&fmn)?.scale_hbar(&coeff);
                        acc = acc.try_add(&term)?;
                    }
                    if n < n_max {
                        g_mn = g_mn.differentiate(Var::A)?;
                    }
                }
                if m < m_max {
                    g_abar = g_abar.differentiate(Var::ABar)?;
                }
            }
            Ok(acc)
        }
        SchemeSpec::Normal => {
            // Σ ħ^k/k! (∂a^k f)(∂ā^k g)
            let mut acc = GaussianPoly { prefactor: PhasePoly::zero(Basis::Holomorphic), mu: g.mu };
            let k_max = f.degree_in(Var::A);
            let mut gk = g.clone();
            for k in 0..=k_max {
                let fk = f.differentiate(Var::A, k)?;
                if !fk.is_zero() {
                    let coeff = HbarPoly::term(C64::new(1.0 / factorial(k), 0.0), k as i32);
                    acc = acc.try_add(&gk.mul_poly(&fk)?.scale_hbar(&coeff))?;
                }
                if k < k_max {
                    gk = gk.differentiate(Var::ABar)?;
                }
            }
            Ok(acc)
        }
        SchemeSpec::Standard => Err(StarError::Unsupported(
            "the standard product is not defined on the Gaussian class".into(),
        )),
    }
}

/// Gaussian ⋆ polynomial (mirror of [`star_poly_gaussian`]).
pub fn star_gaussian_poly(
    f: &GaussianPoly,
    g: &PhasePoly,
    scheme: SchemeSpec,
) -> Result<GaussianPoly, StarError> {
    if g.basis() != Basis::Holomorphic {
        return Err(StarError::Unsupported(
            "Gaussian ⋆ polynomial requires a holomorphic-basis polynomial".into(),
        ));
    }
    match scheme {
        SchemeSpec::Moyal => {
            let mut acc = GaussianPoly { prefactor: PhasePoly::zero(Basis::Holomorphic), mu: f.mu };
            let m_max = g.degree_in(Var::ABar);
            let n_max = g.degree_in(Var::A);
            let mut f_a = f.clone(); // ∂a^m f
            for m in 0..=m_max {
                let gm = g.differentiate(Var::ABar, m)?;
                let mut f_mn = f_a.clone(); // ∂a^m ∂ā^n f
                for n in 0..=n_max {
                    let gmn = gm.differentiate(Var::A, n)?;
                    if !gmn.is_zero() {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        let mag = 0.5f64.powi((m + n) as i32) * sign / (factorial(m) * factorial(n));
                        let coeff = HbarPoly::term(C64::new(mag, 0.0), (m + n) as i32);
                        acc = acc.try_add(&f_mn.mul_poly(&gmn)?.scale_hbar(&coeff))?;
                    }
                    if n < n_max {
                        f_mn = f_mn.differentiate(Var::ABar)?;
                    }
                }
                if m < m_max {
                    f_a = f_a.differentiate(Var::A)?;
                }
            }
            Ok(acc)
        }
        SchemeSpec::Normal => {
            let mut acc = GaussianPoly { prefactor: PhasePoly::zero(Basis::Holomorphic), mu: f.mu };
            let k_max = g.degree_in(Var::ABar);
            let mut fk = f.clone();
            for k in 0..=k_max {
                let gk = g.differentiate(Var::ABar, k)?;
                if !gk.is_zero() {
                    let coeff = HbarPoly::term(C64::new(1.0 / factorial(k), 0.0), k as i32);
                    acc = acc.try_add(&fk.mul_poly(&gk)?.scale_hbar(&coeff))?;
                }
                if k < k_max {
                    fk = fk.differentiate(Var::A)?;
                }
            }
            Ok(acc)
        }
        SchemeSpec::Standard => Err(StarError::Unsupported(
            "the standard product is not defined on the Gaussian class".into(),
        )),
    }
}

/// Star product of two Gaussians.
///
/// The Moyal case integrates the four-dimensional Gaussian exactly
/// (completed square plus Wick-style moments of the prefactors). The normal
/// case is routed through the c-equivalence with the Moyal product; it covers
/// the ground-state exponential family the oscillator needs. Degenerate
/// quadratic forms (for Moyal: μ₁μ₂ = −4) are reported, never regularized.
pub fn gaussian_star(
    f: &GaussianPoly,
    g: &GaussianPoly,
    scheme: SchemeSpec,
) -> Result<GaussianPoly, StarError> {
    // a polynomial operand always reduces to the terminating series
    if f.is_polynomial() {
        return star_poly_gaussian(&f.prefactor, g, scheme);
    }
    if g.is_polynomial() {
        return star_gaussian_poly(f, &g.prefactor, scheme);
    }
    match scheme {
        SchemeSpec::Moyal => moyal_gaussian_pair(f, g),
        SchemeSpec::Normal => {
            let t = TransitionOp::new(TransitionKind::NormalToMoyal);
            let tf = t.apply_gaussian(f)?;
            let tg = t.apply_gaussian(g)?;
            let product = moyal_gaussian_pair(&tf, &tg)?;
            t.inverse().apply_gaussian(&product)
        }
        SchemeSpec::Standard => Err(StarError::Unsupported(
            "the standard product is not defined on the Gaussian class".into(),
        )),
    }
}
