//! Star products on flat phase space.
//!
//! Three c-equivalent products are implemented: the Moyal product (series in
//! both charts), the standard product (canonical chart) and the normal
//! product (holomorphic chart). All series terminate exactly on polynomials.
//! Two independent evaluation paths exist for the Moyal product — the
//! bidifferential series and the shift-operator form — and are cross-checked
//! in the tests. Gaussian × Gaussian products are closed-form, see
//! [`gaussian_star`].

mod gaussian;
mod moments;
mod shift;
mod transition;

pub use gaussian::GaussianPoly;
pub use shift::{star_shift, BoppOperator};
pub use transition::{TransitionKind, TransitionOp};

use thiserror::Error;

use crate::phase::{
    to_canonical, to_holomorphic, Basis, HbarPoly, PhaseError, PhasePoly, PhysParams, Var,
    MAX_EXPONENT,
};
use crate::C64;

/// Which star product is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeSpec {
    Moyal,
    Standard,
    Normal,
}

impl SchemeSpec {
    pub fn name(self) -> &'static str {
        match self {
            SchemeSpec::Moyal => "moyal",
            SchemeSpec::Standard => "standard",
            SchemeSpec::Normal => "normal",
        }
    }
}

impl std::str::FromStr for SchemeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "moyal" => Ok(SchemeSpec::Moyal),
            "standard" => Ok(SchemeSpec::Standard),
            "normal" => Ok(SchemeSpec::Normal),
            other => Err(format!("unknown scheme `{other}` (expected moyal|standard|normal)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error("operand degrees {0} + {1} exceed the exponent cap {MAX_EXPONENT}")]
    DegreeOverflow(u32, u32),
    #[error("singular Gaussian star: exponent pair mu1={mu1}, mu2={mu2} makes the quadratic form degenerate")]
    SingularGaussian { mu1: C64, mu2: C64 },
    #[error("transition operator is singular on exponent mu={mu}")]
    SingularTransition { mu: C64 },
    #[error("{0}")]
    Unsupported(String),
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Moyal series in the canonical chart:
/// Σ (iħ/2)^{m+n} (−1)^m/(m! n!) (∂p^m ∂q^n f)(∂p^n ∂q^m g).
fn moyal_canonical(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, StarError> {
    series_product(f, g, Var::P, Var::Q, |m, n| {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mag = 0.5f64.powi((m + n) as i32) * sign / (factorial(m) * factorial(n));
        // (i/2)^{m+n}: i^{m+n} times magnitude
        let phase = C64::new(0.0, 1.0).powu(m + n);
        HbarPoly::term(phase * mag, (m + n) as i32)
    })
}

/// Moyal series in the holomorphic chart:
/// Σ (ħ/2)^{m+n} (−1)^n/(m! n!) (∂a^m ∂ā^n f)(∂ā^m ∂a^n g).
fn moyal_holomorphic(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, StarError> {
    series_product(f, g, Var::A, Var::ABar, |m, n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mag = 0.5f64.powi((m + n) as i32) * sign / (factorial(m) * factorial(n));
        HbarPoly::term(C64::new(mag, 0.0), (m + n) as i32)
    })
}

/// Standard product: Σ (iħ)^k/k! (∂q^k f)(∂p^k g).
fn standard_product(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, StarError> {
    diagonal_series(f, g, Var::Q, Var::P, |k| {
        HbarPoly::term(C64::new(0.0, 1.0).powu(k) / factorial(k), k as i32)
    })
}

/// Normal product: Σ ħ^k/k! (∂a^k f)(∂ā^k g).
fn normal_product(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, StarError> {
    diagonal_series(f, g, Var::A, Var::ABar, |k| {
        HbarPoly::term(C64::new(1.0 / factorial(k), 0.0), k as i32)
    })
}

/// Generic double series Σ_{m,n} coeff(m,n) (∂u^m ∂v^n f)(∂v^m ∂u^n g).
fn series_product(
    f: &PhasePoly,
    g: &PhasePoly,
    u: Var,
    v: Var,
    coeff: impl Fn(u32, u32) -> HbarPoly,
) -> Result<PhasePoly, StarError> {
    let m_max = f.degree_in(u).min(g.degree_in(v));
    let n_max = f.degree_in(v).min(g.degree_in(u));
    let mut out = PhasePoly::zero(f.basis());
    for m in 0..=m_max {
        let fm = f.differentiate(u, m)?;
        let gm = g.differentiate(v, m)?;
        for n in 0..=n_max {
            let fmn = fm.differentiate(v, n)?;
            if fmn.is_zero() {
                continue;
            }
            let gmn = gm.differentiate(u, n)?;
            if gmn.is_zero() {
                continue;
            }
            let prod = fmn.try_mul(&gmn)?;
            out = &out + &prod.scale_hbar(&coeff(m, n));
        }
    }
    Ok(out)
}

/// Single-index series Σ_k coeff(k) (∂u^k f)(∂v^k g).
fn diagonal_series(
    f: &PhasePoly,
    g: &PhasePoly,
    u: Var,
    v: Var,
    coeff: impl Fn(u32) -> HbarPoly,
) -> Result<PhasePoly, StarError> {
    let k_max = f.degree_in(u).min(g.degree_in(v));
    let mut out = PhasePoly::zero(f.basis());
    for k in 0..=k_max {
        let fk = f.differentiate(u, k)?;
        let gk = g.differentiate(v, k)?;
        if fk.is_zero() || gk.is_zero() {
            continue;
        }
        let prod = fk.try_mul(&gk)?;
        out = &out + &prod.scale_hbar(&coeff(k));
    }
    Ok(out)
}

/// Bring both operands into the chart the scheme works in. Moyal keeps a
/// shared chart (mixed inputs go holomorphic), standard forces canonical and
/// normal forces holomorphic.
fn resolve_basis(
    f: &PhasePoly,
    g: &PhasePoly,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<(PhasePoly, PhasePoly), StarError> {
    let pair = match scheme {
        SchemeSpec::Moyal => match (f.basis(), g.basis()) {
            (Basis::Canonical, Basis::Canonical) => (f.clone(), g.clone()),
            (Basis::Holomorphic, Basis::Holomorphic) => (f.clone(), g.clone()),
            _ => (to_holomorphic(f, params)?, to_holomorphic(g, params)?),
        },
        SchemeSpec::Standard => (to_canonical(f, params)?, to_canonical(g, params)?),
        SchemeSpec::Normal => (to_holomorphic(f, params)?, to_holomorphic(g, params)?),
    };
    Ok(pair)
}

/// Star product of two polynomials. The series terminates at the smaller of
/// the operand degrees, so the result is exact.
pub fn star_poly(
    f: &PhasePoly,
    g: &PhasePoly,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<PhasePoly, StarError> {
    let (f, g) = resolve_basis(f, g, scheme, params)?;
    if f.total_degree() + g.total_degree() > MAX_EXPONENT {
        return Err(StarError::DegreeOverflow(f.total_degree(), g.total_degree()));
    }
    match (scheme, f.basis()) {
        (SchemeSpec::Moyal, Basis::Canonical) => moyal_canonical(&f, &g),
        (SchemeSpec::Moyal, Basis::Holomorphic) => moyal_holomorphic(&f, &g),
        (SchemeSpec::Standard, _) => standard_product(&f, &g),
        (SchemeSpec::Normal, _) => normal_product(&f, &g),
    }
}

/// `f ⋆ g − g ⋆ f`.
pub fn star_commutator(
    f: &PhasePoly,
    g: &PhasePoly,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<PhasePoly, StarError> {
    let fg = star_poly(f, g, scheme, params)?;
    let gf = star_poly(g, f, scheme, params)?;
    Ok(&fg - &gf)
}

/// The ħ¹ coefficient of `[f,g]⋆ / i`, which the correspondence principle
/// ties to the Poisson bracket.
pub fn commutator_leading_bracket(
    f: &PhasePoly,
    g: &PhasePoly,
    scheme: SchemeSpec,
    params: &PhysParams,
) -> Result<PhasePoly, StarError> {
    let comm = star_commutator(f, g, scheme, params)?;
    Ok(comm.hbar_component(1).scale(C64::new(0.0, -1.0)))
}

/// Gaussian × Gaussian star product, see [`gaussian::gaussian_star`].
pub use gaussian::{gaussian_star, star_gaussian_poly, star_poly_gaussian};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::poisson_bracket;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ci(im: f64) -> C64 {
        C64::new(0.0, im)
    }

    fn q() -> PhasePoly {
        PhasePoly::var(Var::Q)
    }

    fn p() -> PhasePoly {
        PhasePoly::var(Var::P)
    }

    fn a() -> PhasePoly {
        PhasePoly::var(Var::A)
    }

    fn abar() -> PhasePoly {
        PhasePoly::var(Var::ABar)
    }

    fn unit() -> PhysParams {
        PhysParams::unit()
    }

    #[test]
    fn moyal_q_star_p() {
        // q ⋆ p = qp + iħ/2
        let r = star_poly(&q(), &p(), SchemeSpec::Moyal, &unit()).unwrap();
        let mut expect = PhasePoly::monomial(Basis::Canonical, (1, 1), HbarPoly::one());
        expect.add_term((0, 0), &HbarPoly::term(ci(0.5), 1));
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn normal_a_star_abar_and_reverse() {
        // a ⋆ₙ ā = aā + ħ, ā ⋆ₙ a = aā
        let r = star_poly(&a(), &abar(), SchemeSpec::Normal, &unit()).unwrap();
        let mut expect = PhasePoly::monomial(Basis::Holomorphic, (1, 1), HbarPoly::one());
        expect.add_term((0, 0), &HbarPoly::term(c(1.0), 1));
        assert!(r.approx_eq(&expect, 1e-15));

        let r = star_poly(&abar(), &a(), SchemeSpec::Normal, &unit()).unwrap();
        let expect = PhasePoly::monomial(Basis::Holomorphic, (1, 1), HbarPoly::one());
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn moyal_a_star_abar() {
        // a ⋆ₘ ā = aā + ħ/2
        let r = star_poly(&a(), &abar(), SchemeSpec::Moyal, &unit()).unwrap();
        let mut expect = PhasePoly::monomial(Basis::Holomorphic, (1, 1), HbarPoly::one());
        expect.add_term((0, 0), &HbarPoly::term(c(0.5), 1));
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn commutator_q_p_is_i_hbar() {
        let r = star_commutator(&q(), &p(), SchemeSpec::Moyal, &unit()).unwrap();
        let expect = PhasePoly::constant_hbar(Basis::Canonical, HbarPoly::term(ci(1.0), 1));
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn commutator_a_abar_scheme_independent() {
        // [a, ā]⋆ = ħ under every implemented scheme (standard works through
        // the canonical chart).
        for scheme in [SchemeSpec::Moyal, SchemeSpec::Normal, SchemeSpec::Standard] {
            let r = star_commutator(&a(), &abar(), scheme, &unit()).unwrap();
            let expect = PhasePoly::constant_hbar(r.basis(), HbarPoly::term(c(1.0), 1));
            assert!(r.approx_eq(&expect, 1e-14), "scheme {scheme:?}: got {r}");
        }
    }

    #[test]
    fn commutator_of_identical_operands_vanishes() {
        let f = crate::phase::parse_expr("q^2*p + 3*p^2 - q", Basis::Canonical).unwrap();
        let r = star_commutator(&f, &f, SchemeSpec::Moyal, &unit()).unwrap();
        assert!(r.is_zero() || r.max_abs_coeff() < 1e-15);
    }

    #[test]
    fn classical_limit_is_pointwise_product() {
        let f = crate::phase::parse_expr("q^2*p - 2*q", Basis::Canonical).unwrap();
        let g = crate::phase::parse_expr("p^3 + q*p", Basis::Canonical).unwrap();
        for scheme in [SchemeSpec::Moyal, SchemeSpec::Standard] {
            let r = star_poly(&f, &g, scheme, &unit()).unwrap();
            assert!(r.hbar_component(0).approx_eq(&(&f * &g), 1e-13));
        }
    }

    #[test]
    fn moyal_mixed_basis_inputs_go_holomorphic() {
        let r = star_poly(&q(), &a(), SchemeSpec::Moyal, &unit()).unwrap();
        assert_eq!(r.basis(), Basis::Holomorphic);
        // value check: q = (a+ā)/√2 at mω = 1, so q ⋆ a = (a+ā)/√2 ⋆ a
        let qh = to_holomorphic(&q(), &unit()).unwrap();
        let direct = star_poly(&qh, &a(), SchemeSpec::Moyal, &unit()).unwrap();
        assert!(r.approx_eq(&direct, 1e-14));
    }

    #[test]
    fn moyal_series_in_both_charts_agree() {
        let params = PhysParams::new(1.0, 1.4, 0.8).unwrap();
        let f = crate::phase::parse_expr("q^2 + q*p", Basis::Canonical).unwrap();
        let g = crate::phase::parse_expr("p^2 - q", Basis::Canonical).unwrap();
        let canonical = star_poly(&f, &g, SchemeSpec::Moyal, &params).unwrap();
        let fh = to_holomorphic(&f, &params).unwrap();
        let gh = to_holomorphic(&g, &params).unwrap();
        let holo = star_poly(&fh, &gh, SchemeSpec::Moyal, &params).unwrap();
        let back = to_canonical(&holo, &params).unwrap();
        assert!(back.approx_eq(&canonical, 1e-12));
    }

    #[test]
    fn hermitean_property() {
        // conj(f ⋆ g) = conj(g) ⋆ conj(f) for Moyal and normal
        let f = crate::phase::parse_expr("(1 + 2*i)*a^2*abar - i*a", Basis::Holomorphic).unwrap();
        let g = crate::phase::parse_expr("abar^2 + (3 - i)*a", Basis::Holomorphic).unwrap();
        for scheme in [SchemeSpec::Moyal, SchemeSpec::Normal] {
            let lhs = star_poly(&f, &g, scheme, &unit()).unwrap().hermitean_conj();
            let rhs =
                star_poly(&g.hermitean_conj(), &f.hermitean_conj(), scheme, &unit()).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-13), "scheme {scheme:?}");
        }
    }

    #[test]
    fn moyal_commutator_has_no_even_hbar_terms() {
        let f = crate::phase::parse_expr("q^3*p + p^2", Basis::Canonical).unwrap();
        let g = crate::phase::parse_expr("q*p^3 - q^2", Basis::Canonical).unwrap();
        let comm = star_commutator(&f, &g, SchemeSpec::Moyal, &unit()).unwrap();
        for k in [0, 2, 4, 6] {
            assert!(comm.hbar_component(k).max_abs_coeff() < 1e-13, "hbar^{k} term survives");
        }
    }

    #[test]
    fn leading_commutator_term_is_poisson_bracket() {
        let f = crate::phase::parse_expr("q^2*p^2 - q^3", Basis::Canonical).unwrap();
        let g = crate::phase::parse_expr("q*p + p^3", Basis::Canonical).unwrap();
        let pb = poisson_bracket(&f, &g).unwrap();
        for scheme in [SchemeSpec::Moyal, SchemeSpec::Standard] {
            let lead = commutator_leading_bracket(&f, &g, scheme, &unit()).unwrap();
            assert!(lead.approx_eq(&pb, 1e-13), "scheme {scheme:?}");
        }
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let f = PhasePoly::monomial(Basis::Canonical, (40, 0), HbarPoly::one());
        assert!(matches!(
            star_poly(&f, &f, SchemeSpec::Moyal, &unit()),
            Err(StarError::DegreeOverflow(40, 40))
        ));
    }
}
