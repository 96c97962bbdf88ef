//! Transition operators realizing c-equivalences between the implemented
//! star products. Both are exponentials of a second-order cross derivative;
//! on polynomials the series terminates, on Gaussians the action is closed
//! form.

use super::gaussian::GaussianPoly;
use super::{factorial, StarError};
use crate::phase::{Basis, HbarPoly, PhasePoly, Var};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    /// T = exp(−(iħ/2) ∂q ∂p): intertwines the standard and Moyal products.
    StandardToMoyal,
    /// T = exp(−(ħ/2) ∂a ∂ā): intertwines the normal and Moyal products.
    NormalToMoyal,
}

/// An invertible transition operator; the identity at order ħ⁰.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionOp {
    kind: TransitionKind,
    inverse: bool,
}

impl TransitionOp {
    pub fn new(kind: TransitionKind) -> Self {
        TransitionOp { kind, inverse: false }
    }

    pub fn inverse(self) -> Self {
        TransitionOp { kind: self.kind, inverse: !self.inverse }
    }

    pub fn kind(self) -> TransitionKind {
        self.kind
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// The scalar c in T = exp(c ħ ∂u ∂v).
    fn coefficient(self) -> C64 {
        let c = match self.kind {
            TransitionKind::StandardToMoyal => C64::new(0.0, -0.5),
            TransitionKind::NormalToMoyal => C64::new(-0.5, 0.0),
        };
        if self.inverse {
            -c
        } else {
            c
        }
    }

    fn vars(self) -> (Var, Var, Basis) {
        match self.kind {
            TransitionKind::StandardToMoyal => (Var::Q, Var::P, Basis::Canonical),
            TransitionKind::NormalToMoyal => (Var::A, Var::ABar, Basis::Holomorphic),
        }
    }

    /// Apply to a polynomial: Σ_k (cħ)^k/k! ∂u^k ∂v^k f. Terminates exactly.
    pub fn apply_poly(&self, f: &PhasePoly) -> Result<PhasePoly, StarError> {
        let (u, v, basis) = self.vars();
        if f.basis() != basis {
            return Err(StarError::Unsupported(format!(
                "transition operator {:?} acts on the {basis:?} basis",
                self.kind
            )));
        }
        let c = self.coefficient();
        let k_max = f.degree_in(u).min(f.degree_in(v));
        let mut out = PhasePoly::zero(basis);
        for k in 0..=k_max {
            let d = f.differentiate(u, k)?.differentiate(v, k)?;
            if d.is_zero() {
                continue;
            }
            let coeff = HbarPoly::term(c.powu(k) / factorial(k), k as i32);
            out = &out + &d.scale_hbar(&coeff);
        }
        Ok(out)
    }

    /// Apply to a Gaussian. Only the normal ↔ Moyal operator has a closed
    /// action on the class.
    ///
    /// exp(cħ ∂a∂ā) maps exp(μaā/ħ) to (1−cμ)⁻¹ exp(μ/(1−cμ) aā/ħ);
    /// prefactor monomials ride along through the conjugated multiplication
    /// operators a + cħ∂ā and ā + cħ∂a, which commute with each other.
    pub fn apply_gaussian(&self, g: &GaussianPoly) -> Result<GaussianPoly, StarError> {
        if self.kind != TransitionKind::NormalToMoyal {
            return Err(StarError::Unsupported(
                "only the normal ↔ Moyal transition acts on the Gaussian class".into(),
            ));
        }
        let c = self.coefficient();
        let mu = g.mu();
        let denom = C64::new(1.0, 0.0) - c * mu;
        if denom.norm() < 1e-12 * (1.0 + mu.norm()) {
            return Err(StarError::SingularTransition { mu });
        }
        let mu_out = mu / denom;
        let base_scale = C64::new(1.0, 0.0) / denom;

        // conjugated ladder factors acting on prefactors of exp(μ_out aā/ħ)
        let stretch = C64::new(1.0, 0.0) + c * mu_out;
        let a = PhasePoly::var(Var::A);
        let abar = PhasePoly::var(Var::ABar);
        let ch = HbarPoly::term(c, 1);
        let apply_a = |p: &PhasePoly| -> Result<PhasePoly, StarError> {
            Ok(&p.try_mul(&a)?.scale(stretch) + &p.differentiate(Var::ABar, 1)?.scale_hbar(&ch))
        };
        let apply_abar = |p: &PhasePoly| -> Result<PhasePoly, StarError> {
            Ok(&p.try_mul(&abar)?.scale(stretch) + &p.differentiate(Var::A, 1)?.scale_hbar(&ch))
        };

        let mut prefactor = PhasePoly::zero(Basis::Holomorphic);
        for (&(m, n), coeff) in g.prefactor().terms() {
            let mut acc = PhasePoly::constant(Basis::Holomorphic, base_scale);
            for _ in 0..n {
                acc = apply_abar(&acc)?;
            }
            for _ in 0..m {
                acc = apply_a(&acc)?;
            }
            prefactor = &prefactor + &acc.scale_hbar(coeff);
        }
        GaussianPoly::new(prefactor, mu_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{parse_expr, PhysParams};
    use crate::star::{star_poly, SchemeSpec};

    fn c64(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn standard_transition_on_qp() {
        // T(qp) = qp − iħ/2
        let t = TransitionOp::new(TransitionKind::StandardToMoyal);
        let qp = parse_expr("q*p", Basis::Canonical).unwrap();
        let r = t.apply_poly(&qp).unwrap();
        let expect = parse_expr("q*p - 0.5*i*hbar", Basis::Canonical).unwrap();
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn transition_inverse_round_trips() {
        let t = TransitionOp::new(TransitionKind::StandardToMoyal);
        let f = parse_expr("q^3*p^2 - 2*q*p + hbar*p", Basis::Canonical).unwrap();
        let back = t.inverse().apply_poly(&t.apply_poly(&f).unwrap()).unwrap();
        assert!(back.approx_eq(&f, 1e-13));
    }

    #[test]
    fn intertwines_standard_and_moyal() {
        // T(f ⋆ₛ g) = Tf ⋆ₘ Tg
        let params = PhysParams::unit();
        let t = TransitionOp::new(TransitionKind::StandardToMoyal);
        let f = parse_expr("q^2*p + p^3", Basis::Canonical).unwrap();
        let g = parse_expr("q*p^2 - q^2", Basis::Canonical).unwrap();
        let lhs = t.apply_poly(&star_poly(&f, &g, SchemeSpec::Standard, &params).unwrap()).unwrap();
        let rhs = star_poly(
            &t.apply_poly(&f).unwrap(),
            &t.apply_poly(&g).unwrap(),
            SchemeSpec::Moyal,
            &params,
        )
        .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn intertwines_normal_and_moyal() {
        let params = PhysParams::unit();
        let t = TransitionOp::new(TransitionKind::NormalToMoyal);
        let f = parse_expr("a^2*abar - a", Basis::Holomorphic).unwrap();
        let g = parse_expr("abar^2 + a*abar", Basis::Holomorphic).unwrap();
        let lhs = t.apply_poly(&star_poly(&f, &g, SchemeSpec::Normal, &params).unwrap()).unwrap();
        let rhs = star_poly(
            &t.apply_poly(&f).unwrap(),
            &t.apply_poly(&g).unwrap(),
            SchemeSpec::Moyal,
            &params,
        )
        .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn normal_vacuum_maps_to_moyal_vacuum() {
        // T e^{−aā/ħ} = 2 e^{−2aā/ħ}
        let t = TransitionOp::new(TransitionKind::NormalToMoyal);
        let pi0n = GaussianPoly::exponential(c64(-1.0, 0.0));
        let r = t.apply_gaussian(&pi0n).unwrap();
        assert!((r.mu() - c64(-2.0, 0.0)).norm() < 1e-15);
        assert!((r.prefactor().coeff((0, 0)).coeff(0) - c64(2.0, 0.0)).norm() < 1e-15);
        // and back
        let back = t.inverse().apply_gaussian(&r).unwrap();
        assert!(back.approx_eq(&pi0n, 1e-14));
    }

    #[test]
    fn singular_gaussian_transition_is_reported() {
        // the inverse operator blows up on μ = 2
        let t = TransitionOp::new(TransitionKind::NormalToMoyal).inverse();
        let g = GaussianPoly::exponential(c64(2.0, 0.0));
        assert!(matches!(t.apply_gaussian(&g), Err(StarError::SingularTransition { .. })));
    }

    #[test]
    fn gaussian_action_extends_the_polynomial_action() {
        // a Gaussian with μ = 0 is a polynomial: both paths must agree
        let t = TransitionOp::new(TransitionKind::NormalToMoyal);
        let p = parse_expr("a^2*abar^2 - 3*a*abar + 1", Basis::Holomorphic).unwrap();
        let via_poly = t.apply_poly(&p).unwrap();
        let via_gaussian = t.apply_gaussian(&GaussianPoly::from_poly(p).unwrap()).unwrap();
        assert!(via_gaussian.prefactor().approx_eq(&via_poly, 1e-14));
        assert_eq!(via_gaussian.mu(), C64::new(0.0, 0.0));
    }
}
