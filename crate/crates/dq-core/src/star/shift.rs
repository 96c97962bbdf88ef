//! Shift-operator form of the Moyal product.
//!
//! A canonical polynomial f acts on its partner through the substituted
//! arguments q + (iħ/2)∂p and p − (iħ/2)∂q. Those two operators do not
//! commute, so monomials are symmetrized over all orderings (built by the
//! same halving recursion the Weyl correspondence uses). The result is kept
//! in normal form Σ c_{jk}(q,p) ∂q^j ∂p^k, which both the symbolic path here
//! and the spectral grid path consume.

use std::collections::BTreeMap;

use super::StarError;
use crate::phase::{Basis, HbarPoly, PhasePoly, Var};
use crate::C64;

/// A differential operator Σ c_{jk}(q,p) ∂q^j ∂p^k with polynomial
/// coefficients.
#[derive(Debug, Clone)]
pub struct BoppOperator {
    terms: BTreeMap<(u32, u32), PhasePoly>,
}

impl BoppOperator {
    fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), PhasePoly::one(Basis::Canonical));
        BoppOperator { terms }
    }

    fn zero() -> Self {
        BoppOperator { terms: BTreeMap::new() }
    }

    fn add_term(&mut self, key: (u32, u32), coeff: &PhasePoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(|| PhasePoly::zero(Basis::Canonical));
        *slot = &*slot + coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero();
        for (k, coeff) in &self.terms {
            out.add_term(*k, &coeff.scale(c));
        }
        out
    }

    /// Iterate (derivative orders, coefficient polynomial).
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &PhasePoly)> {
        self.terms.iter()
    }

    /// Compose the shifted-q argument on the given side.
    fn mul_q(&self, left: bool) -> Result<Self, StarError> {
        let q = PhasePoly::var(Var::Q);
        let ih2 = HbarPoly::term(C64::new(0.0, 0.5), 1);
        let mut out = Self::zero();
        for (&(j, k), c) in &self.terms {
            // multiplication part: q·c either side
            out.add_term((j, k), &c.try_mul(&q)?);
            if left {
                // (iħ/2) ∂p ∘ (c ∂q^j ∂p^k)
                out.add_term((j, k), &c.differentiate(Var::P, 1)?.scale_hbar(&ih2));
                out.add_term((j, k + 1), &c.scale_hbar(&ih2));
            } else {
                // (c ∂q^j ∂p^k) ∘ (q·): the ∂q's hit the new factor
                if j > 0 {
                    out.add_term((j - 1, k), &c.scale(C64::new(j as f64, 0.0)));
                }
                // (c ∂q^j ∂p^k) ∘ (iħ/2)∂p
                out.add_term((j, k + 1), &c.scale_hbar(&ih2));
            }
        }
        Ok(out)
    }

    /// Compose the shifted-p argument on the given side.
    fn mul_p(&self, left: bool) -> Result<Self, StarError> {
        let p = PhasePoly::var(Var::P);
        let mih2 = HbarPoly::term(C64::new(0.0, -0.5), 1);
        let mut out = Self::zero();
        for (&(j, k), c) in &self.terms {
            out.add_term((j, k), &c.try_mul(&p)?);
            if left {
                out.add_term((j, k), &c.differentiate(Var::Q, 1)?.scale_hbar(&mih2));
                out.add_term((j + 1, k), &c.scale_hbar(&mih2));
            } else {
                if k > 0 {
                    out.add_term((j, k - 1), &c.scale(C64::new(k as f64, 0.0)));
                }
                out.add_term((j + 1, k), &c.scale_hbar(&mih2));
            }
        }
        Ok(out)
    }

    /// Symmetrized operator for the monomial q^m p^n.
    fn monomial(m: u32, n: u32) -> Result<Self, StarError> {
        // powers of a single shifted argument commute with themselves
        let mut op = Self::identity();
        for _ in 0..n {
            op = op.mul_p(true)?;
        }
        for _ in 0..m {
            op = op.mul_q(true)?.add(&op.mul_q(false)?).scale(C64::new(0.5, 0.0));
        }
        Ok(op)
    }

    /// Build the shift operator of a canonical-chart polynomial.
    pub fn from_poly(f: &PhasePoly) -> Result<Self, StarError> {
        if f.basis() != Basis::Canonical {
            return Err(StarError::Unsupported(
                "shift operator requires a canonical-basis polynomial".into(),
            ));
        }
        let mut out = Self::zero();
        for (&(m, n), h) in f.terms() {
            let op = Self::monomial(m, n)?;
            for (&key, c) in &op.terms {
                out.add_term(key, &c.scale_hbar(h));
            }
        }
        Ok(out)
    }

    /// Apply to a polynomial by symbolic differentiation.
    pub fn apply_poly(&self, g: &PhasePoly) -> Result<PhasePoly, StarError> {
        if g.basis() != Basis::Canonical {
            return Err(StarError::Unsupported(
                "shift operator acts on canonical-basis polynomials".into(),
            ));
        }
        let mut out = PhasePoly::zero(Basis::Canonical);
        for (&(j, k), c) in &self.terms {
            let dg = g.differentiate(Var::Q, j)?.differentiate(Var::P, k)?;
            if dg.is_zero() {
                continue;
            }
            out = &out + &c.try_mul(&dg)?;
        }
        Ok(out)
    }
}

/// Moyal product through the shift formula — a second evaluation path,
/// coefficient-identical to the series.
pub fn star_shift(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, StarError> {
    BoppOperator::from_poly(f)?.apply_poly(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{parse_expr, PhysParams};
    use crate::star::{star_poly, SchemeSpec};

    #[test]
    fn q_star_g_adds_derivative_term() {
        // q ⋆ g = qg + (iħ/2) ∂p g with g = p² → qp² + iħp
        let q = PhasePoly::var(Var::Q);
        let g = parse_expr("p^2", Basis::Canonical).unwrap();
        let r = star_shift(&q, &g).unwrap();
        let expect = parse_expr("q*p^2 + i*hbar*p", Basis::Canonical).unwrap();
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn p_star_q() {
        // p ⋆ q = pq − iħ/2
        let p = PhasePoly::var(Var::P);
        let q = PhasePoly::var(Var::Q);
        let r = star_shift(&p, &q).unwrap();
        let expect = parse_expr("q*p - 0.5*i*hbar", Basis::Canonical).unwrap();
        assert!(r.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn identity_element() {
        let f = parse_expr("q^3*p - 2*p^2 + hbar*q", Basis::Canonical).unwrap();
        let one = PhasePoly::one(Basis::Canonical);
        assert!(star_shift(&f, &one).unwrap().approx_eq(&f, 1e-15));
        assert!(star_shift(&one, &f).unwrap().approx_eq(&f, 1e-15));
    }

    #[test]
    fn shift_agrees_with_series_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let params = PhysParams::unit();
        for _ in 0..60 {
            let mut f = PhasePoly::zero(Basis::Canonical);
            let mut g = PhasePoly::zero(Basis::Canonical);
            for _ in 0..4 {
                let e = (rng.gen_range(0..4u32), rng.gen_range(0..4u32));
                let c = C64::new(rng.gen_range(-2..3) as f64, rng.gen_range(-2..3) as f64);
                f.add_term(e, &HbarPoly::constant(c));
                let e = (rng.gen_range(0..4u32), rng.gen_range(0..4u32));
                let c = C64::new(rng.gen_range(-2..3) as f64, 0.0);
                g.add_term(e, &HbarPoly::constant(c));
            }
            let series = star_poly(&f, &g, SchemeSpec::Moyal, &params).unwrap();
            let shift = star_shift(&f, &g).unwrap();
            assert!(
                series.approx_eq(&shift, 1e-12),
                "series/shift disagree:\n f={f}\n g={g}\n series={series}\n shift={shift}"
            );
        }
    }
}
