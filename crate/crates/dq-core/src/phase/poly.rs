use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{HbarPoly, PhaseError, PhysParams, MAX_EXPONENT};
use crate::C64;

/// Which chart of phase space a polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Variables (q, p).
    Canonical,
    /// Variables (a, ā).
    Holomorphic,
}

/// A phase-space variable. `Q`/`P` belong to the canonical chart, `A`/`ABar`
/// to the holomorphic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Q,
    P,
    A,
    ABar,
}

impl Var {
    pub fn basis(self) -> Basis {
        match self {
            Var::Q | Var::P => Basis::Canonical,
            Var::A | Var::ABar => Basis::Holomorphic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::P => "p",
            Var::A => "a",
            Var::ABar => "abar",
        }
    }

    /// Slot of the variable in the exponent pair: 0 for q/a, 1 for p/ā.
    fn slot(self) -> usize {
        match self {
            Var::Q | Var::A => 0,
            Var::P | Var::ABar => 1,
        }
    }
}

/// Sparse polynomial in the two variables of a phase-space chart, with
/// [`HbarPoly`] coefficients. Terms are keyed by the exponent pair
/// (q, p) or (a, ā).
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoly {
    basis: Basis,
    terms: BTreeMap<(u32, u32), HbarPoly>,
}

impl PhasePoly {
    pub fn zero(basis: Basis) -> Self {
        PhasePoly { basis, terms: BTreeMap::new() }
    }

    pub fn one(basis: Basis) -> Self {
        Self::constant(basis, C64::new(1.0, 0.0))
    }

    pub fn constant(basis: Basis, c: C64) -> Self {
        Self::monomial(basis, (0, 0), HbarPoly::constant(c))
    }

    pub fn constant_hbar(basis: Basis, h: HbarPoly) -> Self {
        Self::monomial(basis, (0, 0), h)
    }

    /// The bare variable as a polynomial.
    pub fn var(v: Var) -> Self {
        let exps = if v.slot() == 0 { (1, 0) } else { (0, 1) };
        Self::monomial(v.basis(), exps, HbarPoly::one())
    }

    pub fn monomial(basis: Basis, exps: (u32, u32), coeff: HbarPoly) -> Self {
        assert!(
            exps.0 <= MAX_EXPONENT && exps.1 <= MAX_EXPONENT,
            "monomial exponent exceeds {MAX_EXPONENT}"
        );
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        PhasePoly { basis, terms }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &HbarPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: (u32, u32)) -> HbarPoly {
        self.terms.get(&exps).cloned().unwrap_or_else(HbarPoly::zero)
    }

    /// Total degree (max over terms of e₀ + e₁); zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    /// Largest exponent of one variable across all terms.
    pub fn degree_in(&self, v: Var) -> u32 {
        let slot = v.slot();
        self.terms
            .keys()
            .map(|&(a, b)| if slot == 0 { a } else { b })
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: (u32, u32), coeff: &HbarPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_default();
        *slot = &*slot + coeff;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero(self.basis);
        for (&e, h) in &self.terms {
            out.add_term(e, &h.scale(c));
        }
        out
    }

    pub fn scale_hbar(&self, h: &HbarPoly) -> Self {
        let mut out = Self::zero(self.basis);
        for (&e, c) in &self.terms {
            out.add_term(e, &(c * h));
        }
        out
    }

    /// Checked product; fails when an exponent would exceed [`MAX_EXPONENT`].
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, PhaseError> {
        if self.basis != rhs.basis {
            return Err(PhaseError::BasisMismatch(self.basis, rhs.basis));
        }
        let mut out = Self::zero(self.basis);
        for (&(a0, a1), ca) in &self.terms {
            for (&(b0, b1), cb) in &rhs.terms {
                let e0 = a0 as u64 + b0 as u64;
                let e1 = a1 as u64 + b1 as u64;
                if e0 > MAX_EXPONENT as u64 || e1 > MAX_EXPONENT as u64 {
                    return Err(PhaseError::ExponentOverflow(e0.max(e1)));
                }
                out.add_term((e0 as u32, e1 as u32), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Checked power by repeated multiplication.
    pub fn try_pow(&self, n: u32) -> Result<Self, PhaseError> {
        let mut out = Self::one(self.basis);
        for _ in 0..n {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// Exact partial derivative of the given order.
    pub fn differentiate(&self, v: Var, order: u32) -> Result<Self, PhaseError> {
        if v.basis() != self.basis {
            return Err(PhaseError::VarBasis { var: v.name(), basis: self.basis });
        }
        let slot = v.slot();
        let mut cur = self.clone();
        for _ in 0..order {
            let mut next = Self::zero(self.basis);
            for (&(e0, e1), h) in &cur.terms {
                let e = if slot == 0 { e0 } else { e1 };
                if e == 0 {
                    continue;
                }
                let factor = C64::new(e as f64, 0.0);
                let exps = if slot == 0 { (e0 - 1, e1) } else { (e0, e1 - 1) };
                next.add_term(exps, &h.scale(factor));
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Numeric substitution of both variables and ħ.
    pub fn evaluate(&self, point: (C64, C64), hbar: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&(e0, e1), h) in &self.terms {
            acc += h.eval(hbar) * point.0.powu(e0) * point.1.powu(e1);
        }
        acc
    }

    /// Substitute polynomials for the two variables. The output basis is that
    /// of the substituted polynomials.
    pub fn substitute(&self, x0: &PhasePoly, x1: &PhasePoly) -> Result<PhasePoly, PhaseError> {
        if x0.basis != x1.basis {
            return Err(PhaseError::BasisMismatch(x0.basis, x1.basis));
        }
        let mut out = PhasePoly::zero(x0.basis);
        // cache powers of the substituted variables
        let mut pow0: Vec<PhasePoly> = vec![PhasePoly::one(x0.basis)];
        let mut pow1: Vec<PhasePoly> = vec![PhasePoly::one(x0.basis)];
        for (&(e0, e1), h) in &self.terms {
            while pow0.len() <= e0 as usize {
                let next = pow0.last().unwrap().try_mul(x0)?;
                pow0.push(next);
            }
            while pow1.len() <= e1 as usize {
                let next = pow1.last().unwrap().try_mul(x1)?;
                pow1.push(next);
            }
            let prod = pow0[e0 as usize].try_mul(&pow1[e1 as usize])?;
            for (&e, c) in &prod.terms {
                out.add_term(e, &(c * h));
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude across all terms and ħ-powers.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|h| h.max_abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference, treating missing terms as zero.
    /// Errs with `f64::INFINITY` on a basis mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.basis != other.basis {
            return f64::INFINITY;
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|e| self.coeff(*e).max_abs_diff(&other.coeff(*e)))
            .fold(0.0, f64::max)
    }

    /// Coefficient-wise comparison with an absolute tolerance scaled by the
    /// larger of the two magnitudes (floored at 1).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff()).max(1.0);
        self.max_abs_diff(other) <= tol * scale
    }

    /// Extract the ħ^k part as a polynomial with plain complex coefficients.
    pub fn hbar_component(&self, k: i32) -> PhasePoly {
        let mut out = Self::zero(self.basis);
        for (&e, h) in &self.terms {
            out.add_term(e, &HbarPoly::constant(h.coeff(k)));
        }
        out
    }

    /// Bind ħ to a number, collapsing every coefficient to an ħ⁰ constant.
    pub fn bind_hbar(&self, hbar: f64) -> PhasePoly {
        let mut out = Self::zero(self.basis);
        for (&e, h) in &self.terms {
            out.add_term(e, &HbarPoly::constant(h.eval(hbar)));
        }
        out
    }

    /// Complex-conjugate coefficients; in the holomorphic basis additionally
    /// swap a ↔ ā. This is the involution making the star products Hermitean.
    pub fn hermitean_conj(&self) -> PhasePoly {
        let mut out = Self::zero(self.basis);
        for (&(e0, e1), h) in &self.terms {
            let e = match self.basis {
                Basis::Canonical => (e0, e1),
                Basis::Holomorphic => (e1, e0),
            };
            out.add_term(e, &h.conj());
        }
        out
    }
}

impl Add for &PhasePoly {
    type Output = PhasePoly;
    fn add(self, rhs: &PhasePoly) -> PhasePoly {
        assert_eq!(self.basis, rhs.basis, "basis mismatch in addition");
        let mut out = self.clone();
        for (&e, h) in &rhs.terms {
            out.add_term(e, h);
        }
        out
    }
}

impl Sub for &PhasePoly {
    type Output = PhasePoly;
    fn sub(self, rhs: &PhasePoly) -> PhasePoly {
        assert_eq!(self.basis, rhs.basis, "basis mismatch in subtraction");
        let mut out = self.clone();
        for (&e, h) in &rhs.terms {
            out.add_term(e, &-h);
        }
        out
    }
}

impl Mul for &PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: &PhasePoly) -> PhasePoly {
        self.try_mul(rhs).expect("phase polynomial product overflow")
    }
}

impl Neg for &PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Constant antisymmetric Poisson tensor of one chart. Only the canonical
/// symplectic form (and its holomorphic transport) is supported.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonTensor {
    basis: Basis,
    matrix: [[C64; 2]; 2],
}

impl PoissonTensor {
    /// {q, p} = 1.
    pub fn canonical() -> Self {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        PoissonTensor { basis: Basis::Canonical, matrix: [[z, one], [-one, z]] }
    }

    /// {a, ā} = −i, the transport of the canonical tensor through the
    /// holomorphic substitution.
    pub fn holomorphic() -> Self {
        let z = C64::new(0.0, 0.0);
        let mi = C64::new(0.0, -1.0);
        PoissonTensor { basis: Basis::Holomorphic, matrix: [[z, mi], [-mi, z]] }
    }

    pub fn for_basis(basis: Basis) -> Self {
        match basis {
            Basis::Canonical => Self::canonical(),
            Basis::Holomorphic => Self::holomorphic(),
        }
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.matrix
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.matrix[0][0] == C64::new(0.0, 0.0)
            && self.matrix[1][1] == C64::new(0.0, 0.0)
            && self.matrix[0][1] == -self.matrix[1][0]
    }

    /// `α^{ij} ∂_i f ∂_j g`.
    pub fn bracket(&self, f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, PhaseError> {
        if f.basis() != self.basis || g.basis() != self.basis {
            return Err(PhaseError::BasisMismatch(f.basis(), g.basis()));
        }
        let vars = match self.basis {
            Basis::Canonical => [Var::Q, Var::P],
            Basis::Holomorphic => [Var::A, Var::ABar],
        };
        let df = [f.differentiate(vars[0], 1)?, f.differentiate(vars[1], 1)?];
        let dg = [g.differentiate(vars[0], 1)?, g.differentiate(vars[1], 1)?];
        let mut out = PhasePoly::zero(self.basis);
        for i in 0..2 {
            for j in 0..2 {
                if self.matrix[i][j] == C64::new(0.0, 0.0) {
                    continue;
                }
                let prod = df[i].try_mul(&dg[j])?;
                out = &out + &prod.scale(self.matrix[i][j]);
            }
        }
        Ok(out)
    }
}

/// Poisson bracket of two polynomials sharing a basis.
pub fn poisson_bracket(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, PhaseError> {
    if f.basis() != g.basis() {
        return Err(PhaseError::BasisMismatch(f.basis(), g.basis()));
    }
    PoissonTensor::for_basis(f.basis()).bracket(f, g)
}

/// a and ā written out in canonical variables:
/// a = √(mω/2) (q + i p/(mω)),  ā = √(mω/2) (q − i p/(mω)).
fn holomorphic_vars_in_canonical(params: &PhysParams) -> (PhasePoly, PhasePoly) {
    let mw = params.mass * params.omega;
    let root = (mw / 2.0).sqrt();
    let q = PhasePoly::var(Var::Q);
    let p = PhasePoly::var(Var::P);
    let a = &q.scale(C64::new(root, 0.0)) + &p.scale(C64::new(0.0, root / mw));
    let abar = &q.scale(C64::new(root, 0.0)) - &p.scale(C64::new(0.0, root / mw));
    (a, abar)
}

/// q and p written out in holomorphic variables:
/// q = (a + ā)/√(2mω),  p = −i √(mω/2) (a − ā).
fn canonical_vars_in_holomorphic(params: &PhysParams) -> (PhasePoly, PhasePoly) {
    let mw = params.mass * params.omega;
    let a = PhasePoly::var(Var::A);
    let abar = PhasePoly::var(Var::ABar);
    let q = (&a + &abar).scale(C64::new(1.0 / (2.0 * mw).sqrt(), 0.0));
    let p = (&a - &abar).scale(C64::new(0.0, -(mw / 2.0).sqrt()));
    (q, p)
}

/// Rewrite a canonical polynomial in holomorphic variables (exact linear
/// substitution). Holomorphic input is returned unchanged.
pub fn to_holomorphic(f: &PhasePoly, params: &PhysParams) -> Result<PhasePoly, PhaseError> {
    match f.basis() {
        Basis::Holomorphic => Ok(f.clone()),
        Basis::Canonical => {
            let (q, p) = canonical_vars_in_holomorphic(params);
            f.substitute(&q, &p)
        }
    }
}

/// Inverse of [`to_holomorphic`].
pub fn to_canonical(f: &PhasePoly, params: &PhysParams) -> Result<PhasePoly, PhaseError> {
    match f.basis() {
        Basis::Canonical => Ok(f.clone()),
        Basis::Holomorphic => {
            let (a, abar) = holomorphic_vars_in_canonical(params);
            f.substitute(&a, &abar)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn bracket_of_canonical_pair_is_one() {
        let q = PhasePoly::var(Var::Q);
        let p = PhasePoly::var(Var::P);
        let b = poisson_bracket(&q, &p).unwrap();
        assert!(b.approx_eq(&PhasePoly::one(Basis::Canonical), 1e-15));
    }

    #[test]
    fn bracket_q2_p2() {
        // {q², p²} = 4qp
        let q2 = PhasePoly::var(Var::Q).try_pow(2).unwrap();
        let p2 = PhasePoly::var(Var::P).try_pow(2).unwrap();
        let b = poisson_bracket(&q2, &p2).unwrap();
        let expect = PhasePoly::monomial(Basis::Canonical, (1, 1), HbarPoly::constant(c(4.0)));
        assert!(b.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn bracket_of_holomorphic_pair() {
        // {a, ā} = −i
        let a = PhasePoly::var(Var::A);
        let abar = PhasePoly::var(Var::ABar);
        let b = poisson_bracket(&a, &abar).unwrap();
        let expect = PhasePoly::constant(Basis::Holomorphic, C64::new(0.0, -1.0));
        assert!(b.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn bracket_rejects_mixed_bases() {
        let q = PhasePoly::var(Var::Q);
        let a = PhasePoly::var(Var::A);
        assert!(matches!(poisson_bracket(&q, &a), Err(PhaseError::BasisMismatch(_, _))));
    }

    #[test]
    fn oscillator_hamiltonian_becomes_diagonal() {
        // p²/2m + mω²q²/2 → ω aā
        let params = PhysParams::new(0.7, 1.3, 2.1).unwrap();
        let q2 = PhasePoly::var(Var::Q).try_pow(2).unwrap();
        let p2 = PhasePoly::var(Var::P).try_pow(2).unwrap();
        let h = &p2.scale(c(0.5 / params.mass))
            + &q2.scale(c(0.5 * params.mass * params.omega * params.omega));
        let hh = to_holomorphic(&h, &params).unwrap();
        let expect =
            PhasePoly::monomial(Basis::Holomorphic, (1, 1), HbarPoly::constant(c(params.omega)));
        assert!(hh.approx_eq(&expect, 1e-14));
    }

    #[test]
    fn a_abar_in_canonical_variables() {
        // aā = (mω q² + p²/(mω))/2
        let params = PhysParams::new(1.0, 2.0, 0.5).unwrap();
        let mw = params.mass * params.omega;
        let n = PhasePoly::monomial(Basis::Holomorphic, (1, 1), HbarPoly::one());
        let nc = to_canonical(&n, &params).unwrap();
        let q2 = PhasePoly::var(Var::Q).try_pow(2).unwrap();
        let p2 = PhasePoly::var(Var::P).try_pow(2).unwrap();
        let expect = &q2.scale(c(mw / 2.0)) + &p2.scale(c(0.5 / mw));
        assert!(nc.approx_eq(&expect, 1e-14));
    }

    #[test]
    fn basis_round_trip_is_identity() {
        let params = PhysParams::new(1.0, 1.7, 0.9).unwrap();
        let mut f = PhasePoly::zero(Basis::Canonical);
        f.add_term((2, 1), &HbarPoly::constant(C64::new(1.5, -0.5)));
        f.add_term((0, 3), &HbarPoly::term(c(2.0), 1));
        f.add_term((1, 0), &HbarPoly::one());
        let round = to_canonical(&to_holomorphic(&f, &params).unwrap(), &params).unwrap();
        assert!(round.approx_eq(&f, 1e-13));
    }

    #[test]
    fn simple_partial_derivatives() {
        // ∂q(q²p) = 2qp and ∂p²(q²p) = 0
        let f = PhasePoly::monomial(Basis::Canonical, (2, 1), HbarPoly::one());
        let dq = f.differentiate(Var::Q, 1).unwrap();
        let expect = PhasePoly::monomial(Basis::Canonical, (1, 1), HbarPoly::constant(c(2.0)));
        assert!(dq.approx_eq(&expect, 1e-15));
        assert!(f.differentiate(Var::P, 2).unwrap().is_zero());
    }

    #[test]
    fn derivative_commutes_across_variables() {
        let mut f = PhasePoly::zero(Basis::Canonical);
        f.add_term((3, 2), &HbarPoly::constant(c(2.0)));
        f.add_term((1, 4), &HbarPoly::constant(c(-1.0)));
        let dqdp = f.differentiate(Var::Q, 1).unwrap().differentiate(Var::P, 1).unwrap();
        let dpdq = f.differentiate(Var::P, 1).unwrap().differentiate(Var::Q, 1).unwrap();
        assert!(dqdp.approx_eq(&dpdq, 1e-15));
    }

    #[test]
    fn mixed_second_derivative_holomorphic() {
        // ∂a ∂ā (a²ā²) = 4aā
        let f = PhasePoly::monomial(Basis::Holomorphic, (2, 2), HbarPoly::one());
        let d = f.differentiate(Var::A, 1).unwrap().differentiate(Var::ABar, 1).unwrap();
        let expect = PhasePoly::monomial(Basis::Holomorphic, (1, 1), HbarPoly::constant(c(4.0)));
        assert!(d.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn evaluate_binds_point_and_hbar() {
        let mut f = PhasePoly::zero(Basis::Canonical);
        f.add_term((1, 1), &HbarPoly::one()); // qp
        f.add_term((1, 0), &HbarPoly::term(c(1.0), 1)); // ħq
        let v = f.evaluate((c(2.0), c(3.0)), 0.5);
        assert!((v - c(7.0)).norm() < 1e-15);
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let f = PhasePoly::monomial(Basis::Canonical, (40, 0), HbarPoly::one());
        assert!(matches!(f.try_mul(&f), Err(PhaseError::ExponentOverflow(80))));
    }

    #[test]
    fn hermitean_conj_swaps_holomorphic_vars() {
        let f = PhasePoly::monomial(Basis::Holomorphic, (2, 1), HbarPoly::constant(C64::new(0.0, 1.0)));
        let g = f.hermitean_conj();
        assert_eq!(g.coeff((1, 2)).coeff(0), C64::new(0.0, -1.0));
        assert!(g.coeff((2, 1)).is_zero());
    }

    #[test]
    fn poisson_tensor_is_antisymmetric() {
        assert!(PoissonTensor::canonical().is_antisymmetric());
        assert!(PoissonTensor::holomorphic().is_antisymmetric());
    }
}
