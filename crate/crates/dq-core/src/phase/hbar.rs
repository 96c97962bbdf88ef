use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::C64;

/// A finite Laurent polynomial in the formal symbol ħ with complex
/// coefficients, `Σ_k c_k ħ^k`.
///
/// Parsed expressions and star products of plain polynomials only ever
/// produce non-negative powers; negative powers enter through the `1/ħⁿ`
/// normalization of oscillator projectors and stay confined to Gaussian
/// prefactors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HbarPoly {
    coeffs: BTreeMap<i32, C64>,
}

impl HbarPoly {
    pub fn zero() -> Self {
        HbarPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// The constant `c` (an ħ⁰ coefficient).
    pub fn constant(c: C64) -> Self {
        Self::term(c, 0)
    }

    /// The single term `c ħ^k`.
    pub fn term(c: C64, k: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != C64::new(0.0, 0.0) {
            coeffs.insert(k, c);
        }
        HbarPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Some(c) if the polynomial is the ħ⁰ constant `c` (or zero).
    pub fn as_constant(&self) -> Option<C64> {
        match self.coeffs.len() {
            0 => Some(C64::new(0.0, 0.0)),
            1 => self.coeffs.get(&0).copied(),
            _ => None,
        }
    }

    /// Coefficient of ħ^k.
    pub fn coeff(&self, k: i32) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn add_term(&mut self, c: C64, k: i32) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert(C64::new(0.0, 0.0));
        *entry += c;
        if *entry == C64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Self::zero();
        }
        HbarPoly { coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v * c)).collect() }
    }

    /// Multiply by ħ^shift.
    pub fn hbar_shift(&self, shift: i32) -> Self {
        HbarPoly { coeffs: self.coeffs.iter().map(|(&k, &v)| (k + shift, v)).collect() }
    }

    /// Substitute a numeric value for ħ.
    pub fn eval(&self, hbar: f64) -> C64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| c * C64::new(hbar.powi(k), 0.0))
            .sum()
    }

    /// Complex-conjugate every coefficient.
    pub fn conj(&self) -> Self {
        HbarPoly { coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v.conj())).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest |difference| between coefficients of `self` and `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<i32> = self.coeffs.keys().copied().collect();
        keys.extend(other.coeffs.keys().copied());
        keys.iter()
            .map(|k| (self.coeff(*k) - other.coeff(*k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }
}

impl Add for &HbarPoly {
    type Output = HbarPoly;
    fn add(self, rhs: &HbarPoly) -> HbarPoly {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(c, k);
        }
        out
    }
}

impl Sub for &HbarPoly {
    type Output = HbarPoly;
    fn sub(self, rhs: &HbarPoly) -> HbarPoly {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(-c, k);
        }
        out
    }
}

impl Mul for &HbarPoly {
    type Output = HbarPoly;
    fn mul(self, rhs: &HbarPoly) -> HbarPoly {
        let mut out = HbarPoly::zero();
        for (ka, ca) in self.iter() {
            for (kb, cb) in rhs.iter() {
                out.add_term(ca * cb, ka + kb);
            }
        }
        out
    }
}

impl Neg for &HbarPoly {
    type Output = HbarPoly;
    fn neg(self) -> HbarPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut h = HbarPoly::term(C64::new(2.0, 0.0), 1);
        h.add_term(C64::new(-2.0, 0.0), 1);
        assert!(h.is_zero());
    }

    #[test]
    fn eval_handles_negative_powers() {
        let h = HbarPoly::term(C64::new(3.0, 0.0), -2);
        assert!((h.eval(0.5) - C64::new(12.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn product_adds_powers() {
        let a = HbarPoly::term(C64::new(2.0, 0.0), 1);
        let b = HbarPoly::term(C64::new(0.0, 1.0), 2);
        let c = &a * &b;
        assert_eq!(c.coeff(3), C64::new(0.0, 2.0));
    }
}
