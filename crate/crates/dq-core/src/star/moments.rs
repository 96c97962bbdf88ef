//! Exact Moyal product of two Gaussians with polynomial prefactors.
//!
//! Writing each operand as `P(a,ā) exp(μ aā/ħ)` and the product in its
//! integral (Fourier/area) form, the four-dimensional integral is Gaussian.
//! Completing the square handles the pure exponentials; the polynomial
//! prefactors are generated by differentiating source terms attached to each
//! operand, which turns them into moments of the completed-square Gaussian.
//! Those moments obey a two-term recursion (mean part + pairing part) that is
//! evaluated symbolically here, so the whole product is closed-form.

use std::collections::HashMap;

use super::gaussian::GaussianPoly;
use super::StarError;
use crate::phase::{Basis, HbarPoly, PhasePoly, Var};
use crate::C64;

/// Source-slot layout: s₁, s₂ couple to `a` in each operand and occupy
/// slots 0 and 1; t₁, t₂ couple to `ā` and occupy slots 2 and 3.
const S_BASE: usize = 0;
const T_BASE: usize = 2;

struct MomentEngine {
    /// Linear part of the completed-square exponent per source.
    lambda: [PhasePoly; 4],
    /// Source-source couplings (only s↔t entries are nonzero).
    pairing: [[HbarPoly; 4]; 4],
    memo: HashMap<[u32; 4], PhasePoly>,
}

impl MomentEngine {
    fn moment(&mut self, alpha: [u32; 4]) -> PhasePoly {
        if alpha == [0, 0, 0, 0] {
            return PhasePoly::one(Basis::Holomorphic);
        }
        if let Some(hit) = self.memo.get(&alpha) {
            return hit.clone();
        }
        let r = (0..4).find(|&i| alpha[i] > 0).unwrap();
        let mut rest = alpha;
        rest[r] -= 1;
        let tail = self.moment(rest);
        let mut acc = self.lambda[r].try_mul(&tail).expect("moment degree overflow");
        for j in 0..4 {
            if rest[j] == 0 || self.pairing[r][j].is_zero() {
                continue;
            }
            let mut inner = rest;
            inner[j] -= 1;
            let count = C64::new(rest[j] as f64, 0.0);
            let term = self
                .moment(inner)
                .scale_hbar(&self.pairing[r][j].scale(count));
            acc = &acc + &term;
        }
        self.memo.insert(alpha, acc.clone());
        acc
    }
}

/// Moyal star of two genuinely Gaussian operands (μ ≠ 0 on both sides).
pub(super) fn moyal_gaussian_pair(
    f: &GaussianPoly,
    g: &GaussianPoly,
) -> Result<GaussianPoly, StarError> {
    let mu1 = f.mu();
    let mu2 = g.mu();
    let det = mu1 * mu2 + C64::new(4.0, 0.0);
    if det.norm() < 1e-12 * (1.0 + mu1.norm() * mu2.norm()) {
        return Err(StarError::SingularGaussian { mu1, mu2 });
    }
    // inverse of the coupling matrix [[μ₁, 2], [−2, μ₂]]
    let minv = [
        [mu2 / det, C64::new(-2.0, 0.0) / det],
        [C64::new(2.0, 0.0) / det, mu1 / det],
    ];
    let one = C64::new(1.0, 0.0);
    let a = PhasePoly::var(Var::A);
    let abar = PhasePoly::var(Var::ABar);
    let lambda = [
        a.scale(one - mu1 * minv[0][0] - mu2 * minv[0][1]),
        a.scale(one - mu1 * minv[1][0] - mu2 * minv[1][1]),
        abar.scale(one - mu1 * minv[0][0] - mu2 * minv[1][0]),
        abar.scale(one - mu1 * minv[0][1] - mu2 * minv[1][1]),
    ];
    let mut pairing: [[HbarPoly; 4]; 4] = Default::default();
    for (j, row) in minv.iter().enumerate() {
        for (k, &m) in row.iter().enumerate() {
            let coupling = HbarPoly::term(-m, 1);
            pairing[S_BASE + j][T_BASE + k] = coupling.clone();
            pairing[T_BASE + k][S_BASE + j] = coupling;
        }
    }
    let mut engine = MomentEngine { lambda, pairing, memo: HashMap::new() };

    let overall = C64::new(4.0, 0.0) / det;
    let mu_out = C64::new(4.0, 0.0) * (mu1 + mu2) / det;
    let mut prefactor = PhasePoly::zero(Basis::Holomorphic);
    for (&(m1, n1), cf) in f.prefactor().terms() {
        for (&(m2, n2), cg) in g.prefactor().terms() {
            let moment = engine.moment([m1, m2, n1, n2]);
            let coeff = (cf * cg).scale(overall);
            prefactor = &prefactor + &moment.scale_hbar(&coeff);
        }
    }
    GaussianPoly::new(prefactor, mu_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::parse_expr;
    use crate::star::{gaussian_star, star_poly_gaussian, SchemeSpec};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    /// Polynomial-prefactor products must agree with the terminating series
    /// route when the left exponent is switched off by hand.
    #[test]
    fn moment_route_degenerates_to_the_series_route() {
        // (a²ā + a) e^{μ₁aā/ħ} with μ₁ → 0 approached exactly: compare the
        // moment engine at μ₁ = 0 against star_poly_gaussian, which treats
        // the left factor as a polynomial.
        let p = parse_expr("a^2*abar + a", Basis::Holomorphic).unwrap();
        let f = GaussianPoly::new(p.clone(), c(0.0)).unwrap();
        let g = GaussianPoly::exponential(c(-2.0)).scale(c(2.0));
        // gaussian_star short-circuits μ = 0, so call the engine directly
        let via_moments = moyal_gaussian_pair(&f, &g).unwrap();
        let via_series = star_poly_gaussian(&p, &g, SchemeSpec::Moyal).unwrap();
        assert!(via_moments.approx_eq(&via_series, 1e-13));
    }

    #[test]
    fn prefactor_moments_reproduce_grid_values() {
        // numeric spot check of (aā e^{−aā/ħ}) ⋆ₘ (ā e^{−aā/ħ}) against a
        // brute-force two-sided series evaluated far inside its convergence
        // region would be circular; instead check associativity-style
        // consistency: (a ⋆ f) ⋆ g = a ⋆ (f ⋆ g) with f, g Gaussian.
        let hbar = 1.0;
        let a_poly = parse_expr("a", Basis::Holomorphic).unwrap();
        let f = GaussianPoly::new(parse_expr("abar", Basis::Holomorphic).unwrap(), c(-1.0)).unwrap();
        let g = GaussianPoly::new(parse_expr("a*abar", Basis::Holomorphic).unwrap(), c(-0.5)).unwrap();
        let left = gaussian_star(
            &star_poly_gaussian(&a_poly, &f, SchemeSpec::Moyal).unwrap(),
            &g,
            SchemeSpec::Moyal,
        )
        .unwrap();
        let right = star_poly_gaussian(
            &a_poly,
            &gaussian_star(&f, &g, SchemeSpec::Moyal).unwrap(),
            SchemeSpec::Moyal,
        )
        .unwrap();
        for (re, im) in [(0.3, 0.1), (-0.4, 0.7), (1.1, -0.2)] {
            let z = C64::new(re, im);
            let l = left.evaluate(z, hbar);
            let r = right.evaluate(z, hbar);
            assert!((l - r).norm() < 1e-12, "mismatch at {z}: {l} vs {r}");
        }
    }
}
