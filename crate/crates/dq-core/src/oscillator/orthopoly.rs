//! Classical orthogonal polynomials and oscillator wavefunctions via stable
//! three-term recurrences.

use crate::phase::PhysParams;

/// Laguerre polynomial Lₙ(x).
pub fn laguerre(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0; // L₀
    let mut l = 1.0 - x; // L₁
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * l - kf * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Physicists' Hermite polynomial Hₙ(x).
pub fn hermite(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut hm1 = 1.0; // H₀
    let mut h = 2.0 * x; // H₁
    for k in 1..n {
        let next = 2.0 * x * h - 2.0 * (k as f64) * hm1;
        hm1 = h;
        h = next;
    }
    h
}

/// Normalized Hermite function hₙ(ξ) = Hₙ(ξ) e^{−ξ²/2} / √(2ⁿ n! √π).
///
/// The recurrence runs on the normalized functions directly, so large n does
/// not overflow.
pub fn hermite_function(n: u32, xi: f64) -> f64 {
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return h0;
    }
    let mut hm1 = h0;
    let mut h = std::f64::consts::SQRT_2 * xi * h0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * h - (kf / (kf + 1.0)).sqrt() * hm1;
        hm1 = h;
        h = next;
    }
    h
}

/// Oscillator position eigenfunction ψₙ(x).
pub fn oscillator_psi(n: u32, x: f64, params: &PhysParams) -> f64 {
    let scale = params.mass * params.omega / params.hbar;
    scale.powf(0.25) * hermite_function(n, scale.sqrt() * x)
}

/// |ψ̃ₙ(p)|-type momentum eigenfunction (magnitude form; the physical one
/// carries an n-dependent phase that drops out of probability densities).
pub fn oscillator_psi_momentum(n: u32, p: f64, params: &PhysParams) -> f64 {
    let scale = params.mass * params.omega * params.hbar;
    scale.powf(-0.25) * hermite_function(n, p / scale.sqrt())
}
