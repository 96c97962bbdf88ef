//! Fourier-Dirichlet projection: reading projectors and spectra out of the
//! time-evolution function.
//!
//! The expansion Exp(Ht) = Σ π_E e^{−iEt/ħ} is inverted by integrating one
//! full period against e^{+iEt/ħ}. The Moyal closed form is singular at
//! ωt = π (mod 2π), so the time contour is shifted to Im t = −τ: the line
//! contributions pick up e^{−E_nτ/ħ}, the projection weight e^{+Eτ/ħ}
//! restores them exactly, and the integrand becomes analytic in a strip so
//! the periodic trapezoid rule converges geometrically.

use super::{projector, OscError, StarExponential};
use crate::phase::PhysParams;
use crate::star::SchemeSpec;
use crate::C64;

/// Samples of a radial time-evolution function over one full period on the
/// damped contour t_j − iτ.
#[derive(Debug, Clone)]
pub struct PeriodSamples {
    pub omega: f64,
    pub hbar: f64,
    /// Contour shift τ ≥ 0.
    pub damping: f64,
    pub h_grid: Vec<f64>,
    /// values[j][k] = function at time t_j − iτ and energy argument h_grid[k].
    pub values: Vec<Vec<C64>>,
}

impl PeriodSamples {
    /// Sample an arbitrary radial evolution function over one period.
    pub fn from_fn<E>(
        mut f: impl FnMut(f64, C64) -> Result<C64, E>,
        h_grid: Vec<f64>,
        t_count: usize,
        damping: f64,
        params: &PhysParams,
    ) -> Result<Self, E> {
        let period = 4.0 * std::f64::consts::PI / params.omega;
        let dt = period / t_count as f64;
        let mut values = Vec::with_capacity(t_count);
        for j in 0..t_count {
            let t = C64::new(j as f64 * dt, -damping);
            let mut row = Vec::with_capacity(h_grid.len());
            for &h in &h_grid {
                row.push(f(h, t)?);
            }
            values.push(row);
        }
        Ok(PeriodSamples {
            omega: params.omega,
            hbar: params.hbar,
            damping,
            h_grid,
            values,
        })
    }

    /// Sample the closed-form star exponential.
    pub fn from_star_exponential(
        se: &StarExponential,
        h_grid: Vec<f64>,
        t_count: usize,
        damping: f64,
    ) -> Result<Self, OscError> {
        let params = se.params;
        Self::from_fn(|h, t| se.value_at_h(h, t), h_grid, t_count, damping, &params)
    }

    pub fn t_count(&self) -> usize {
        self.values.len()
    }

    /// (ω/4π) ∮ Exp(Ht) e^{iEt/ħ} dt on the sampled contour. Returns the
    /// projector samples when E sits on a spectral line, ≈0 otherwise.
    pub fn fd_project(&self, e: f64) -> Result<Vec<C64>, OscError> {
        let n_t = self.t_count();
        // frequencies above ~n_t/4 lines alias back into the window
        let resolvable = (n_t as f64) / 4.0 - 2.0;
        if e.abs() / (self.hbar * self.omega) > resolvable {
            return Err(OscError::InsufficientSampling(n_t, e));
        }
        let period = 4.0 * std::f64::consts::PI / self.omega;
        let dt = period / n_t as f64;
        let weight = dt * self.omega / (4.0 * std::f64::consts::PI);
        let boost = (e * self.damping / self.hbar).exp();
        let mut out = vec![C64::new(0.0, 0.0); self.h_grid.len()];
        for (j, row) in self.values.iter().enumerate() {
            let t = j as f64 * dt;
            let phase = (C64::i() * e * t / self.hbar).exp() * boost * weight;
            for (k, v) in row.iter().enumerate() {
                out[k] += v * phase;
            }
        }
        Ok(out)
    }

    /// L²(dH) norm of a projection on this grid (trapezoid weights).
    pub fn l2_norm(&self, values: &[C64]) -> f64 {
        trapezoid_l2(&self.h_grid, values)
    }
}

fn trapezoid_l2(grid: &[f64], values: &[C64]) -> f64 {
    if grid.len() < 2 {
        return values.first().map(|v| v.norm()).unwrap_or(0.0);
    }
    let dh = grid[1] - grid[0];
    let mut acc = 0.0;
    for (j, v) in values.iter().enumerate() {
        let w = if j == 0 || j == grid.len() - 1 { 0.5 } else { 1.0 };
        acc += w * v.norm_sqr();
    }
    (acc * dh).sqrt()
}

/// Reference norm of the ground-state projector on a radial grid.
pub fn pi0_norm_on_grid(
    scheme: SchemeSpec,
    h_grid: &[f64],
    params: &PhysParams,
) -> Result<f64, OscError> {
    let pi0 = projector(0, scheme)?;
    let values: Vec<C64> = h_grid
        .iter()
        .map(|&h| pi0.evaluate(C64::new((h / params.omega).sqrt(), 0.0), params.hbar))
        .collect();
    Ok(trapezoid_l2(h_grid, &values))
}

/// A spectral line found by scanning the projection strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedLine {
    pub energy: f64,
    pub strength: f64,
}

/// Scan E in steps of ħω/20 and declare a line at every strict local maximum
/// of the projection norm exceeding `threshold_fraction` of `reference_norm`.
///
/// The bare threshold alone is not enough: between exact half-quantum
/// offsets the finite-window projection leaks an O(1) sinc tail, so only
/// local maxima are physical lines.
pub fn scan_spectrum(
    samples: &PeriodSamples,
    e_max: f64,
    reference_norm: f64,
    threshold_fraction: f64,
) -> Result<Vec<DetectedLine>, OscError> {
    let de = samples.hbar * samples.omega / 20.0;
    let count = (e_max / de).floor() as usize + 1;
    let mut strengths = Vec::with_capacity(count);
    for k in 0..count {
        let e = k as f64 * de;
        let proj = samples.fd_project(e)?;
        strengths.push(samples.l2_norm(&proj));
    }
    let threshold = threshold_fraction * reference_norm;
    let mut lines = Vec::new();
    for k in 0..count {
        let here = strengths[k];
        if here < threshold {
            continue;
        }
        // the right edge of the scan can be a rising leakage flank toward a
        // line just outside the window, so it never counts as a maximum
        let left_ok = k == 0 || strengths[k - 1] < here;
        let right_ok = k + 1 < count && strengths[k + 1] < here;
        if left_ok && right_ok {
            lines.push(DetectedLine { energy: k as f64 * de, strength: here });
        }
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::energy;

    fn radial_grid(h_max: f64, n: usize) -> Vec<f64> {
        (0..n).map(|j| j as f64 * h_max / (n - 1) as f64).collect()
    }

    fn project_vs_projector(scheme: SchemeSpec, n: u32, e: f64) -> (f64, f64) {
        let params = PhysParams::unit();
        let se = StarExponential::new(scheme, params);
        let grid = radial_grid(8.0, 161);
        // 1024 samples push the first alias line to n ≈ 512, whose damped
        // weight e^{−512·0.05} is far below the target tolerance
        let samples = PeriodSamples::from_star_exponential(&se, grid.clone(), 1024, 0.05).unwrap();
        let proj = samples.fd_project(e).unwrap();
        let pi = projector(n, scheme).unwrap();
        let reference: Vec<C64> = grid
            .iter()
            .map(|&h| pi.evaluate(C64::new(h.sqrt(), 0.0), params.hbar))
            .collect();
        let diff: Vec<C64> = proj.iter().zip(&reference).map(|(a, b)| a - b).collect();
        (samples.l2_norm(&diff), samples.l2_norm(&reference))
    }

    #[test]
    fn moyal_ground_state_projection() {
        let (err, norm) = project_vs_projector(SchemeSpec::Moyal, 0, 0.5);
        assert!(err < 1e-8 * norm, "relative L² error {}", err / norm);
    }

    #[test]
    fn projection_between_lines_vanishes() {
        // E = ħω sits between the Moyal half-integer lines
        let params = PhysParams::unit();
        let se = StarExponential::new(SchemeSpec::Moyal, params);
        let grid = radial_grid(8.0, 161);
        let samples = PeriodSamples::from_star_exponential(&se, grid, 512, 0.05).unwrap();
        let proj = samples.fd_project(1.0).unwrap();
        let norm = samples.l2_norm(&proj);
        assert!(norm < 1e-8, "between-line projection norm {norm}");
    }

    #[test]
    fn normal_scheme_ground_state() {
        let (err, norm) = project_vs_projector(SchemeSpec::Normal, 0, 0.0);
        assert!(err < 1e-8 * norm, "relative L² error {}", err / norm);
    }

    #[test]
    fn higher_moyal_lines_project_cleanly() {
        for n in [1u32, 3, 5] {
            let e = energy(n, SchemeSpec::Moyal, &PhysParams::unit());
            let (err, norm) = project_vs_projector(SchemeSpec::Moyal, n, e);
            assert!(err < 1e-8 * norm, "n={n}: relative L² error {}", err / norm);
        }
    }

    #[test]
    fn nyquist_guard_fires() {
        let params = PhysParams::unit();
        let se = StarExponential::new(SchemeSpec::Moyal, params);
        let samples =
            PeriodSamples::from_star_exponential(&se, radial_grid(4.0, 33), 32, 0.05).unwrap();
        assert!(matches!(
            samples.fd_project(12.5),
            Err(OscError::InsufficientSampling(32, _))
        ));
    }

    #[test]
    fn scan_finds_the_moyal_lines() {
        let params = PhysParams::unit();
        let se = StarExponential::new(SchemeSpec::Moyal, params);
        let grid = radial_grid(8.0, 161);
        let samples = PeriodSamples::from_star_exponential(&se, grid.clone(), 512, 0.05).unwrap();
        let reference = pi0_norm_on_grid(SchemeSpec::Moyal, &grid, &params).unwrap();
        let lines = scan_spectrum(&samples, 4.0, reference, 1e-3).unwrap();
        let energies: Vec<f64> = lines.iter().map(|l| l.energy).collect();
        let expect = [0.5, 1.5, 2.5, 3.5];
        assert_eq!(energies.len(), expect.len(), "found {energies:?}");
        for (a, b) in energies.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_finds_the_normal_lines_including_zero() {
        let params = PhysParams::unit();
        let se = StarExponential::new(SchemeSpec::Normal, params);
        let grid = radial_grid(8.0, 161);
        let samples = PeriodSamples::from_star_exponential(&se, grid.clone(), 512, 0.02).unwrap();
        let reference = pi0_norm_on_grid(SchemeSpec::Normal, &grid, &params).unwrap();
        let lines = scan_spectrum(&samples, 3.2, reference, 1e-3).unwrap();
        let energies: Vec<f64> = lines.iter().map(|l| l.energy).collect();
        assert_eq!(energies.len(), 4, "found {energies:?}");
        for (a, b) in energies.iter().zip([0.0, 1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
