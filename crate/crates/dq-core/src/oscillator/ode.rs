//! Direct integration of the radial evolution equation for the Moyal star
//! exponential,
//!
//! iħ ∂ₜE = (H − (ħω)²/4 ∂_H − (ħω)²/4 H ∂_H²) E,   E(H, 0) = 1,
//!
//! on a uniform H-grid with classic fixed-step RK4. The derivative terms
//! combine into ∂_H(H ∂_H E), which is discretized in conservative
//! (flux) form in the interior; the endpoints use one-sided stencils.
//! The default step obeys the explicit-scheme stability bound
//! dt ≲ 2.5/|λ|_max, which is far below the naive accuracy step.

use super::OscError;
use crate::phase::PhysParams;
use crate::C64;

/// Uniform radial grid on [0, h_max].
#[derive(Debug, Clone, Copy)]
pub struct RadialGridSpec {
    pub n_points: usize,
    pub h_max: f64,
}

impl Default for RadialGridSpec {
    fn default() -> Self {
        // extends past the usual comparison window [0, 6] so the low-order
        // edge stencil cannot contaminate it
        RadialGridSpec { n_points: 1536, h_max: 9.0 }
    }
}

impl RadialGridSpec {
    pub fn step(&self) -> f64 {
        self.h_max / (self.n_points as f64 - 1.0)
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points).map(|j| j as f64 * h).collect()
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub h_grid: Vec<f64>,
    pub values: Vec<C64>,
    pub dt: f64,
    pub steps: usize,
    /// The H_max endpoint uses a one-sided, lower-order stencil; values near
    /// it are less accurate than the interior.
    pub edge_stencil_warning: bool,
}

/// Right-hand side dE/dt = −(i/ħ)[H E − (ħω)²/4 ∂_H(H ∂_H E)].
fn rhs(values: &[C64], out: &mut [C64], grid: &[f64], step: f64, params: &PhysParams) {
    let n = values.len();
    let kappa = (params.hbar * params.omega).powi(2) / 4.0;
    let inv_h2 = 1.0 / (step * step);
    let minus_i_over_hbar = C64::new(0.0, -1.0 / params.hbar);

    // H = 0: the operator degenerates to ∂_H E (one-sided second order)
    let d_edge = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * step);
    out[0] = minus_i_over_hbar * (grid[0] * values[0] - kappa * d_edge);

    for j in 1..n - 1 {
        let flux_plus = (grid[j] + 0.5 * step) * (values[j + 1] - values[j]);
        let flux_minus = (grid[j] - 0.5 * step) * (values[j] - values[j - 1]);
        let lap = (flux_plus - flux_minus) * inv_h2;
        out[j] = minus_i_over_hbar * (grid[j] * values[j] - kappa * lap);
    }

    // H_max: one-sided second-order stencils for both derivatives
    let j = n - 1;
    let second = (2.0 * values[j] - 5.0 * values[j - 1] + 4.0 * values[j - 2] - values[j - 3])
        * inv_h2;
    let first = (3.0 * values[j] - 4.0 * values[j - 1] + values[j - 2]) / (2.0 * step);
    out[j] = minus_i_over_hbar * (grid[j] * values[j] - kappa * (grid[j] * second + first));
}

/// Integrate the star exponential to `t_final` from E = 1.
///
/// `dt` overrides the stability-bounded default; too large a step is the
/// documented way to watch the blow-up detector fire.
pub fn star_exponential_ode(
    t_final: f64,
    grid: RadialGridSpec,
    dt: Option<f64>,
    params: &PhysParams,
) -> Result<OdeSolution, OscError> {
    // the closed form is singular at ωt = π; stop well before it
    if params.omega * t_final >= std::f64::consts::PI * 0.98 {
        return Err(OscError::Singular(params.omega * t_final));
    }
    let h_grid = grid.points();
    let step = grid.step();
    let kappa = (params.hbar * params.omega).powi(2) / 4.0;
    // spectral-radius estimate of the discrete generator
    let lambda = (grid.h_max / params.hbar) + kappa * grid.h_max * 4.0 / (step * step) / params.hbar;
    let dt_stable = 2.5 / lambda;
    let dt = dt.unwrap_or(dt_stable).min(t_final.max(1e-12));
    let steps = (t_final / dt).ceil() as usize;
    let dt = t_final / steps as f64;

    let n = h_grid.len();
    let mut y: Vec<C64> = vec![C64::new(1.0, 0.0); n];
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    for s in 0..steps {
        rhs(&y, &mut k1, &h_grid, step, params);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * dt * k1[j];
        }
        rhs(&tmp, &mut k2, &h_grid, step, params);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * dt * k2[j];
        }
        rhs(&tmp, &mut k3, &h_grid, step, params);
        for j in 0..n {
            tmp[j] = y[j] + dt * k3[j];
        }
        rhs(&tmp, &mut k4, &h_grid, step, params);
        for j in 0..n {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let magnitude = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !magnitude.is_finite() || magnitude > 1e6 {
            return Err(OscError::Blowup { t: (s + 1) as f64 * dt, magnitude });
        }
    }

    Ok(OdeSolution { h_grid, values: y, dt, steps, edge_stencil_warning: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::StarExponential;
    use crate::star::SchemeSpec;

    #[test]
    fn zero_time_is_the_constant_one() {
        let params = PhysParams::unit();
        let sol = star_exponential_ode(0.0, RadialGridSpec { n_points: 64, h_max: 4.0 }, None, &params)
            .unwrap();
        assert!(sol.values.iter().all(|v| (v - C64::new(1.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn matches_closed_form_at_short_time() {
        let params = PhysParams::unit();
        let grid = RadialGridSpec { n_points: 512, h_max: 6.0 };
        let sol = star_exponential_ode(0.1, grid, None, &params).unwrap();
        let se = StarExponential::new(SchemeSpec::Moyal, params);
        let mut worst: f64 = 0.0;
        for (j, &h) in sol.h_grid.iter().enumerate() {
            if h > 4.0 {
                break; // stay clear of the low-order edge
            }
            let closed = se.value_at_h(h, C64::new(0.1, 0.0)).unwrap();
            worst = worst.max((sol.values[j] - closed).norm() / closed.norm());
        }
        assert!(worst < 1e-5, "short-time relative error {worst}");
    }

    #[test]
    fn singular_target_time_is_rejected() {
        let params = PhysParams::unit();
        assert!(matches!(
            star_exponential_ode(
                std::f64::consts::PI,
                RadialGridSpec { n_points: 64, h_max: 4.0 },
                None,
                &params
            ),
            Err(OscError::Singular(_))
        ));
    }

    #[test]
    fn oversized_step_trips_the_blowup_detector() {
        let params = PhysParams::unit();
        let grid = RadialGridSpec { n_points: 512, h_max: 6.0 };
        let r = star_exponential_ode(0.3, grid, Some(1e-2), &params);
        assert!(matches!(r, Err(OscError::Blowup { .. })), "got {r:?}");
    }
}
