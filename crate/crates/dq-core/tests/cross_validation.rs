//! Cross-module checks: the numeric layer against the exact layer.

use num_complex::Complex64 as C64;

use dq_core::grid::{integrate, marginal, sample, Axis, GridSpec};
use dq_core::oscillator::{
    phase_space_integral, projector, star_exponential_ode, PeriodSamples, RadialGridSpec,
    StarExponential,
};
use dq_core::phase::{parse_expr, Basis, PhysParams};
use dq_core::star::{GaussianPoly, SchemeSpec};

fn unit() -> PhysParams {
    PhysParams::unit()
}

#[test]
fn quadrature_matches_gaussian_moments() {
    // Gaussian-times-polynomial integrands against the closed moments
    let params = unit();
    let spec = GridSpec::new(256, 256, 8.0, 8.0, params).unwrap();
    for (expr, mu) in [
        ("1", -2.0),
        ("a*abar", -2.0),
        ("a^2*abar^2", -1.0),
        ("1 + 4*a*abar", -1.5),
    ] {
        let prefactor = parse_expr(expr, Basis::Holomorphic).unwrap();
        let g = GaussianPoly::new(prefactor, C64::new(mu, 0.0)).unwrap();
        let closed = phase_space_integral(&g, params.hbar).unwrap();
        let grid_val = integrate(&sample(&g, &spec, params.hbar)).unwrap();
        assert!(
            (closed - grid_val).norm() < 1e-10 * (1.0 + closed.norm()),
            "{expr} with mu={mu}: {closed} vs {grid_val}"
        );
    }
}

#[test]
fn moyal_marginals_are_normalized_probability_densities() {
    let params = unit();
    let spec = GridSpec::default_for(params);
    for n in 0..=5u32 {
        let pi = projector(n, SchemeSpec::Moyal).unwrap();
        let g = sample(&pi, &spec, params.hbar);
        for axis in [Axis::Q, Axis::P] {
            let m = marginal(&g, axis).unwrap();
            let step = m.x[1] - m.x[0];
            let total: C64 = m.values.iter().sum::<C64>() * step;
            assert!(
                (total - C64::new(1.0, 0.0)).norm() < 1e-8,
                "n={n} {axis:?}: marginal mass {total}"
            );
            // a probability density is real within roundoff
            let max_im = m.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            assert!(max_im < 1e-12);
        }
    }
}

#[test]
fn ode_integration_matches_the_closed_star_exponential() {
    let params = unit();
    let t = 0.3;
    let sol = star_exponential_ode(t, RadialGridSpec::default(), None, &params).unwrap();
    let se = StarExponential::new(SchemeSpec::Moyal, params);
    let mut worst: f64 = 0.0;
    for (j, &h) in sol.h_grid.iter().enumerate() {
        if h > 6.0 {
            break;
        }
        let closed = se.value_at_h(h, C64::new(t, 0.0)).unwrap();
        worst = worst.max((sol.values[j] - closed).norm() / closed.norm());
    }
    assert!(worst < 1e-6, "relative deviation {worst}");
}

#[test]
fn ode_solution_stays_on_the_unit_modulus_shell() {
    // the closed form has |E| = |sec(ωt/2)| independent of H; the
    // integrator must preserve that structure away from the edge
    let params = unit();
    let t = 0.3;
    let sol = star_exponential_ode(t, RadialGridSpec::default(), None, &params).unwrap();
    let expect = 1.0 / (0.5 * t).cos();
    for (j, &h) in sol.h_grid.iter().enumerate() {
        if h > 6.0 {
            break;
        }
        let m = sol.values[j].norm();
        assert!((m - expect).abs() < 1e-6, "H={h}: modulus {m} vs {expect}");
    }
}

#[test]
fn star_exponential_samples_recover_higher_projectors() {
    let params = unit();
    let se = StarExponential::new(SchemeSpec::Moyal, params);
    let h_grid: Vec<f64> = (0..161).map(|j| j as f64 * 8.0 / 160.0).collect();
    let samples = PeriodSamples::from_star_exponential(&se, h_grid.clone(), 1024, 0.05).unwrap();
    for n in 0..=5u32 {
        let e = (n as f64 + 0.5) * params.hbar * params.omega;
        let proj = samples.fd_project(e).unwrap();
        let mut diff = Vec::with_capacity(h_grid.len());
        for (k, &h) in h_grid.iter().enumerate() {
            let reference =
                dq_core::oscillator::projector_value(n, SchemeSpec::Moyal, h, params.hbar).unwrap();
            diff.push(proj[k] - C64::new(reference, 0.0));
        }
        let err = samples.l2_norm(&diff);
        let norm = dq_core::oscillator::pi0_norm_on_grid(SchemeSpec::Moyal, &h_grid, &params).unwrap();
        assert!(err < 1e-8 * norm, "n={n}: L² residual {err}");
    }
}
