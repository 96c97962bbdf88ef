//! Numerical phase-space layer: uniform (q,p) grids, quadrature, Wigner
//! marginals, and grid star products used as numeric oracles for the
//! closed-form engines.

mod fft;

pub use fft::SpectralField;

use thiserror::Error;

use crate::phase::{to_canonical, Basis, PhaseError, PhasePoly, PhysParams};
use crate::star::{BoppOperator, GaussianPoly, StarError};
use crate::C64;

/// Relative boundary mass above which quadrature refuses to integrate.
pub const BOUNDARY_DECAY_THRESHOLD: f64 = 1e-10;
/// Relative Nyquist mass above which spectral differentiation refuses to run.
pub const ALIASING_THRESHOLD: f64 = 1e-8;
/// Hard cap on the star-series truncation order.
pub const MAX_SERIES_ORDER: u32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("{0}")]
    InvalidSpec(String),
    #[error("grid shapes differ: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("function does not decay at the grid boundary: relative mass {0:.3e} exceeds {BOUNDARY_DECAY_THRESHOLD:.0e}")]
    BoundaryDecay(f64),
    #[error("operand is not band-limited on this grid: relative Nyquist mass {0:.3e} exceeds {ALIASING_THRESHOLD:.0e}")]
    Aliasing(f64),
    #[error("series order {0} exceeds the cap {MAX_SERIES_ORDER}")]
    OrderCap(u32),
    #[error("star series diverging at order {order}: last per-order norms {recent:?}")]
    SeriesDivergence { order: u32, recent: Vec<f64> },
}

/// Uniform rectangular sampling of phase space: N points per axis on
/// [−L, L), periodic convention (the +L endpoint is the wrap-around).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_q: usize,
    pub n_p: usize,
    pub l_q: f64,
    pub l_p: f64,
    pub params: PhysParams,
}

impl GridSpec {
    pub fn new(
        n_q: usize,
        n_p: usize,
        l_q: f64,
        l_p: f64,
        params: PhysParams,
    ) -> Result<Self, GridError> {
        for n in [n_q, n_p] {
            if n < 16 || !n.is_power_of_two() {
                return Err(GridError::InvalidSpec(format!(
                    "grid size {n} must be a power of two and at least 16"
                )));
            }
        }
        if !(l_q > 0.0) || !(l_p > 0.0) {
            return Err(GridError::InvalidSpec("grid half-extents must be positive".into()));
        }
        Ok(GridSpec { n_q, n_p, l_q, l_p, params })
    }

    /// N = 256 and L = 8√(ħ/mω) per axis: covers the first several
    /// oscillator states with negligible boundary mass.
    pub fn default_for(params: PhysParams) -> Self {
        let l = 8.0 * (params.hbar / (params.mass * params.omega)).sqrt();
        GridSpec { n_q: 256, n_p: 256, l_q: l, l_p: l * params.mass * params.omega, params }
    }

    pub fn h_q(&self) -> f64 {
        2.0 * self.l_q / self.n_q as f64
    }

    pub fn h_p(&self) -> f64 {
        2.0 * self.l_p / self.n_p as f64
    }

    pub fn q_points(&self) -> Vec<f64> {
        (0..self.n_q).map(|i| -self.l_q + i as f64 * self.h_q()).collect()
    }

    pub fn p_points(&self) -> Vec<f64> {
        (0..self.n_p).map(|i| -self.l_p + i as f64 * self.h_p()).collect()
    }

    /// Holomorphic coordinate of a grid point.
    pub fn a_at(&self, q: f64, p: f64) -> C64 {
        let mw = self.params.mass * self.params.omega;
        (mw / 2.0).sqrt() * C64::new(q, p / mw)
    }
}

/// Complex samples on a [`GridSpec`], row-major with p fastest.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub spec: GridSpec,
    /// ħ value the samples were produced with.
    pub hbar: f64,
    pub values: Vec<C64>,
}

/// Which axis a marginal keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q,
    P,
}

impl std::str::FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "q" => Ok(Axis::Q),
            "p" => Ok(Axis::P),
            other => Err(format!("unknown axis `{other}` (expected q|p)")),
        }
    }
}

/// A one-dimensional marginal: kept-axis sample points and densities.
#[derive(Debug, Clone)]
pub struct Marginal {
    pub axis: Axis,
    pub x: Vec<f64>,
    pub values: Vec<C64>,
}

impl GridFunction {
    pub fn index(&self, iq: usize, ip: usize) -> usize {
        iq * self.spec.n_p + ip
    }

    pub fn at(&self, iq: usize, ip: usize) -> C64 {
        self.values[self.index(iq, ip)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |value| on the outermost ring.
    pub fn boundary_mass(&self) -> f64 {
        let (nq, np) = (self.spec.n_q, self.spec.n_p);
        let mut worst: f64 = 0.0;
        for iq in 0..nq {
            worst = worst.max(self.at(iq, 0).norm()).max(self.at(iq, np - 1).norm());
        }
        for ip in 0..np {
            worst = worst.max(self.at(0, ip).norm()).max(self.at(nq - 1, ip).norm());
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64, GridError> {
        if self.spec.n_q != other.spec.n_q || self.spec.n_p != other.spec.n_p {
            return Err(GridError::ShapeMismatch(
                self.spec.n_q,
                self.spec.n_p,
                other.spec.n_q,
                other.spec.n_p,
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// What can be sampled onto a grid.
pub enum SampleSource<'a> {
    Poly(&'a PhasePoly),
    Gaussian(&'a GaussianPoly),
}

impl<'a> From<&'a PhasePoly> for SampleSource<'a> {
    fn from(p: &'a PhasePoly) -> Self {
        SampleSource::Poly(p)
    }
}

impl<'a> From<&'a GaussianPoly> for SampleSource<'a> {
    fn from(g: &'a GaussianPoly) -> Self {
        SampleSource::Gaussian(g)
    }
}

/// Pointwise evaluation on the grid, with ħ bound to `hbar_value`.
pub fn sample<'a>(
    f: impl Into<SampleSource<'a>>,
    spec: &GridSpec,
    hbar_value: f64,
) -> GridFunction {
    let source = f.into();
    let q_pts = spec.q_points();
    let p_pts = spec.p_points();
    let mut values = Vec::with_capacity(spec.n_q * spec.n_p);
    for &q in &q_pts {
        for &p in &p_pts {
            let v = match &source {
                SampleSource::Poly(poly) => match poly.basis() {
                    Basis::Canonical => poly.evaluate((C64::new(q, 0.0), C64::new(p, 0.0)), hbar_value),
                    Basis::Holomorphic => {
                        let a = spec.a_at(q, p);
                        poly.evaluate((a, a.conj()), hbar_value)
                    }
                },
                SampleSource::Gaussian(g) => g.evaluate(spec.a_at(q, p), hbar_value),
            };
            values.push(v);
        }
    }
    GridFunction { spec: *spec, hbar: hbar_value, values }
}

fn check_boundary(f: &GridFunction) -> Result<(), GridError> {
    let scale = f.max_abs();
    if scale == 0.0 {
        return Ok(());
    }
    let rel = f.boundary_mass() / scale;
    if rel > BOUNDARY_DECAY_THRESHOLD {
        return Err(GridError::BoundaryDecay(rel));
    }
    Ok(())
}

/// (1/2πħ) ∬ f dq dp with uniform periodic weights.
pub fn integrate(f: &GridFunction) -> Result<C64, GridError> {
    check_boundary(f)?;
    let sum: C64 = f.values.iter().sum();
    Ok(sum * f.spec.h_q() * f.spec.h_p() / (2.0 * std::f64::consts::PI * f.hbar))
}

/// (1/2πħ) ∬ q^eq p^ep f dq dp.
pub fn weighted_moment(f: &GridFunction, eq: u32, ep: u32) -> Result<C64, GridError> {
    check_boundary(f)?;
    let q_pts = f.spec.q_points();
    let p_pts = f.spec.p_points();
    let mut acc = C64::new(0.0, 0.0);
    for (iq, &q) in q_pts.iter().enumerate() {
        let wq = q.powi(eq as i32);
        for (ip, &p) in p_pts.iter().enumerate() {
            acc += f.at(iq, ip) * wq * p.powi(ep as i32);
        }
    }
    Ok(acc * f.spec.h_q() * f.spec.h_p() / (2.0 * std::f64::consts::PI * f.hbar))
}

/// Integrate out the other axis: the kept-axis probability density,
/// (1/2πħ)-weighted as in the trace normalization.
pub fn marginal(f: &GridFunction, axis: Axis) -> Result<Marginal, GridError> {
    check_boundary(f)?;
    let weight = 1.0 / (2.0 * std::f64::consts::PI * f.hbar);
    match axis {
        Axis::Q => {
            let x = f.spec.q_points();
            let mut values = Vec::with_capacity(f.spec.n_q);
            for iq in 0..f.spec.n_q {
                let sum: C64 = (0..f.spec.n_p).map(|ip| f.at(iq, ip)).sum();
                values.push(sum * f.spec.h_p() * weight);
            }
            Ok(Marginal { axis, x, values })
        }
        Axis::P => {
            let x = f.spec.p_points();
            let mut values = Vec::with_capacity(f.spec.n_p);
            for ip in 0..f.spec.n_p {
                let sum: C64 = (0..f.spec.n_q).map(|iq| f.at(iq, ip)).sum();
                values.push(sum * f.spec.h_q() * weight);
            }
            Ok(Marginal { axis, x, values })
        }
    }
}

/// Polynomial ⋆ grid function through the shift operator, with the
/// derivatives applied spectrally.
pub fn grid_star_poly(f: &PhasePoly, g: &GridFunction) -> Result<GridFunction, GridError> {
    let f_canonical = to_canonical(f, &g.spec.params)?;
    let op = BoppOperator::from_poly(&f_canonical)?;

    let field = SpectralField::analyze(&g.values, g.spec.n_q, g.spec.n_p, g.spec.l_q, g.spec.l_p);
    let nyquist = field.nyquist_mass() / field.max_hat().max(f64::MIN_POSITIVE);
    if nyquist > ALIASING_THRESHOLD {
        return Err(GridError::Aliasing(nyquist));
    }

    let mut out = vec![C64::new(0.0, 0.0); g.values.len()];
    let q_pts = g.spec.q_points();
    let p_pts = g.spec.p_points();
    for (&(dq, dp), coeff) in op.terms() {
        let deriv = field.derivative(dq, dp);
        for (iq, &q) in q_pts.iter().enumerate() {
            for (ip, &p) in p_pts.iter().enumerate() {
                let idx = iq * g.spec.n_p + ip;
                let c = coeff.evaluate((C64::new(q, 0.0), C64::new(p, 0.0)), g.hbar);
                out[idx] += c * deriv[idx];
            }
        }
    }
    Ok(GridFunction { spec: g.spec, hbar: g.hbar, values: out })
}

/// Configuration of the truncated-series grid product.
#[derive(Debug, Clone, Copy)]
pub struct SeriesConfig {
    /// Truncation: all terms with m + n ≤ order are summed.
    pub order: u32,
    /// Spectral modes below this fraction of the peak are zeroed before
    /// differentiation (high-order derivatives amplify rounding noise at
    /// the band edge into garbage otherwise). The order-0 term always uses
    /// the raw samples.
    pub spectral_floor: f64,
    /// When false, a detected divergence is reported in the result instead
    /// of aborting.
    pub abort_on_divergence: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { order: MAX_SERIES_ORDER, spectral_floor: 1e-13, abort_on_divergence: true }
    }
}

/// Result of the truncated series: values, per-order contribution norms and
/// a tail estimate (the last order's norm).
#[derive(Debug, Clone)]
pub struct SeriesProduct {
    pub values: GridFunction,
    pub order_norms: Vec<f64>,
    pub tail_estimate: f64,
    pub diverging: bool,
}

/// Truncated Moyal series of two grid functions: partial sums of
/// Σ (iħ/2)^{m+n} (−1)^m/(m!n!) (∂p^m ∂q^n f)(∂p^n ∂q^m g)
/// grouped by total order m+n, with spectral derivatives.
pub fn grid_star_series(
    f: &GridFunction,
    g: &GridFunction,
    config: SeriesConfig,
) -> Result<SeriesProduct, GridError> {
    if config.order > MAX_SERIES_ORDER {
        return Err(GridError::OrderCap(config.order));
    }
    if f.spec.n_q != g.spec.n_q || f.spec.n_p != g.spec.n_p {
        return Err(GridError::ShapeMismatch(f.spec.n_q, f.spec.n_p, g.spec.n_q, g.spec.n_p));
    }
    // spectral derivatives assume periodic continuation, so both operands
    // must have decayed by the boundary
    check_boundary(f)?;
    check_boundary(g)?;
    let n = f.values.len();
    let hbar = g.hbar;

    // order 0 is the plain pointwise product, bit-for-bit
    let mut acc: Vec<C64> = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    let mut order_norms =
        vec![acc.iter().map(|v| v.norm()).fold(0.0, f64::max)];

    let mut ff = SpectralField::analyze(&f.values, f.spec.n_q, f.spec.n_p, f.spec.l_q, f.spec.l_p);
    let mut gf = SpectralField::analyze(&g.values, g.spec.n_q, g.spec.n_p, g.spec.l_q, g.spec.l_p);
    ff.apply_floor(config.spectral_floor * ff.max_hat());
    gf.apply_floor(config.spectral_floor * gf.max_hat());

    let factorial = |k: u32| -> f64 { (1..=k).map(|v| v as f64).product() };
    let mut diverging = false;

    for s in 1..=config.order {
        let mut term_total = vec![C64::new(0.0, 0.0); n];
        for m in 0..=s {
            let n_ord = s - m;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let scalar = C64::new(0.0, hbar / 2.0).powu(s) * sign
                / (factorial(m) * factorial(n_ord));
            let df = ff.derivative(n_ord, m); // ∂q^n ∂p^m f
            let dg = gf.derivative(m, n_ord); // ∂q^m ∂p^n g
            for idx in 0..n {
                term_total[idx] += scalar * df[idx] * dg[idx];
            }
        }
        let norm = term_total.iter().map(|v| v.norm()).fold(0.0, f64::max);
        order_norms.push(norm);
        for idx in 0..n {
            acc[idx] += term_total[idx];
        }
        // three consecutive growing orders above the running sum signal
        // divergence rather than roundoff wiggle
        if s >= 3 {
            let k = order_norms.len();
            let growing = order_norms[k - 1] > order_norms[k - 2]
                && order_norms[k - 2] > order_norms[k - 3];
            let sum_scale = acc.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if growing && order_norms[k - 1] > sum_scale {
                if config.abort_on_divergence {
                    return Err(GridError::SeriesDivergence {
                        order: s,
                        recent: order_norms[k.saturating_sub(4)..].to_vec(),
                    });
                }
                diverging = true;
            }
        }
    }

    let tail_estimate = *order_norms.last().unwrap_or(&0.0);
    Ok(SeriesProduct {
        values: GridFunction { spec: f.spec, hbar, values: acc },
        order_norms,
        tail_estimate,
        diverging,
    })
}
