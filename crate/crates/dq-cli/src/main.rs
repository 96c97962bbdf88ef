//! `dq` — command-line surface for the deformation-quantization toolkit:
//! star products on parsed expressions, oscillator spectra and projectors,
//! Wigner grids and marginals, star-exponential evolution, propagator
//! kernels, the operator correspondence, and the verification suites.

mod output;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use dq_core::grid::{marginal, Axis, GridFunction, GridSpec};
use dq_core::kernel;
use dq_core::oscillator::{self, RadialGridSpec, StarExponential};
use dq_core::phase::{parse_expr, Basis, ParseError, PhasePoly, PhysParams};
use dq_core::star::{star_poly, SchemeSpec};
use dq_core::weyl::{self, OrderingSpec};

use output::{grid_csv, series_csv, to_json, JsonComplex};

#[derive(Parser)]
#[command(name = "dq", version, about = "Deformation quantization on flat phase space")]
struct Cli {
    /// Planck constant ħ.
    #[arg(long, global = true, env = "DQ_HBAR", default_value_t = 1.0)]
    hbar: f64,
    /// Particle mass m.
    #[arg(long, global = true, env = "DQ_MASS", default_value_t = 1.0)]
    mass: f64,
    /// Oscillator frequency ω.
    #[arg(long, global = true, env = "DQ_OMEGA", default_value_t = 1.0)]
    omega: f64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Moyal,
    Standard,
    Normal,
}

impl From<SchemeArg> for SchemeSpec {
    fn from(s: SchemeArg) -> SchemeSpec {
        match s {
            SchemeArg::Moyal => SchemeSpec::Moyal,
            SchemeArg::Standard => SchemeSpec::Standard,
            SchemeArg::Normal => SchemeSpec::Normal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Auto,
    Canonical,
    Holomorphic,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Q,
    P,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvolveMethod {
    Closed,
    Ode,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelMethod {
    Mehler,
    Slices,
    Eigen,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Weyl,
    Standard,
    Antistandard,
    Normal,
    Antinormal,
}

impl From<OrderingArg> for OrderingSpec {
    fn from(o: OrderingArg) -> OrderingSpec {
        match o {
            OrderingArg::Weyl => OrderingSpec::WeylCanonical,
            OrderingArg::Standard => OrderingSpec::Standard,
            OrderingArg::Antistandard => OrderingSpec::Antistandard,
            OrderingArg::Normal => OrderingSpec::Normal,
            OrderingArg::Antinormal => OrderingSpec::Antinormal,
        }
    }
}

/// Grid shape flags shared by the sampling commands.
#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 256)]
    nq: usize,
    #[arg(long, default_value_t = 256)]
    np: usize,
    /// Half-extent in q; default 8√(ħ/mω).
    #[arg(long)]
    lq: Option<f64>,
    /// Half-extent in p; default 8√(ħmω).
    #[arg(long)]
    lp: Option<f64>,
}

impl GridArgs {
    fn spec(&self, params: PhysParams) -> anyhow::Result<GridSpec> {
        let lq = self.lq.unwrap_or(8.0 * (params.hbar / (params.mass * params.omega)).sqrt());
        let lp = self.lp.unwrap_or(8.0 * (params.hbar * params.mass * params.omega).sqrt());
        Ok(GridSpec::new(self.nq, self.np, lq, lp, params)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two parsed expressions.
    Star {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_enum, default_value = "auto")]
        basis: BasisArg,
    },
    /// Oscillator spectrum with genvalue residuals.
    Spectrum {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long = "n-max")]
        n_max: u32,
    },
    /// Closed-form projector of the n-th state.
    Projector {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "moyal")]
        scheme: SchemeArg,
    },
    /// Wigner function of the n-th state on a grid (CSV).
    Wigner {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "moyal")]
        scheme: SchemeArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Position or momentum distribution of the n-th state (CSV).
    Marginal {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long, value_enum, default_value = "moyal")]
        scheme: SchemeArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Star exponential on a radial H-grid (CSV h,re,im).
    Evolve {
        #[arg(long, value_enum)]
        method: EvolveMethod,
        #[arg(long, value_enum, default_value = "moyal")]
        scheme: SchemeArg,
        #[arg(long)]
        t: f64,
        #[arg(long = "h-max", default_value_t = 9.0)]
        h_max: f64,
        #[arg(long = "n-points", default_value_t = 1536)]
        n_points: usize,
        /// Time step for the ODE method (stability-bounded default).
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Oscillator propagator kernel coefficients.
    Kernel {
        #[arg(long, value_enum)]
        method: KernelMethod,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 512)]
        slices: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q2: f64,
        #[arg(long = "n-max", default_value_t = 80)]
        n_max: u32,
        /// Negative imaginary time component for the eigenfunction sum.
        #[arg(long, default_value_t = 0.1)]
        damping: f64,
    },
    /// Operator image of an expression in the truncated number basis.
    Weyl {
        #[arg(long, value_enum)]
        ordering: OrderingArg,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value = "auto")]
        basis: BasisArg,
    },
    /// Compare the kernel Fourier transform with the star exponential.
    Bridge {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
    },
    /// Run a verification suite (or `all`).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Serialize)]
struct TermJson {
    e0: u32,
    e1: u32,
    coefficients: Vec<CoeffJson>,
}

#[derive(Serialize)]
struct CoeffJson {
    hbar_power: i32,
    re: f64,
    im: f64,
}

fn poly_terms(poly: &PhasePoly) -> Vec<TermJson> {
    poly.terms()
        .map(|(&(e0, e1), h)| TermJson {
            e0,
            e1,
            coefficients: h
                .iter()
                .map(|(k, c)| CoeffJson { hbar_power: k, re: c.re, im: c.im })
                .collect(),
        })
        .collect()
}

/// Parse an expression; `auto` tries the canonical chart first and falls
/// back to the holomorphic one on a wrong-basis identifier.
fn parse_in(text: &str, basis: BasisArg, scheme: SchemeSpec) -> Result<PhasePoly, ParseError> {
    match basis {
        BasisArg::Canonical => parse_expr(text, Basis::Canonical),
        BasisArg::Holomorphic => parse_expr(text, Basis::Holomorphic),
        BasisArg::Auto => {
            let preferred = if scheme == SchemeSpec::Normal {
                [Basis::Holomorphic, Basis::Canonical]
            } else {
                [Basis::Canonical, Basis::Holomorphic]
            };
            match parse_expr(text, preferred[0]) {
                Ok(p) => Ok(p),
                Err(ParseError::WrongBasis { .. }) => parse_expr(text, preferred[1]),
                Err(e) => Err(e),
            }
        }
    }
}

fn write_out(out: Option<&PathBuf>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {path:?}")),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn radial_points(h_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64 * h_max / (n.max(2) - 1) as f64).collect()
}

fn run(cli: Cli) -> anyhow::Result<Vec<u8>> {
    let params = PhysParams::new(cli.hbar, cli.mass, cli.omega)?;
    match cli.command {
        Command::Star { scheme, f, g, basis } => {
            let scheme: SchemeSpec = scheme.into();
            let f = parse_in(&f, basis, scheme)?;
            let g = parse_in(&g, basis, scheme)?;
            let result = star_poly(&f, &g, scheme, &params)?;
            #[derive(Serialize)]
            struct StarJson {
                scheme: &'static str,
                result: String,
                basis: String,
                terms: Vec<TermJson>,
            }
            to_json(&StarJson {
                scheme: scheme.name(),
                result: result.to_string(),
                basis: format!("{:?}", result.basis()).to_lowercase(),
                terms: poly_terms(&result),
            })
        }
        Command::Spectrum { scheme, n_max } => {
            let scheme: SchemeSpec = scheme.into();
            let lines = oscillator::spectrum(scheme, n_max, &params)?;
            #[derive(Serialize)]
            struct LineJson {
                n: u32,
                energy: f64,
                residual_norm: f64,
            }
            #[derive(Serialize)]
            struct SpectrumJson {
                scheme: &'static str,
                hbar: f64,
                omega: f64,
                lines: Vec<LineJson>,
            }
            to_json(&SpectrumJson {
                scheme: scheme.name(),
                hbar: params.hbar,
                omega: params.omega,
                lines: lines
                    .iter()
                    .map(|l| LineJson { n: l.n, energy: l.energy, residual_norm: l.residual })
                    .collect(),
            })
        }
        Command::Projector { n, scheme } => {
            let scheme: SchemeSpec = scheme.into();
            let pi = oscillator::projector(n, scheme)?;
            #[derive(Serialize)]
            struct ProjectorJson {
                n: u32,
                scheme: &'static str,
                mu: JsonComplex,
                prefactor: String,
                terms: Vec<TermJson>,
            }
            to_json(&ProjectorJson {
                n,
                scheme: scheme.name(),
                mu: pi.mu().into(),
                prefactor: pi.prefactor().to_string(),
                terms: poly_terms(pi.prefactor()),
            })
        }
        Command::Wigner { n, scheme, grid } => {
            let scheme: SchemeSpec = scheme.into();
            let spec = grid.spec(params)?;
            // radial closed form through the stable recurrence
            let q_pts = spec.q_points();
            let p_pts = spec.p_points();
            let mut values = Vec::with_capacity(spec.n_q * spec.n_p);
            for &q in &q_pts {
                for &p in &p_pts {
                    let aabar = spec.a_at(q, p).norm_sqr();
                    let v = oscillator::projector_value(n, scheme, aabar, params.hbar)?;
                    values.push(C64::new(v, 0.0));
                }
            }
            Ok(grid_csv(&GridFunction { spec, hbar: params.hbar, values }))
        }
        Command::Marginal { n, axis, scheme, grid } => {
            let scheme: SchemeSpec = scheme.into();
            let spec = grid.spec(params)?;
            let pi = oscillator::projector(n, scheme)?;
            let sampled = dq_core::grid::sample(&pi, &spec, params.hbar);
            let axis = match axis {
                AxisArg::Q => Axis::Q,
                AxisArg::P => Axis::P,
            };
            let m = marginal(&sampled, axis)?;
            let reals: Vec<f64> = m.values.iter().map(|v| v.re).collect();
            Ok(series_csv(&m.x, &reals))
        }
        Command::Evolve { method, scheme, t, h_max, n_points, dt } => {
            let scheme: SchemeSpec = scheme.into();
            match method {
                EvolveMethod::Closed => {
                    let se = StarExponential::new(scheme, params);
                    let h_grid = radial_points(h_max, n_points);
                    let values: Result<Vec<C64>, _> = h_grid
                        .iter()
                        .map(|&h| se.value_at_h(h, C64::new(t, 0.0)))
                        .collect();
                    Ok(output::complex_series_csv(&h_grid, &values?))
                }
                EvolveMethod::Ode => {
                    if scheme != SchemeSpec::Moyal {
                        return Err(anyhow!("the radial evolution equation is the Moyal one"));
                    }
                    let sol = oscillator::star_exponential_ode(
                        t,
                        RadialGridSpec { n_points, h_max },
                        dt,
                        &params,
                    )?;
                    Ok(output::complex_series_csv(&sol.h_grid, &sol.values))
                }
            }
        }
        Command::Kernel { method, t, slices, q1, q2, n_max, damping } => {
            #[derive(Serialize)]
            struct KernelJson {
                method: &'static str,
                t: f64,
                a: JsonComplex,
                b: JsonComplex,
                c: JsonComplex,
                n0: JsonComplex,
            }
            match method {
                KernelMethod::Mehler => {
                    let k = kernel::mehler_kernel(C64::new(t, 0.0), &params)?;
                    to_json(&KernelJson {
                        method: "mehler",
                        t,
                        a: k.a.into(),
                        b: k.b.into(),
                        c: k.c.into(),
                        n0: k.n0.into(),
                    })
                }
                KernelMethod::Slices => {
                    let k = kernel::slice_compose(t, slices, &params)?;
                    to_json(&KernelJson {
                        method: "slices",
                        t,
                        a: k.a.into(),
                        b: k.b.into(),
                        c: k.c.into(),
                        n0: k.n0.into(),
                    })
                }
                KernelMethod::Eigen => {
                    let tc = C64::new(t, -damping.abs());
                    let v = kernel::eigenfunction_kernel(tc, n_max, q1, q2, &params)?;
                    #[derive(Serialize)]
                    struct EigenJson {
                        method: &'static str,
                        t: f64,
                        damping: f64,
                        n_max: u32,
                        q1: f64,
                        q2: f64,
                        value: JsonComplex,
                    }
                    to_json(&EigenJson {
                        method: "eigen",
                        t,
                        damping: damping.abs(),
                        n_max,
                        q1,
                        q2,
                        value: v.into(),
                    })
                }
            }
        }
        Command::Weyl { ordering, dim, f, basis } => {
            let ordering: OrderingSpec = ordering.into();
            let poly = parse_in(&f, basis, SchemeSpec::Moyal)?;
            let op = weyl::theta_order(&poly, ordering, dim, &params)?;
            #[derive(Serialize)]
            struct WeylJson {
                ordering: String,
                dim: usize,
                /// Row-major complex entries.
                entries: Vec<Vec<JsonComplex>>,
            }
            let entries = (0..dim)
                .map(|r| (0..dim).map(|c| op.get(r, c).into()).collect())
                .collect();
            to_json(&WeylJson { ordering: format!("{ordering:?}"), dim, entries })
        }
        Command::Bridge { t, q, p } => {
            let kernel_value = kernel::kernel_to_phase(C64::new(t, 0.0), q, p, &params)?;
            let h = oscillator::hamiltonian(&params)
                .evaluate((C64::new(q, 0.0), C64::new(p, 0.0)), params.hbar)
                .re;
            let closed_value =
                StarExponential::new(SchemeSpec::Moyal, params).value_at_h(h, C64::new(t, 0.0))?;
            #[derive(Serialize)]
            struct BridgeJson {
                t: f64,
                q: f64,
                p: f64,
                energy: f64,
                kernel_value: JsonComplex,
                closed_value: JsonComplex,
                abs_diff: f64,
            }
            to_json(&BridgeJson {
                t,
                q,
                p,
                energy: h,
                kernel_value: kernel_value.into(),
                closed_value: closed_value.into(),
                abs_diff: (kernel_value - closed_value).norm(),
            })
        }
        Command::Verify { suite } => {
            let report = if suite == "all" {
                verify::run_all(&params)
            } else {
                let single = verify::run_suite(&suite, &params).ok_or_else(|| {
                    anyhow!(
                        "unknown suite `{suite}` (available: {}, all)",
                        verify::SUITE_NAMES.join(", ")
                    )
                })?;
                verify::VerifyReport { passed: single.passed, suites: vec![single] }
            };
            let passed = report.passed;
            let bytes = to_json(&report)?;
            if !passed {
                // report goes out before the failure exit
                write_out(None, &bytes)?;
                return Err(anyhow!("verification failed"));
            }
            Ok(bytes)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(bytes) => {
            if let Err(e) = write_out(out.as_ref(), &bytes) {
                eprintln!("error: {e:#}");
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<ParseError>().is_some() { 2 } else { 1 };
            std::process::exit(code);
        }
    }
}
