//! The correspondence between phase-space functions and operators on the
//! truncated oscillator number basis: five orderings, the inverse (symbol)
//! transform, coherent-state symbols, and the star/operator homomorphism
//! check used as the operator-side oracle of the whole crate.

use ndarray::Array2;
use thiserror::Error;

use crate::grid::{GridFunction, GridSpec};
use crate::oscillator::orthopoly::oscillator_psi;
use crate::phase::{to_canonical, to_holomorphic, Basis, PhaseError, PhasePoly, PhysParams};
use crate::star::{star_poly, SchemeSpec, StarError};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeylError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("Fock dimension {0} too small (need at least 2)")]
    DimTooSmall(usize),
    #[error("polynomial degree {degree} does not fit in Fock dimension {dim}")]
    DegreeExceedsDim { degree: u32, dim: usize },
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimMismatch(usize, usize),
}

/// Dense complex matrix in the truncated number basis |0⟩..|D−1⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    data: Array2<C64>,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        FockMatrix { data: Array2::from_elem((dim, dim), C64::new(0.0, 0.0)) }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for n in 0..dim {
            m.data[(n, n)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// |n⟩⟨n|.
    pub fn number_projector(n: usize, dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.data[(n, n)] = C64::new(1.0, 0.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.data[(row, col)] = v;
    }

    pub fn mul(&self, rhs: &FockMatrix) -> Result<FockMatrix, WeylError> {
        if self.dim() != rhs.dim() {
            return Err(WeylError::DimMismatch(self.dim(), rhs.dim()));
        }
        Ok(FockMatrix { data: self.data.dot(&rhs.data) })
    }

    pub fn add(&self, rhs: &FockMatrix) -> Result<FockMatrix, WeylError> {
        if self.dim() != rhs.dim() {
            return Err(WeylError::DimMismatch(self.dim(), rhs.dim()));
        }
        Ok(FockMatrix { data: &self.data + &rhs.data })
    }

    pub fn sub(&self, rhs: &FockMatrix) -> Result<FockMatrix, WeylError> {
        if self.dim() != rhs.dim() {
            return Err(WeylError::DimMismatch(self.dim(), rhs.dim()));
        }
        Ok(FockMatrix { data: &self.data - &rhs.data })
    }

    pub fn scale(&self, c: C64) -> FockMatrix {
        FockMatrix { data: self.data.mapv(|v| v * c) }
    }

    pub fn adjoint(&self) -> FockMatrix {
        FockMatrix { data: self.data.t().mapv(|v| v.conj()) }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|n| self.data[(n, n)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |entry| on the top-left k×k block.
    pub fn max_abs_block(&self, k: usize) -> f64 {
        let k = k.min(self.dim());
        let mut worst: f64 = 0.0;
        for r in 0..k {
            for c in 0..k {
                worst = worst.max(self.data[(r, c)].norm());
            }
        }
        worst
    }

    /// Fraction of the Frobenius mass carried by the last row and column.
    pub fn trailing_weight(&self) -> f64 {
        let d = self.dim();
        let total: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0;
        for k in 0..d {
            edge += self.data[(d - 1, k)].norm_sqr();
            edge += self.data[(k, d - 1)].norm_sqr();
        }
        edge -= self.data[(d - 1, d - 1)].norm_sqr();
        edge / total
    }
}

/// The ladder and Schrödinger operators on the truncated basis.
#[derive(Debug, Clone)]
pub struct FockOps {
    pub annihilate: FockMatrix,
    pub create: FockMatrix,
    pub position: FockMatrix,
    pub momentum: FockMatrix,
    /// ω/2 (ââ† + â†â), the Weyl-ordered Hamiltonian.
    pub hamiltonian: FockMatrix,
}

/// Build â, â†, Q̂, P̂ and Ĥ at Fock dimension `dim`.
///
/// The ladder operators carry the ħ-scaled normalization â|n⟩ = √(ħn)|n−1⟩,
/// matching the ħ-valued star commutator of the holomorphic variables.
pub fn fock_operators(params: &PhysParams, dim: usize) -> Result<FockOps, WeylError> {
    if dim < 2 {
        return Err(WeylError::DimTooSmall(dim));
    }
    let mut annihilate = FockMatrix::zeros(dim);
    for n in 1..dim {
        annihilate.set(n - 1, n, C64::new((params.hbar * n as f64).sqrt(), 0.0));
    }
    let create = annihilate.adjoint();
    let mw = params.mass * params.omega;
    let position = annihilate.add(&create)?.scale(C64::new(1.0 / (2.0 * mw).sqrt(), 0.0));
    let momentum = annihilate.sub(&create)?.scale(C64::new(0.0, -(mw / 2.0).sqrt()));
    let hamiltonian = annihilate
        .mul(&create)?
        .add(&create.mul(&annihilate)?)?
        .scale(C64::new(params.omega / 2.0, 0.0));
    Ok(FockOps { annihilate, create, position, momentum, hamiltonian })
}

/// Operator ordering. The canonical family is parametrized by γ ∈ {−1,0,+1}
/// (standard, Weyl, antistandard), the holomorphic family by α ∈ {−1,0,+1}
/// (antinormal, Weyl, normal). The two Weyl points denote the same map and
/// are kept separate only to exercise that fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingSpec {
    /// γ = −1: q^m p^n ↦ Q̂^m P̂^n.
    Standard,
    /// γ = +1: q^m p^n ↦ P̂^n Q̂^m.
    Antistandard,
    /// γ = 0: symmetric average over all interleavings.
    WeylCanonical,
    /// α = +1: a^m ā^n ↦ â†ⁿ âᵐ.
    Normal,
    /// α = −1: a^m ā^n ↦ âᵐ â†ⁿ.
    Antinormal,
    /// α = 0: symmetric average in the ladder operators.
    WeylHolomorphic,
}

impl OrderingSpec {
    /// Chart whose monomials the ordering rule consumes.
    pub fn family(self) -> Basis {
        match self {
            OrderingSpec::Standard | OrderingSpec::Antistandard | OrderingSpec::WeylCanonical => {
                Basis::Canonical
            }
            _ => Basis::Holomorphic,
        }
    }

    /// The implemented star product this ordering intertwines with through
    /// Θ(f)Θ(g) = Θ(f ⋆ g), when there is one.
    ///
    /// The ⋆-kernel e^{iħ ←∂q →∂p} puts the momentum factors on the left of
    /// an ordered product (check it on Θ(q)Θ(p) against Θ(q ⋆ p)), so its
    /// partner is the antistandard ordering; the standard (Q̂-left) ordering
    /// pairs with the transposed kernel, which is not one of the three
    /// implemented products. Likewise the antinormal partner product is not
    /// implemented.
    pub fn matching_scheme(self) -> Option<SchemeSpec> {
        match self {
            OrderingSpec::WeylCanonical | OrderingSpec::WeylHolomorphic => Some(SchemeSpec::Moyal),
            OrderingSpec::Normal => Some(SchemeSpec::Normal),
            OrderingSpec::Antistandard => Some(SchemeSpec::Standard),
            OrderingSpec::Standard | OrderingSpec::Antinormal => None,
        }
    }
}

/// The three certified (ordering, star product) homomorphism pairs.
pub fn certified_pairings() -> [(OrderingSpec, SchemeSpec); 3] {
    [
        (OrderingSpec::WeylCanonical, SchemeSpec::Moyal),
        (OrderingSpec::Normal, SchemeSpec::Normal),
        (OrderingSpec::Antistandard, SchemeSpec::Standard),
    ]
}

impl std::str::FromStr for OrderingSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(OrderingSpec::Standard),
            "antistandard" => Ok(OrderingSpec::Antistandard),
            "weyl" => Ok(OrderingSpec::WeylCanonical),
            "normal" => Ok(OrderingSpec::Normal),
            "antinormal" => Ok(OrderingSpec::Antinormal),
            other => Err(format!(
                "unknown ordering `{other}` (expected weyl|standard|antistandard|normal|antinormal)"
            )),
        }
    }
}

/// Symmetrized product of m copies of `x` and n copies of `y`, built by the
/// halving recursion W(m,n) = ½[x W(m−1,n) + W(m−1,n) x], W(0,n) = yⁿ.
fn weyl_monomial(
    x: &FockMatrix,
    y: &FockMatrix,
    m: u32,
    n: u32,
) -> Result<FockMatrix, WeylError> {
    let mut acc = FockMatrix::identity(x.dim());
    for _ in 0..n {
        acc = acc.mul(y)?;
    }
    for _ in 0..m {
        let left = x.mul(&acc)?;
        let right = acc.mul(x)?;
        acc = left.add(&right)?.scale(C64::new(0.5, 0.0));
    }
    Ok(acc)
}

fn power(x: &FockMatrix, n: u32) -> Result<FockMatrix, WeylError> {
    let mut acc = FockMatrix::identity(x.dim());
    for _ in 0..n {
        acc = acc.mul(x)?;
    }
    Ok(acc)
}

/// Monomial-wise ordering map: phase-space polynomial → Fock operator,
/// with ħ bound to its numeric value.
pub fn theta_order(
    f: &PhasePoly,
    ordering: OrderingSpec,
    dim: usize,
    params: &PhysParams,
) -> Result<FockMatrix, WeylError> {
    if dim < 2 {
        return Err(WeylError::DimTooSmall(dim));
    }
    let f = match ordering.family() {
        Basis::Canonical => to_canonical(f, params)?,
        Basis::Holomorphic => to_holomorphic(f, params)?,
    };
    if f.total_degree() as usize >= dim {
        return Err(WeylError::DegreeExceedsDim { degree: f.total_degree(), dim });
    }
    let ops = fock_operators(params, dim)?;
    let mut out = FockMatrix::zeros(dim);
    for (&(e0, e1), h) in f.terms() {
        let c = h.eval(params.hbar);
        let block = match ordering {
            OrderingSpec::Standard => power(&ops.position, e0)?.mul(&power(&ops.momentum, e1)?)?,
            OrderingSpec::Antistandard => {
                power(&ops.momentum, e1)?.mul(&power(&ops.position, e0)?)?
            }
            OrderingSpec::WeylCanonical => weyl_monomial(&ops.position, &ops.momentum, e0, e1)?,
            OrderingSpec::Normal => power(&ops.create, e1)?.mul(&power(&ops.annihilate, e0)?)?,
            OrderingSpec::Antinormal => {
                power(&ops.annihilate, e0)?.mul(&power(&ops.create, e1)?)?
            }
            OrderingSpec::WeylHolomorphic => {
                weyl_monomial(&ops.annihilate, &ops.create, e0, e1)?
            }
        };
        out = out.add(&block.scale(c))?;
    }
    Ok(out)
}

/// Result of the inverse (Weyl-symbol) transform.
#[derive(Debug, Clone)]
pub struct WeylSymbol {
    pub values: GridFunction,
    /// Frobenius fraction of the operator living on the truncation edge.
    pub trailing_weight: f64,
    /// True when the trailing weight exceeds 1e−8, i.e. the symbol may be
    /// contaminated by the cut basis.
    pub contaminated: bool,
}

/// Weyl symbol of an operator: f(q,p) = ∫⟨q+ξ/2|op|q−ξ/2⟩ e^{−iξp/ħ} dξ,
/// evaluated with Hermite-function position wavefunctions and trapezoid
/// quadrature in ξ.
pub fn weyl_symbol(
    op: &FockMatrix,
    grid: &GridSpec,
    params: &PhysParams,
) -> Result<WeylSymbol, WeylError> {
    let dim = op.dim();
    let trailing_weight = op.trailing_weight();
    let q_pts = grid.q_points();
    let p_pts = grid.p_points();

    // wavefunction support plus the widest sampled q, with generous margin
    // for the slowly decaying Christoffel-Darboux tails
    let turning = (params.hbar * (2.0 * dim as f64 + 1.0) / (params.mass * params.omega)).sqrt();
    let xi_max = 2.0 * (turning + grid.l_q) + 8.0;
    // bandwidth: sampled momenta plus the classical momentum at the edge state
    let k_max = grid.l_p / params.hbar
        + ((2.0 * dim as f64 + 1.0) * params.mass * params.omega / params.hbar).sqrt();
    let n_xi = ((2.0 * xi_max * k_max / std::f64::consts::PI * 3.0).ceil() as usize)
        .next_power_of_two()
        .max(256);
    let d_xi = 2.0 * xi_max / n_xi as f64;

    let mut values = vec![C64::new(0.0, 0.0); grid.n_q * grid.n_p];
    let mut psi_plus = vec![0.0; dim];
    let mut psi_minus = vec![0.0; dim];
    for (iq, &q) in q_pts.iter().enumerate() {
        // u(ξ) = ⟨q+ξ/2| op |q−ξ/2⟩ on the ξ grid
        let mut u = vec![C64::new(0.0, 0.0); n_xi];
        for (j, u_j) in u.iter_mut().enumerate() {
            let xi = -xi_max + j as f64 * d_xi;
            for m in 0..dim {
                psi_plus[m] = oscillator_psi(m as u32, q + 0.5 * xi, params);
                psi_minus[m] = oscillator_psi(m as u32, q - 0.5 * xi, params);
            }
            let mut acc = C64::new(0.0, 0.0);
            for m in 0..dim {
                if psi_plus[m] == 0.0 {
                    continue;
                }
                let mut row = C64::new(0.0, 0.0);
                for n in 0..dim {
                    row += op.get(m, n) * psi_minus[n];
                }
                acc += psi_plus[m] * row;
            }
            *u_j = acc;
        }
        for (ip, &p) in p_pts.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, &u_j) in u.iter().enumerate() {
                let xi = -xi_max + j as f64 * d_xi;
                acc += u_j * (C64::new(0.0, -xi * p / params.hbar)).exp();
            }
            values[iq * grid.n_p + ip] = acc * d_xi;
        }
    }
    Ok(WeylSymbol {
        values: GridFunction { spec: *grid, hbar: params.hbar, values },
        trailing_weight,
        contaminated: trailing_weight > 1e-8,
    })
}

/// Coherent-state (normal) symbol ⟨ā|op|a⟩ with the ħ-scaled states
/// |a⟩ = e^{−aā/2ħ} Σ aⁿ/√(n! ħⁿ) |n⟩.
#[derive(Debug, Clone, Copy)]
pub struct CoherentSymbol {
    pub value: C64,
    /// Weight of the coherent vector on the last basis state; large values
    /// mean |a|²/ħ is too big for this truncation.
    pub trailing_weight: f64,
}

pub fn coherent_symbol(op: &FockMatrix, a: C64, params: &PhysParams) -> CoherentSymbol {
    let dim = op.dim();
    let norm = (-(a * a.conj()) / (2.0 * params.hbar)).exp();
    let mut ket = vec![C64::new(0.0, 0.0); dim];
    let mut bra = vec![C64::new(0.0, 0.0); dim];
    ket[0] = norm;
    bra[0] = norm;
    for n in 1..dim {
        let step = (n as f64 * params.hbar).sqrt();
        ket[n] = ket[n - 1] * a / step;
        bra[n] = bra[n - 1] * a.conj() / step;
    }
    let mut value = C64::new(0.0, 0.0);
    for m in 0..dim {
        for n in 0..dim {
            value += bra[m] * op.get(m, n) * ket[n];
        }
    }
    let ket_mass: f64 = ket.iter().map(|v| v.norm_sqr()).sum();
    let trailing_weight = if ket_mass > 0.0 { ket[dim - 1].norm_sqr() / ket_mass } else { 0.0 };
    CoherentSymbol { value, trailing_weight }
}

/// Max-entry norm of Θ(f)Θ(g) − Θ(f ⋆ g) on the truncation-safe block.
/// Near zero certifies that the ordering and the star product match.
pub fn homomorphism_residual(
    f: &PhasePoly,
    g: &PhasePoly,
    ordering: OrderingSpec,
    scheme: SchemeSpec,
    dim: usize,
    params: &PhysParams,
) -> Result<f64, WeylError> {
    let tf = theta_order(f, ordering, dim, params)?;
    let tg = theta_order(g, ordering, dim, params)?;
    let product = star_poly(f, g, scheme, params)?;
    let t_prod = theta_order(&product, ordering, dim, params)?;
    let diff = tf.mul(&tg)?.sub(&t_prod)?;
    let degrees = (f.total_degree() + g.total_degree()) as usize;
    let block = dim.saturating_sub(degrees);
    Ok(diff.max_abs_block(block))
}
