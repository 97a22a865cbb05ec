//! SU(2)-equivariant layers on qubits: SWAP-generated convolutions, the
//! 2→1 pooling maps and their CPTP region, the cross-product channel, 1→2
//! embeddings and the 2→2 Choi block family.

pub mod family;
pub mod feasible;

use serde::{Deserialize, Serialize};

use crate::channel::{ChoiOperator, TransferMatrix};
use crate::equiv::{trace_tag, EquivariantBasis, EquivarianceProblem, Provenance, TraceTag};
use crate::group::{su2_defining, su2_tensor};
use crate::linalg::{c, identity, kron, partial_trace, pauli::single, swap_matrix, trace, CMatrix, Pauli, I};

pub use family::{TwoToTwoBlocks, TwoToTwoFamily};
pub use feasible::{feasible_boundary_distance, feasible_contains, project_to_feasible, FEASIBLE_TOL};

/// Coefficients of `φ(x, y, z) = φ₁ + x·φ₅/4 + y·φ₃′ + z·φ₄′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolParams {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PoolParams {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// The partial trace over the first qubit.
    pub fn trace_first() -> Self {
        Self::new(0.0, 1.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn distance(self, other: Self) -> f64 {
        let d = [self.x - other.x, self.y - other.y, self.z - other.z];
        d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// One angle per brickwork sublayer; sublayer `k` acts on pairs starting at
/// offset `k mod 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvLayerSpec {
    pub theta: Vec<f64>,
}

impl ConvLayerSpec {
    pub fn sublayers(&self) -> usize {
        self.theta.len()
    }

    /// Neighbouring pairs among `wires` touched by sublayer `k`.
    pub fn pairs(wires: &[usize], k: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut i = k % 2;
        while i + 1 < wires.len() {
            out.push((wires[i], wires[i + 1]));
            i += 2;
        }
        out
    }
}

/// `exp(−iθ SWAP) = cos θ I − i sin θ SWAP`.
pub fn swap_conv_unitary(theta: f64) -> CMatrix {
    identity(4) * c(theta.cos(), 0.0) + swap_matrix() * c(0.0, -theta.sin())
}

fn paulis() -> [CMatrix; 3] {
    [single(Pauli::X), single(Pauli::Y), single(Pauli::Z)]
}

/// Cyclic index triples `(i, j, k)` with `ε_ijk = 1`.
const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// `σ_i⊗σ_j − σ_j⊗σ_i` for each cyclic triple, paired with `σ_k`.
fn antisymmetric_products() -> Vec<(CMatrix, CMatrix)> {
    let s = paulis();
    CYCLIC
        .iter()
        .map(|&(i, j, k)| (kron(&s[i], &s[j]) - kron(&s[j], &s[i]), s[k].clone()))
        .collect()
}

/// `φ₅(ρ) = Σ_ijk Tr[ρ σ_i⊗σ_j] ε_ijk σ_k`.
pub fn cross_product_literal(rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2, 2);
    for (a, s) in antisymmetric_products() {
        out += s * trace(&(rho * a));
    }
    out
}

/// `CP′(ρ) = i Σ_ijk Tr[ρ SWAP σ_i⊗σ_j] ε_ijk σ_k`.
pub fn cross_product_prime(rho: &CMatrix) -> CMatrix {
    let sw = swap_matrix();
    let mut out = CMatrix::zeros(2, 2);
    for (a, s) in antisymmetric_products() {
        out += s * (trace(&(rho * &sw * a)) * I);
    }
    out
}

/// Bell basis `{β00, β01, β10, β11}` as columns.
pub fn bell_basis() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cols = [[h, 0.0, 0.0, h], [h, 0.0, 0.0, -h], [0.0, h, h, 0.0], [0.0, h, -h, 0.0]];
    CMatrix::from_fn(4, 4, |r, k| c(cols[k][r], 0.0))
}

/// Cross-product map evaluated from Bell-basis matrix elements:
/// `4 Im[a₂₄] X + 4 Re[a₁₄] Y − 4 Im[a₃₄] Z`.
pub fn cross_product_channel(rho: &CMatrix) -> CMatrix {
    let b = bell_basis();
    let a = b.adjoint() * rho * &b;
    let [x, y, z] = paulis();
    x * c(4.0 * a[(1, 3)].im, 0.0) + y * c(4.0 * a[(0, 3)].re, 0.0) - z * c(4.0 * a[(2, 3)].im, 0.0)
}

/// Whether `ρ ↦ Tr[ρ] I/2 + α CP(ρ)/4` is completely positive.
pub fn alpha_feasible(alpha: f64) -> bool {
    feasible_contains(PoolParams::new(alpha, 0.0, 0.0))
}

fn completely_depolarizing(rho: &CMatrix) -> CMatrix {
    identity(2) * (trace(rho) * 0.5)
}

fn trace_a(rho: &CMatrix) -> CMatrix {
    partial_trace(rho, &[2, 2], &[1]).expect("two-qubit input")
}

fn trace_b(rho: &CMatrix) -> CMatrix {
    partial_trace(rho, &[2, 2], &[0]).expect("two-qubit input")
}

/// The closed-form 2→1 maps.
#[derive(Debug, Clone)]
pub struct PoolBasis {
    /// `Tr[ρ] I/2`.
    pub phi1: TransferMatrix,
    /// `Tr[ρ SWAP] I/2`.
    pub phi2: TransferMatrix,
    /// `Tr_A`.
    pub phi3: TransferMatrix,
    /// `Tr_B`.
    pub phi4: TransferMatrix,
    /// Cross-product map.
    pub phi5: TransferMatrix,
    /// `φ₃ − φ₁`, trace annihilating.
    pub phi3_mod: TransferMatrix,
    /// `φ₄ − φ₁`, trace annihilating.
    pub phi4_mod: TransferMatrix,
}

impl PoolBasis {
    /// The five maps as an [`EquivariantBasis`] with trace tags.
    pub fn as_basis(&self) -> EquivariantBasis {
        let elements = vec![
            self.phi1.clone(),
            self.phi2.clone(),
            self.phi3.clone(),
            self.phi4.clone(),
            self.phi5.clone(),
        ];
        let problem = pool_problem();
        let trace_tags = elements.iter().map(|t| trace_tag(t, 1e-9)).collect();
        let residuals = elements
            .iter()
            .map(|t| crate::equiv::verify::generator_residual(t, &problem))
            .collect();
        EquivariantBasis {
            elements,
            trace_tags,
            provenance: Provenance::ClosedForm,
            residuals,
        }
    }
}

/// The 2→1 problem `(SU(2), g⊗g, g)`.
pub fn pool_problem() -> EquivarianceProblem {
    EquivarianceProblem::new(su2_tensor(2), su2_defining()).expect("shared group")
}

pub fn su2_pool_basis() -> PoolBasis {
    let sw = swap_matrix();
    let phi1 = TransferMatrix::from_fn(4, 2, completely_depolarizing);
    let phi3 = TransferMatrix::from_fn(4, 2, trace_a);
    let phi4 = TransferMatrix::from_fn(4, 2, trace_b);
    PoolBasis {
        phi2: TransferMatrix::from_fn(4, 2, |r| identity(2) * (trace(&(r * &sw)) * 0.5)),
        phi5: TransferMatrix::from_fn(4, 2, cross_product_literal),
        phi3_mod: TransferMatrix::from_fn(4, 2, |r| trace_a(r) - completely_depolarizing(r)),
        phi4_mod: TransferMatrix::from_fn(4, 2, |r| trace_b(r) - completely_depolarizing(r)),
        phi1,
        phi3,
        phi4,
    }
}

/// Transfer matrix of `φ(x, y, z)`.
pub fn pool_transfer(p: PoolParams) -> TransferMatrix {
    let b = su2_pool_basis();
    let m = &b.phi1.matrix
        + b.phi5.matrix.scale(p.x / 4.0)
        + b.phi3_mod.matrix.scale(p.y)
        + b.phi4_mod.matrix.scale(p.z);
    TransferMatrix { matrix: m, in_dim: 4, out_dim: 2 }
}

/// Choi operator of `φ(x, y, z)`; trace preserving for every `(x, y, z)`.
pub fn pool_channel(p: PoolParams) -> ChoiOperator {
    pool_transfer(p).to_choi()
}

/// Applies `φ(x, y, z)` to a two-qubit operator without building matrices.
pub fn apply_pool(p: PoolParams, rho: &CMatrix) -> CMatrix {
    let dep = completely_depolarizing(rho);
    &dep + cross_product_literal(rho) * c(p.x / 4.0, 0.0) + (trace_a(rho) - &dep) * c(p.y, 0.0)
        + (trace_b(rho) - &dep) * c(p.z, 0.0)
}

/// The five 1→2 maps `ρ ↦` `Tr[ρ] I⊗I/4`, `Tr[ρ] (XX+YY+ZZ)/2`,
/// `I⊗ρ̃`, `ρ̃⊗I` and `½ Σ_k Tr[ρ σ_k] (σ_i⊗σ_j − σ_j⊗σ_i)`,
/// with `ρ̃ = ρ − Tr[ρ] I/2`.
pub fn one_to_two_basis() -> EquivariantBasis {
    let s = paulis();
    let heis = kron(&s[0], &s[0]) + kron(&s[1], &s[1]) + kron(&s[2], &s[2]);
    let id2 = identity(2);
    let traceless = |r: &CMatrix| r - identity(2) * (trace(r) * 0.5);
    let products = antisymmetric_products();
    let elements = vec![
        TransferMatrix::from_fn(2, 4, |r| identity(4) * (trace(r) * 0.25)),
        TransferMatrix::from_fn(2, 4, |r| &heis * (trace(r) * 0.5)),
        TransferMatrix::from_fn(2, 4, |r| kron(&id2, &traceless(r))),
        TransferMatrix::from_fn(2, 4, |r| kron(&traceless(r), &id2)),
        TransferMatrix::from_fn(2, 4, |r| {
            let mut out = CMatrix::zeros(4, 4);
            for (a, sk) in &products {
                out += a * (trace(&(r * sk)) * 0.5);
            }
            out
        }),
    ];
    let problem = EquivarianceProblem::new(su2_defining(), su2_tensor(2)).expect("shared group");
    let trace_tags: Vec<TraceTag> = elements.iter().map(|t| trace_tag(t, 1e-9)).collect();
    let residuals = elements
        .iter()
        .map(|t| crate::equiv::verify::generator_residual(t, &problem))
        .collect();
    EquivariantBasis {
        elements,
        trace_tags,
        provenance: Provenance::ClosedForm,
        residuals,
    }
}
