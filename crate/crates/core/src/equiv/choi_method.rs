//! Equivariant maps from the isotypic block structure of the Choi operator.
//!
//! `φ` is equivariant iff `J^φ` commutes with `R_in* ⊗ R_out`, so in the
//! isotypic basis `W J W^† = ⊕_λ I_{d_λ} ⊗ J_λ` with free `m_λ × m_λ`
//! blocks. Hermitian blocks give Hermiticity-preserving maps and
//! `J_λ = w_λ^† w_λ` gives exactly the completely positive ones.

use super::{tagged_basis, EquivarianceProblem, EquivariantBasis, Provenance};
use crate::channel::ChoiOperator;
use crate::error::{EqnnError, Result};
use crate::group::{dual_rep, isotypic_decompose, tensor_product, IsotypicDecomposition};
use crate::linalg::{c, partial_trace, real_orthonormal_span, CMatrix, RMatrix, NULLSPACE_TOL};

/// Haar samples used to validate decompositions of Lie representations.
const DECOMPOSE_SAMPLES: usize = 4;

/// Block parameterization of equivariant Choi operators.
#[derive(Debug, Clone)]
pub struct ChoiBlockFamily {
    pub decomposition: IsotypicDecomposition,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl ChoiBlockFamily {
    pub fn new(problem: &EquivarianceProblem, seed: u64) -> Result<Self> {
        let rc = tensor_product(&dual_rep(&problem.r_in), &problem.r_out)?;
        let decomposition = isotypic_decompose(&rc, DECOMPOSE_SAMPLES, seed)?;
        Ok(Self {
            decomposition,
            in_dim: problem.in_dim(),
            out_dim: problem.out_dim(),
        })
    }

    /// `(d_λ, m_λ)` per block.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.decomposition.blocks.iter().map(|b| (b.dim, b.multiplicity)).collect()
    }

    /// Real parameters of a Hermitian (or CP) choice: `Σ m_λ²`.
    pub fn n_real_parameters(&self) -> usize {
        self.decomposition.sum_m2()
    }

    /// Choi operator `W^† (⊕ I_{d_λ} ⊗ J_λ) W`.
    pub fn choi(&self, blocks: &[CMatrix]) -> Result<ChoiOperator> {
        let j = self.decomposition.assemble_commutant(blocks)?;
        ChoiOperator::new(j, self.in_dim, self.out_dim)
    }

    /// Choi operator with blocks `w_λ^† w_λ`; completely positive by construction.
    pub fn choi_from_factors(&self, factors: &[CMatrix]) -> Result<ChoiOperator> {
        let blocks: Vec<CMatrix> = factors.iter().map(|w| w.adjoint() * w).collect();
        self.choi(&blocks)
    }

    /// Extracts the blocks of an equivariant Choi operator together with the
    /// deviation from the block form.
    pub fn blocks_of(&self, j: &ChoiOperator) -> (f64, Vec<CMatrix>) {
        self.decomposition.commutant_blocks(&j.matrix)
    }

    /// `‖Tr_out J − I‖_F`.
    pub fn tp_deviation(&self, blocks: &[CMatrix]) -> Result<f64> {
        let j = self.choi(blocks)?;
        let reduced = partial_trace(&j.matrix, &[self.in_dim, self.out_dim], &[0])?;
        Ok((reduced - CMatrix::identity(self.in_dim, self.in_dim)).norm())
    }
}

/// Hermitian basis of `m × m` matrices.
fn hermitian_units(m: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(m * m);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..m {
        for b in a..m {
            if a == b {
                let mut e = CMatrix::zeros(m, m);
                e[(a, a)] = c(1.0, 0.0);
                out.push(e);
            } else {
                let mut re = CMatrix::zeros(m, m);
                re[(a, b)] = c(s, 0.0);
                re[(b, a)] = c(s, 0.0);
                out.push(re);
                let mut im = CMatrix::zeros(m, m);
                im[(a, b)] = c(0.0, -s);
                im[(b, a)] = c(0.0, s);
                out.push(im);
            }
        }
    }
    out
}

/// Basis of equivariant Hermiticity-preserving maps built block by block.
pub fn solve_choi_method(problem: &EquivarianceProblem, seed: u64) -> Result<EquivariantBasis> {
    if problem.locality.is_some() {
        return Err(EqnnError::Invalid("locality caps are only supported by the nullspace method".into()));
    }
    let family = ChoiBlockFamily::new(problem, seed)?;
    let blocks = &family.decomposition.blocks;
    let zeros: Vec<CMatrix> = blocks.iter().map(|b| CMatrix::zeros(b.multiplicity, b.multiplicity)).collect();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(family.n_real_parameters());
    for (k, b) in blocks.iter().enumerate() {
        for unit in hermitian_units(b.multiplicity) {
            let mut parts = zeros.clone();
            parts[k] = unit;
            cols.push(family.choi(&parts)?.to_transfer().real_vec());
        }
    }
    let n = problem.vec_len();
    let mut m = RMatrix::zeros(n, cols.len());
    for (j, v) in cols.iter().enumerate() {
        m.column_mut(j).copy_from_slice(v);
    }
    let span = real_orthonormal_span(&m, NULLSPACE_TOL);
    tagged_basis(problem, &span, Provenance::Choi)
}
