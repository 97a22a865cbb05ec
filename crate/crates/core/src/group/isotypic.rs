//! Isotypic decomposition `W R(g) W^† = ⊕_λ R_λ(g) ⊗ I_{m_λ}`.
//!
//! A generic Hermitian element of the commutant has one eigenspace per
//! irreducible copy, so diagonalizing it splits the space into irreducible
//! subspaces. Copies of the same irrep are then matched (and their bases
//! aligned) through a generic complex commutant element, which acts between
//! equivalent copies as a multiple of a unitary intertwiner and vanishes
//! between inequivalent ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{commutant_basis, Representation};
use crate::error::{EqnnError, Result};
use crate::linalg::{c, hermitian_eig_unchecked, svd, CMatrix, OperatorBasis};

/// Eigenvalue gap separating irreducible copies.
pub const CLUSTER_GAP: f64 = 1e-6;
/// Residual accepted when verifying the block form.
pub const BLOCK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct IsotypicBlock {
    pub label: String,
    /// Irrep dimension `d_λ`.
    pub dim: usize,
    /// Multiplicity `m_λ`.
    pub multiplicity: usize,
    /// Row range `start..end` of the block in `W`, of length `d_λ m_λ`.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    /// Unitary change of basis; row `start + a·m + μ` of block λ is basis
    /// vector `a` of copy `μ`.
    pub w: CMatrix,
    pub blocks: Vec<IsotypicBlock>,
    /// Largest deviation from the block form over the tested elements.
    pub residual: f64,
}

impl IsotypicDecomposition {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.multiplicity).sum()
    }

    /// `Σ_λ m_λ²`, the commutant dimension.
    pub fn sum_m2(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity * b.multiplicity).sum()
    }

    /// Deviation of `W x W^†` from `⊕ x_λ ⊗ I_{m_λ}`, with `x_λ` read off the
    /// first copy of each block.
    pub fn block_residual(&self, x: &CMatrix) -> f64 {
        let y = &self.w * x * self.w.adjoint();
        let mut expected = CMatrix::zeros(y.nrows(), y.ncols());
        for b in &self.blocks {
            let m = b.multiplicity;
            for a in 0..b.dim {
                for bb in 0..b.dim {
                    let v = y[(b.start + a * m, b.start + bb * m)];
                    for mu in 0..m {
                        expected[(b.start + a * m + mu, b.start + bb * m + mu)] = v;
                    }
                }
            }
        }
        (y - expected).norm()
    }

    /// Deviation of `W u W^†` from `⊕ I_{d_λ} ⊗ u_λ` and the extracted
    /// `m_λ × m_λ` blocks `u_λ`.
    pub fn commutant_blocks(&self, u: &CMatrix) -> (f64, Vec<CMatrix>) {
        let y = &self.w * u * self.w.adjoint();
        let mut expected = CMatrix::zeros(y.nrows(), y.ncols());
        let mut parts = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let m = b.multiplicity;
            let ub = y.view((b.start, b.start), (m, m)).clone_owned();
            for a in 0..b.dim {
                let off = b.start + a * m;
                expected.view_mut((off, off), (m, m)).copy_from(&ub);
            }
            parts.push(ub);
        }
        ((y - expected).norm(), parts)
    }

    /// Assembles `W^† (⊕ I_{d_λ} ⊗ x_λ) W` from per-block `m_λ × m_λ` matrices.
    pub fn assemble_commutant(&self, parts: &[CMatrix]) -> Result<CMatrix> {
        if parts.len() != self.blocks.len() {
            return Err(EqnnError::DimensionMismatch(format!(
                "{} blocks supplied for {} isotypic components",
                parts.len(),
                self.blocks.len()
            )));
        }
        let n = self.w.nrows();
        let mut inner = CMatrix::zeros(n, n);
        for (b, x) in self.blocks.iter().zip(parts) {
            let m = b.multiplicity;
            if x.shape() != (m, m) {
                return Err(EqnnError::DimensionMismatch(format!(
                    "block {} needs a {m}x{m} matrix",
                    b.label
                )));
            }
            for a in 0..b.dim {
                let off = b.start + a * m;
                inner.view_mut((off, off), (m, m)).copy_from(x);
            }
        }
        Ok(self.w.adjoint() * inner * &self.w)
    }
}

/// Decomposes `rep` into isotypic components.
///
/// For Lie representations with a realization, `samples` Haar-random group
/// elements are checked in addition to the algebra generators.
pub fn isotypic_decompose(rep: &Representation, samples: usize, seed: u64) -> Result<IsotypicDecomposition> {
    let comm = commutant_basis(rep, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = None;
    for _attempt in 0..5 {
        match try_decompose(rep, &comm, samples, &mut rng) {
            Ok(d) => return Ok(d),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| EqnnError::Decomposition("no attempt made".into())))
}

fn random_element(comm: &OperatorBasis, rng: &mut ChaCha8Rng, complex: bool) -> CMatrix {
    let d = comm.operator_dim();
    let mut m = CMatrix::zeros(d, d);
    for e in comm.elements() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
        m += e * c(re, im);
    }
    m
}

fn try_decompose(
    rep: &Representation,
    comm: &OperatorBasis,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<IsotypicDecomposition> {
    let d = rep.dim;
    let h = random_element(comm, rng, false);
    let (vals, vecs) = hermitian_eig_unchecked(&h);
    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));

    // eigenvalue clusters = irreducible copies
    let mut copies: Vec<CMatrix> = Vec::new();
    let mut start = 0;
    for i in 1..=d {
        if i == d || vals[i] - vals[i - 1] > CLUSTER_GAP * scale {
            copies.push(vecs.columns(start, i - start).clone_owned());
            start = i;
        }
    }

    // group copies into equivalence classes and align bases
    let a = random_element(comm, rng, true);
    let a_norm = a.norm().max(1e-300);
    let mut classes: Vec<Vec<CMatrix>> = Vec::new();
    for v in copies {
        let mut placed = false;
        for class in classes.iter_mut() {
            let rep0 = &class[0];
            if rep0.ncols() != v.ncols() {
                continue;
            }
            let s = rep0.adjoint() * &a * &v;
            if s.norm() > 1e-7 * a_norm {
                let dec = svd(&s);
                let t = &dec.u * dec.v.adjoint();
                class.push(&v * t.adjoint());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![v]);
        }
    }

    let mut w = CMatrix::zeros(d, d);
    let mut blocks = Vec::with_capacity(classes.len());
    let mut row = 0;
    for (lam, class) in classes.iter().enumerate() {
        let dl = class[0].ncols();
        let m = class.len();
        for a_idx in 0..dl {
            for (mu, v) in class.iter().enumerate() {
                w.set_row(row + a_idx * m + mu, &v.column(a_idx).adjoint());
            }
        }
        blocks.push(IsotypicBlock {
            label: format!("irrep{lam}"),
            dim: dl,
            multiplicity: m,
            start: row,
            end: row + dl * m,
        });
        row += dl * m;
    }

    let mut decomposition = IsotypicDecomposition { w, blocks, residual: 0.0 };
    let mut residual: f64 = 0.0;
    for g in &rep.generators {
        residual = residual.max(decomposition.block_residual(g));
    }
    if let Some(real) = &rep.realization {
        for _ in 0..samples {
            let g = real.group.sample(rng);
            residual = residual.max(decomposition.block_residual(&real.eval(&g)));
        }
    }
    if residual > BLOCK_TOL || decomposition.sum_m2() != comm.len() {
        return Err(EqnnError::Decomposition(format!(
            "block-form residual {residual:.3e}, Σm² = {} vs commutant dimension {}",
            decomposition.sum_m2(),
            comm.len()
        )));
    }
    decomposition.residual = residual;
    Ok(decomposition)
}
