//! Equivariant 2→2 qubit channels as `(I₅⊗A) ⊕ (I₃⊗B) ⊕ C` Choi blocks.

use crate::channel::{is_tp, ChoiOperator, PSD_TOL};
use crate::equiv::{ChoiBlockFamily, EquivarianceProblem};
use crate::error::{EqnnError, Result};
use crate::group::su2_tensor;
use crate::linalg::{min_eigenvalue, CMatrix};

#[derive(Debug, Clone)]
pub struct TwoToTwoFamily {
    pub family: ChoiBlockFamily,
    /// Block positions of the spin-2, spin-1 and spin-0 components.
    idx: [usize; 3],
}

/// Blocks of an equivariant 2→2 Choi operator.
#[derive(Debug, Clone)]
pub struct TwoToTwoBlocks {
    /// Spin-2 multiplicity block (1×1).
    pub a: f64,
    /// Spin-1 multiplicity block (3×3).
    pub b: CMatrix,
    /// Spin-0 multiplicity block (2×2).
    pub c: CMatrix,
}

impl TwoToTwoFamily {
    pub fn new(seed: u64) -> Result<Self> {
        let problem = EquivarianceProblem::new(su2_tensor(2), su2_tensor(2))?;
        let family = ChoiBlockFamily::new(&problem, seed)?;
        let find = |d: usize, m: usize| {
            family
                .shape()
                .iter()
                .position(|&s| s == (d, m))
                .ok_or_else(|| EqnnError::Decomposition(format!("missing irrep block of dimension {d}")))
        };
        let idx = [find(5, 1)?, find(3, 3)?, find(1, 2)?];
        Ok(Self { family, idx })
    }

    /// `1² + 3² + 2²` real parameters.
    pub fn n_real_parameters(&self) -> usize {
        self.family.n_real_parameters()
    }

    /// Choi operator for positive semidefinite blocks.
    pub fn choi(&self, blocks: &TwoToTwoBlocks) -> Result<ChoiOperator> {
        let min = blocks
            .a
            .min(min_eigenvalue(&blocks.b))
            .min(min_eigenvalue(&blocks.c));
        if min < -PSD_TOL {
            return Err(EqnnError::NotCompletelyPositive(min));
        }
        if blocks.b.shape() != (3, 3) || blocks.c.shape() != (2, 2) {
            return Err(EqnnError::DimensionMismatch("blocks must be 3x3 and 2x2".into()));
        }
        let mut parts = vec![CMatrix::zeros(0, 0); 3];
        parts[self.idx[0]] = CMatrix::from_element(1, 1, blocks.a.into());
        parts[self.idx[1]] = blocks.b.clone();
        parts[self.idx[2]] = blocks.c.clone();
        self.family.choi(&parts)
    }

    /// Reads the blocks of an equivariant Choi operator.
    pub fn decompose(&self, j: &ChoiOperator) -> Result<TwoToTwoBlocks> {
        let (res, parts) = self.family.blocks_of(j);
        if res > 1e-8 * j.matrix.norm().max(1.0) {
            return Err(EqnnError::Invalid(format!("operator is not equivariant (block residual {res:.2e})")));
        }
        Ok(TwoToTwoBlocks {
            a: parts[self.idx[0]][(0, 0)].re,
            b: parts[self.idx[1]].clone(),
            c: parts[self.idx[2]].clone(),
        })
    }

    pub fn is_tp(&self, blocks: &TwoToTwoBlocks, tol: f64) -> Result<bool> {
        Ok(is_tp(&self.choi(blocks)?, tol).0)
    }
}
