//! Ordered operator bases with cached Gram matrices.

use super::pauli::PauliString;
use super::{c, hermitian_eig_unchecked, hs_inner, vectorize, CMatrix, CVector, ONE, ZERO};
use crate::error::{EqnnError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Normalized Pauli strings on `n` qubits.
    Pauli(usize),
    /// Hermitian orthonormal basis with first element `I/√d`.
    Hermitian(usize),
    Custom,
}

#[derive(Debug, Clone)]
pub struct OperatorBasis {
    elements: Vec<CMatrix>,
    gram: CMatrix,
    kind: BasisKind,
}

impl OperatorBasis {
    /// Builds a basis from arbitrary elements, rejecting linearly dependent
    /// or mismatched inputs.
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        if let Some(first) = elements.first() {
            let shape = first.shape();
            if elements.iter().any(|e| e.shape() != shape) {
                return Err(EqnnError::DimensionMismatch(
                    "basis elements have different shapes".into(),
                ));
            }
        }
        let gram = gram_matrix(&elements);
        if !elements.is_empty() {
            let (vals, _) = hermitian_eig_unchecked(&gram);
            let top = vals.last().copied().unwrap_or(0.0);
            if vals[0] <= 1e-12 * top.max(1e-300) {
                return Err(EqnnError::Invalid(format!(
                    "basis elements are linearly dependent (Gram eigenvalue {:.3e})",
                    vals[0]
                )));
            }
        }
        Ok(Self {
            elements,
            gram,
            kind: BasisKind::Custom,
        })
    }

    fn orthonormal(elements: Vec<CMatrix>, kind: BasisKind) -> Self {
        let n = elements.len();
        Self {
            elements,
            gram: CMatrix::identity(n, n),
            kind,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Row count of each element.
    pub fn operator_dim(&self) -> usize {
        self.elements.first().map(|e| e.nrows()).unwrap_or(0)
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<CMatrix> {
        self.elements
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn is_orthonormal(&self) -> bool {
        self.kind != BasisKind::Custom
    }

    /// Expansion coefficients of `m`: `m = Σ_i c_i B_i` when `m` lies in the
    /// span (least-squares projection otherwise).
    pub fn coefficients(&self, m: &CMatrix) -> CVector {
        match self.kind {
            BasisKind::Pauli(n) => {
                let s = (2f64).powf(-(n as f64) / 2.0);
                CVector::from_iterator(
                    self.elements.len(),
                    (0..self.elements.len())
                        .map(|i| PauliString::from_index(n, i).trace_with(m) * s),
                )
            }
            BasisKind::Hermitian(_) => CVector::from_iterator(
                self.elements.len(),
                self.elements.iter().map(|b| hs_inner(b, m)),
            ),
            BasisKind::Custom => {
                let b = CVector::from_iterator(
                    self.elements.len(),
                    self.elements.iter().map(|e| hs_inner(e, m)),
                );
                self.gram
                    .clone()
                    .lu()
                    .solve(&b)
                    .unwrap_or_else(|| CVector::zeros(self.elements.len()))
            }
        }
    }

    pub fn reconstruct(&self, coeffs: &CVector) -> CMatrix {
        let d = self.operator_dim();
        let mut out = CMatrix::zeros(d, self.elements.first().map(|e| e.ncols()).unwrap_or(0));
        for (e, &ci) in self.elements.iter().zip(coeffs.iter()) {
            if ci != ZERO {
                out += e * ci;
            }
        }
        out
    }

    /// Matrix whose columns are `vec(B_i)`.
    pub fn vec_matrix(&self) -> CMatrix {
        let rows = self.elements.first().map(|e| e.len()).unwrap_or(0);
        let mut out = CMatrix::zeros(rows, self.elements.len());
        for (j, e) in self.elements.iter().enumerate() {
            out.set_column(j, &vectorize(e));
        }
        out
    }
}

fn gram_matrix(elements: &[CMatrix]) -> CMatrix {
    let n = elements.len();
    CMatrix::from_fn(n, n, |i, j| hs_inner(&elements[i], &elements[j]))
}

/// The 4ⁿ normalized Pauli strings in lexicographic order I<X<Y<Z per site.
pub fn pauli_basis(n: usize) -> OperatorBasis {
    let elements = (0..1usize << (2 * n))
        .map(|i| PauliString::from_index(n, i).normalized_matrix())
        .collect();
    OperatorBasis::orthonormal(elements, BasisKind::Pauli(n))
}

/// Hermitian orthonormal basis of d×d operators with first element `I/√d`.
/// Uses normalized Pauli strings when `d` is a power of two, and generalized
/// Gell-Mann matrices otherwise.
pub fn hermitian_basis(d: usize) -> OperatorBasis {
    if d.is_power_of_two() {
        return pauli_basis(d.trailing_zeros() as usize);
    }
    let mut elements = Vec::with_capacity(d * d);
    elements.push(CMatrix::identity(d, d).scale(1.0 / (d as f64).sqrt()));
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for k in 0..l {
            m[(k, k)] = c(1.0 / norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) / norm, 0.0);
        elements.push(m);
    }
    let s = 1.0 / 2f64.sqrt();
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = ONE * s;
            sym[(k, j)] = ONE * s;
            elements.push(sym);
            let mut anti = CMatrix::zeros(d, d);
            anti[(j, k)] = c(0.0, -s);
            anti[(k, j)] = c(0.0, s);
            elements.push(anti);
        }
    }
    OperatorBasis::orthonormal(elements, BasisKind::Hermitian(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_basis_is_orthonormal() {
        for n in 1..=3 {
            let b = pauli_basis(n);
            let g = gram_matrix(b.elements());
            assert!((g - CMatrix::identity(b.len(), b.len())).norm() < 1e-12);
        }
        let b = pauli_basis(2);
        assert_eq!(b.len(), 16);
        assert!((b.elements()[0].clone() - CMatrix::identity(4, 4).scale(0.5)).norm() < 1e-15);
    }

    #[test]
    fn gell_mann_basis_is_orthonormal_hermitian() {
        for d in [3, 5, 6] {
            let b = hermitian_basis(d);
            assert_eq!(b.len(), d * d);
            let g = gram_matrix(b.elements());
            assert!((g - CMatrix::identity(d * d, d * d)).norm() < 1e-12);
            for e in b.elements() {
                assert!((e - e.adjoint()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dependent_elements_rejected() {
        let a = CMatrix::identity(2, 2);
        assert!(OperatorBasis::new(vec![a.clone(), a.scale(2.0)]).is_err());
    }

    #[test]
    fn custom_coefficients_solve_gram() {
        let a = CMatrix::identity(2, 2);
        let mut b = CMatrix::zeros(2, 2);
        b[(0, 0)] = ONE;
        let basis = OperatorBasis::new(vec![a, b]).unwrap();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0)]));
        let co = basis.coefficients(&m);
        assert!((basis.reconstruct(&co) - m).norm() < 1e-12);
    }
}
