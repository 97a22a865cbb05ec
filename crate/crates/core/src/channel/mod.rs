//! Linear superoperators in transfer-matrix, Choi and Kraus form.
//!
//! * Transfer matrix: `T[i, j] = Tr[B_i φ(B_j)]` for Hermitian orthonormal
//!   bases (normalized Pauli strings on qubits).
//! * Superoperator: the computational-basis matrix `S` with
//!   `vec(φ(X)) = S vec(X)` under column stacking.
//! * Choi operator: `J = Σ_{ij} |i><j| ⊗ φ(|i><j|)` on `H_in ⊗ H_out`.

pub mod json;
pub mod predicates;
pub mod stinespring;

use crate::error::{EqnnError, Result};
use crate::linalg::{
    c, hermitian_basis, hermitian_eig_unchecked, partial_trace, vectorize, CMatrix, RMatrix,
};

pub use predicates::{is_cp, is_tp, is_unital};
pub use stinespring::{stinespring_dilate, StinespringDilation};

/// Eigenvalues at or above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub matrix: CMatrix,
    pub in_dim: usize,
    pub out_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator {
    pub matrix: CMatrix,
    pub in_dim: usize,
    pub out_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<CMatrix>,
    pub in_dim: usize,
    pub out_dim: usize,
}

fn check_input(rho: &CMatrix, d: usize) -> Result<()> {
    if rho.shape() != (d, d) {
        return Err(EqnnError::DimensionMismatch(format!(
            "input is {}x{}, channel expects {d}x{d}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(())
}

/// Computational-basis superoperator of `f`.
pub fn superop_from_fn(in_dim: usize, out_dim: usize, f: impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let mut s = CMatrix::zeros(out_dim * out_dim, in_dim * in_dim);
    for col in 0..in_dim {
        for row in 0..in_dim {
            let mut e = CMatrix::zeros(in_dim, in_dim);
            e[(row, col)] = c(1.0, 0.0);
            s.set_column(col * in_dim + row, &vectorize(&f(&e)));
        }
    }
    s
}

/// Index reshuffle taking the superoperator to the Choi operator:
/// `J[c·d_out + a, d·d_out + b] = S[b·d_out + a, d·d_in + c]`.
pub fn superop_to_choi_matrix(s: &CMatrix, in_dim: usize, out_dim: usize) -> CMatrix {
    let mut j = CMatrix::zeros(in_dim * out_dim, in_dim * out_dim);
    for cc in 0..in_dim {
        for d in 0..in_dim {
            for a in 0..out_dim {
                for b in 0..out_dim {
                    j[(cc * out_dim + a, d * out_dim + b)] = s[(b * out_dim + a, d * in_dim + cc)];
                }
            }
        }
    }
    j
}

/// Inverse of [`superop_to_choi_matrix`].
pub fn choi_to_superop_matrix(j: &CMatrix, in_dim: usize, out_dim: usize) -> CMatrix {
    let mut s = CMatrix::zeros(out_dim * out_dim, in_dim * in_dim);
    for cc in 0..in_dim {
        for d in 0..in_dim {
            for a in 0..out_dim {
                for b in 0..out_dim {
                    s[(b * out_dim + a, d * in_dim + cc)] = j[(cc * out_dim + a, d * out_dim + b)];
                }
            }
        }
    }
    s
}

/// The square-case index involution `⟨i,j|S|k,l⟩ ↦ ⟨l,j|S|k,i⟩` read on
/// the computational-basis superoperator with pair indices `(first, second)`
/// = `(idx / d, idx % d)`. It maps the column-stacked superoperator to the
/// Choi operator and is its own inverse.
pub fn gamma(s: &CMatrix, d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out[(l * d + j, k * d + i)] = s[(i * d + j, k * d + l)];
                }
            }
        }
    }
    out
}

impl TransferMatrix {
    pub fn new(matrix: CMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        if matrix.shape() != (out_dim * out_dim, in_dim * in_dim) {
            return Err(EqnnError::DimensionMismatch(format!(
                "transfer matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                out_dim * out_dim,
                in_dim * in_dim
            )));
        }
        Ok(Self { matrix, in_dim, out_dim })
    }

    /// Transfer matrix of an arbitrary linear map given as a function.
    pub fn from_fn(in_dim: usize, out_dim: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let bin = hermitian_basis(in_dim);
        let bout = hermitian_basis(out_dim);
        let mut m = CMatrix::zeros(out_dim * out_dim, in_dim * in_dim);
        for (j, b) in bin.elements().iter().enumerate() {
            m.set_column(j, &bout.coefficients(&f(b)));
        }
        Self { matrix: m, in_dim, out_dim }
    }

    pub fn from_superop(s: &CMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        if s.shape() != (out_dim * out_dim, in_dim * in_dim) {
            return Err(EqnnError::DimensionMismatch("superoperator has the wrong shape".into()));
        }
        let uin = hermitian_basis(in_dim).vec_matrix();
        let uout = hermitian_basis(out_dim).vec_matrix();
        Self::new(uout.adjoint() * s * uin, in_dim, out_dim)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: CMatrix::identity(d * d, d * d),
            in_dim: d,
            out_dim: d,
        }
    }

    /// Builds a transfer matrix from real column-stacked entries.
    pub fn from_real_vec(v: &[f64], in_dim: usize, out_dim: usize) -> Result<Self> {
        let rows = out_dim * out_dim;
        let cols = in_dim * in_dim;
        if v.len() != rows * cols {
            return Err(EqnnError::DimensionMismatch("real vector has the wrong length".into()));
        }
        Self::new(
            CMatrix::from_iterator(rows, cols, v.iter().map(|&x| c(x, 0.0))),
            in_dim,
            out_dim,
        )
    }

    /// Real parts of the entries, column stacked.
    pub fn real_vec(&self) -> Vec<f64> {
        self.matrix.iter().map(|z| z.re).collect()
    }

    pub fn real_matrix(&self) -> RMatrix {
        self.matrix.map(|z| z.re)
    }

    pub fn superop(&self) -> CMatrix {
        let uin = hermitian_basis(self.in_dim).vec_matrix();
        let uout = hermitian_basis(self.out_dim).vec_matrix();
        uout * &self.matrix * uin.adjoint()
    }

    pub fn to_choi(&self) -> ChoiOperator {
        ChoiOperator {
            matrix: superop_to_choi_matrix(&self.superop(), self.in_dim, self.out_dim),
            in_dim: self.in_dim,
            out_dim: self.out_dim,
        }
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        check_input(rho, self.in_dim)?;
        let coeffs = hermitian_basis(self.in_dim).coefficients(rho);
        Ok(hermitian_basis(self.out_dim).reconstruct(&(&self.matrix * coeffs)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TransferMatrix) -> Result<TransferMatrix> {
        if other.out_dim != self.in_dim {
            return Err(EqnnError::DimensionMismatch("composition dimensions disagree".into()));
        }
        TransferMatrix::new(&self.matrix * &other.matrix, other.in_dim, self.out_dim)
    }

    pub fn scale(&self, s: f64) -> TransferMatrix {
        TransferMatrix {
            matrix: self.matrix.scale(s),
            in_dim: self.in_dim,
            out_dim: self.out_dim,
        }
    }

    pub fn add(&self, other: &TransferMatrix) -> Result<TransferMatrix> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(EqnnError::DimensionMismatch("cannot add maps of different shapes".into()));
        }
        TransferMatrix::new(&self.matrix + &other.matrix, self.in_dim, self.out_dim)
    }
}

impl ChoiOperator {
    pub fn new(matrix: CMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        let n = in_dim * out_dim;
        if matrix.shape() != (n, n) {
            return Err(EqnnError::DimensionMismatch(format!(
                "Choi operator is {}x{}, expected {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, in_dim, out_dim })
    }

    pub fn superop(&self) -> CMatrix {
        choi_to_superop_matrix(&self.matrix, self.in_dim, self.out_dim)
    }

    pub fn to_transfer(&self) -> TransferMatrix {
        TransferMatrix::from_superop(&self.superop(), self.in_dim, self.out_dim).expect("shapes match")
    }

    /// `φ(ρ) = Tr_in[J (ρ^T ⊗ I)]`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        check_input(rho, self.in_dim)?;
        let lifted = crate::linalg::kron(&rho.transpose(), &CMatrix::identity(self.out_dim, self.out_dim));
        partial_trace(&(&self.matrix * lifted), &[self.in_dim, self.out_dim], &[1])
    }

    /// Kraus operators from the spectral decomposition. Eigenvalues in
    /// `[-tol, tol]` are dropped; anything below `-tol` is an error.
    pub fn to_kraus(&self, tol: f64) -> Result<KrausSet> {
        let (vals, vecs) = hermitian_eig_unchecked(&self.matrix);
        if let Some(&min) = vals.first() {
            if min < -tol {
                return Err(EqnnError::NotCompletelyPositive(min));
            }
        }
        let mut operators = Vec::new();
        for (k, &lam) in vals.iter().enumerate().rev() {
            if lam <= tol {
                continue;
            }
            let s = lam.sqrt();
            let v = vecs.column(k);
            let op = CMatrix::from_fn(self.out_dim, self.in_dim, |a, cc| v[cc * self.out_dim + a] * s);
            operators.push(op);
        }
        Ok(KrausSet {
            operators,
            in_dim: self.in_dim,
            out_dim: self.out_dim,
        })
    }

    /// Number of eigenvalues above `tol`.
    pub fn kraus_rank(&self, tol: f64) -> usize {
        hermitian_eig_unchecked(&self.matrix).0.iter().filter(|&&l| l > tol).count()
    }
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| EqnnError::Invalid("empty Kraus set".into()))?;
        let (out_dim, in_dim) = first.shape();
        if operators.iter().any(|k| k.shape() != (out_dim, in_dim)) {
            return Err(EqnnError::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self {
            operators,
            in_dim,
            out_dim,
        })
    }

    /// `Σ_k conj(K_k) ⊗ K_k`.
    pub fn superop(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.out_dim * self.out_dim, self.in_dim * self.in_dim);
        for k in &self.operators {
            s += k.conjugate().kronecker(k);
        }
        s
    }

    pub fn to_transfer(&self) -> TransferMatrix {
        TransferMatrix::from_superop(&self.superop(), self.in_dim, self.out_dim).expect("shapes match")
    }

    pub fn to_choi(&self) -> ChoiOperator {
        ChoiOperator {
            matrix: superop_to_choi_matrix(&self.superop(), self.in_dim, self.out_dim),
            in_dim: self.in_dim,
            out_dim: self.out_dim,
        }
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        check_input(rho, self.in_dim)?;
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.operators {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    /// `‖Σ K^† K − I‖_F`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut s = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.operators {
            s += k.adjoint() * k;
        }
        (s - CMatrix::identity(self.in_dim, self.in_dim)).norm()
    }
}

/// Transfer matrix of `ρ ↦ Σ_i p_i U_i ρ U_i^†`.
pub fn randomized_mixture(unitaries: &[CMatrix], probs: &[f64]) -> Result<TransferMatrix> {
    if unitaries.len() != probs.len() || unitaries.is_empty() {
        return Err(EqnnError::Invalid("need one probability per unitary".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 || probs.iter().any(|&p| p < 0.0) {
        return Err(EqnnError::Invalid(format!("probabilities must be nonnegative and sum to 1 (got {total})")));
    }
    let ops = unitaries
        .iter()
        .zip(probs)
        .map(|(u, &p)| u.scale(p.sqrt()))
        .collect();
    Ok(KrausSet::new(ops)?.to_transfer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, pauli::single, CVector, Pauli, ONE};

    #[test]
    fn identity_channel_choi_is_bell_projector() {
        let j = TransferMatrix::identity(2).to_choi();
        let mut phi = CVector::zeros(4);
        phi[0] = ONE;
        phi[3] = ONE;
        assert!((j.matrix.clone() - &phi * phi.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn gamma_agrees_with_choi_reshuffle_and_is_involution() {
        let s = CMatrix::from_fn(9, 9, |i, j| c((i * 9 + j) as f64, (i as f64) - (j as f64)));
        let g = gamma(&s, 3);
        assert_eq!(g, superop_to_choi_matrix(&s, 3, 3));
        assert_eq!(gamma(&g, 3), s);
    }

    #[test]
    fn xz_mixture_has_two_kraus() {
        let x = single(Pauli::X);
        let z = single(Pauli::Z);
        let t = TransferMatrix::from_fn(2, 2, |r| (&x * r * &x + &z * r * &z).scale(0.5));
        let j = t.to_choi();
        let (vals, _) = hermitian_eig_unchecked(&j.matrix);
        assert!((vals[2] - 1.0).abs() < 1e-12 && (vals[3] - 1.0).abs() < 1e-12);
        assert!(vals[0].abs() < 1e-12 && vals[1].abs() < 1e-12);
        let k = j.to_kraus(PSD_TOL).unwrap();
        assert_eq!(k.operators.len(), 2);
        assert!(k.completeness_deviation() < 1e-12);
    }

    #[test]
    fn bit_flip_mixture_transfer() {
        let t = randomized_mixture(&[identity(2), single(Pauli::X)], &[0.5, 0.5]).unwrap();
        let want = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, ONE, c(0.0, 0.0), c(0.0, 0.0)]));
        assert!((t.matrix - want).norm() < 1e-12);
    }

    #[test]
    fn apply_rejects_wrong_size() {
        assert!(TransferMatrix::identity(2).apply(&identity(4)).is_err());
    }
}
