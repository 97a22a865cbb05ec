//! Commutants of representations.

use super::adjoint::real_actions;
use super::Representation;
use crate::error::{EqnnError, Result};
use crate::linalg::{
    c, hermitian_basis, real_nullspace, BasisKind, CMatrix, OperatorBasis, PauliString, RMatrix, NULLSPACE_TOL,
};

/// Basis of `{H : [H, R(g)] = 0 for all generators}`, as Hermitian operators
/// orthonormal in the Hilbert–Schmidt inner product.
///
/// With `weight_cap = Some(w)` only Pauli strings acting on at most `w`
/// qubits are allowed as unknowns, which shrinks the linear system from
/// exponential to polynomial size in the qubit count.
pub fn commutant_basis(rep: &Representation, weight_cap: Option<usize>) -> Result<OperatorBasis> {
    let basis = hermitian_basis(rep.dim);
    let columns: Vec<usize> = match weight_cap {
        None => (0..basis.len()).collect(),
        Some(w) => {
            let BasisKind::Pauli(n) = basis.kind() else {
                return Err(EqnnError::Invalid(
                    "a Pauli weight cap needs a qubit (power-of-two) representation".into(),
                ));
            };
            (0..basis.len())
                .filter(|&i| PauliString::from_index(n, i).weight() <= w)
                .collect()
        }
    };
    let coords = commutant_coordinates(rep, &basis, &columns);
    let elements = (0..coords.ncols())
        .map(|k| {
            let mut m = CMatrix::zeros(rep.dim, rep.dim);
            for (row, &col) in columns.iter().enumerate() {
                let x = coords[(row, k)];
                if x != 0.0 {
                    m += &basis.elements()[col] * c(x, 0.0);
                }
            }
            m
        })
        .collect();
    OperatorBasis::new(elements)
}

/// Real coordinates (over the chosen basis columns) of the commutant.
fn commutant_coordinates(rep: &Representation, basis: &OperatorBasis, columns: &[usize]) -> RMatrix {
    let actions = real_actions(rep, basis);
    let n = basis.len();
    let mut stacked = RMatrix::zeros(actions.len() * n, columns.len());
    for (g, a) in actions.iter().enumerate() {
        for (k, &col) in columns.iter().enumerate() {
            for row in 0..n {
                let mut v = a[(row, col)];
                if rep.is_finite() && row == col {
                    v -= 1.0;
                }
                stacked[(g * n + row, k)] = v;
            }
        }
    }
    real_nullspace(&stacked, NULLSPACE_TOL)
}
