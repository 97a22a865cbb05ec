//! Adjoint actions as matrices on an operator basis.

use super::Representation;
use crate::error::{EqnnError, Result};
use crate::linalg::{commutator, unitary_deviation, CMatrix, OperatorBasis, RMatrix};

/// Matrix of `Ad_u(ρ) = u ρ u^†` in `basis`: column `j` holds the
/// coefficients of `Ad_u(B_j)`.
pub fn adjoint_superop(u: &CMatrix, basis: &OperatorBasis) -> Result<CMatrix> {
    let dev = unitary_deviation(u);
    if dev > 1e-8 {
        return Err(EqnnError::NotUnitary(dev));
    }
    Ok(adjoint_unchecked(u, basis))
}

pub(crate) fn adjoint_unchecked(u: &CMatrix, basis: &OperatorBasis) -> CMatrix {
    let n = basis.len();
    let ud = u.adjoint();
    let mut out = CMatrix::zeros(n, n);
    for (j, b) in basis.elements().iter().enumerate() {
        let img = u * b * &ud;
        out.set_column(j, &basis.coefficients(&img));
    }
    out
}

/// Matrix of `ad_a(ρ) = [a, ρ]` in `basis`.
pub fn adjoint_algebra_superop(a: &CMatrix, basis: &OperatorBasis) -> CMatrix {
    let n = basis.len();
    let mut out = CMatrix::zeros(n, n);
    for (j, b) in basis.elements().iter().enumerate() {
        out.set_column(j, &basis.coefficients(&commutator(a, b)));
    }
    out
}

/// Real matrices of the generator actions on a Hermitian orthonormal basis:
/// `Ad_{R(g)}` for finite groups and `ad_{r(a)}` for Lie algebras. Both are
/// real because they map Hermitian operators to Hermitian operators.
pub fn real_actions(rep: &Representation, basis: &OperatorBasis) -> Vec<RMatrix> {
    rep.generators
        .iter()
        .map(|g| {
            let m = if rep.is_finite() {
                adjoint_unchecked(g, basis)
            } else {
                adjoint_algebra_superop(g, basis)
            };
            m.map(|z| z.re)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::haar_unitary;
    use crate::linalg::{c, expm, expm_skew, identity, pauli::single, pauli_basis, Pauli};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ad_identity_is_identity() {
        let b = pauli_basis(2);
        let a = adjoint_superop(&identity(4), &b).unwrap();
        assert!((a - identity(16)).norm() < 1e-14);
        assert!(adjoint_algebra_superop(&identity(4), &b).norm() < 1e-14);
    }

    #[test]
    fn ad_x_is_diag() {
        let a = adjoint_superop(&single(Pauli::X), &pauli_basis(1)).unwrap();
        let want = CMatrix::from_diagonal(&crate::linalg::CVector::from_vec(vec![
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(-1.0, 0.0),
            c(-1.0, 0.0),
        ]));
        assert!((a - want).norm() < 1e-14);
    }

    #[test]
    fn ad_z_algebra_entries() {
        // [Z, X] = 2iY, [Z, Y] = -2iX, [Z, I] = [Z, Z] = 0
        let a = adjoint_algebra_superop(&single(Pauli::Z), &pauli_basis(1));
        assert!((a[(2, 1)] - c(0.0, 2.0)).norm() < 1e-14);
        assert!((a[(1, 2)] - c(0.0, -2.0)).norm() < 1e-14);
        assert!((a.norm_squared() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn homomorphism_and_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = pauli_basis(2);
        let u = haar_unitary(4, &mut rng);
        let v = haar_unitary(4, &mut rng);
        let lhs = adjoint_superop(&(&u * &v), &b).unwrap();
        let rhs = adjoint_superop(&u, &b).unwrap() * adjoint_superop(&v, &b).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);

        let h = haar_unitary(4, &mut rng);
        let a = (&h + h.adjoint()) * c(0.0, 0.5);
        let theta = 0.8;
        let lhs = expm(&(adjoint_algebra_superop(&a, &b) * c(theta, 0.0)));
        let rhs = adjoint_superop(&expm_skew(&(a * c(theta, 0.0))), &b).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn non_unitary_rejected() {
        assert!(adjoint_superop(&(identity(2) * c(2.0, 0.0)), &pauli_basis(1)).is_err());
    }
}
