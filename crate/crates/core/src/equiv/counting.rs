//! Parameter counts of equivariant unitaries and channels.

use serde::{Deserialize, Serialize};

use crate::error::{EqnnError, Result};
use crate::group::{commutant_basis, dual_rep, isotypic_decompose, tensor_product, Representation};
use crate::linalg::{hermitian_basis, partial_trace, real_rank, RMatrix, NULLSPACE_TOL};

const DECOMPOSE_SAMPLES: usize = 4;
const DECOMPOSE_SEED: u64 = 0x5eed;

/// Dimension of the commutant of `r`, i.e. the number of real parameters of
/// an equivariant Hermitian generator, computed as `Σ m_λ²`.
pub fn count_parameters_unitary(r: &Representation) -> Result<usize> {
    Ok(isotypic_decompose(r, DECOMPOSE_SAMPLES, DECOMPOSE_SEED)?.sum_m2())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelCount {
    /// `Σ m_λ²` for `R_in* ⊗ R_out`.
    pub sum_m2: usize,
    /// Number of independent linear constraints from trace preservation.
    pub tp_rank: usize,
    /// Affine dimension of equivariant CPTP maps, `sum_m2 − tp_rank`.
    pub net: usize,
}

/// Counts equivariant channel parameters.
///
/// The trace-preservation constraints are the linear map `J ↦ Tr_out J`
/// restricted to the Hermitian commutant of `R_in* ⊗ R_out`; its rank is the
/// number of parameters they remove.
pub fn count_parameters_channel(r_in: &Representation, r_out: &Representation) -> Result<ChannelCount> {
    let rc = tensor_product(&dual_rep(r_in), r_out)?;
    let sum_m2 = count_parameters_unitary(&rc)?;
    let comm = commutant_basis(&rc, None)?;
    let (din, dout) = (r_in.dim, r_out.dim);
    let hb = hermitian_basis(din);
    let mut m = RMatrix::zeros(din * din, comm.len());
    for (j, p) in comm.elements().iter().enumerate() {
        let reduced = partial_trace(p, &[din, dout], &[0])?;
        for (i, z) in hb.coefficients(&reduced).iter().enumerate() {
            m[(i, j)] = z.re;
        }
    }
    let scale = m.amax().max(1.0);
    let tp_rank = real_rank(&m, NULLSPACE_TOL * scale);
    if sum_m2 != comm.len() {
        return Err(EqnnError::Decomposition(format!(
            "commutant dimension {} disagrees with block count {sum_m2}",
            comm.len()
        )));
    }
    Ok(ChannelCount {
        sum_m2,
        tp_rank,
        net: sum_m2 - tp_rank,
    })
}

/// Ratio of unconstrained to equivariant CPTP parameter counts,
/// `(d_in² d_out² − d_in²) / net`.
pub fn parameter_utilization(r_in: &Representation, r_out: &Representation) -> Result<f64> {
    let count = count_parameters_channel(r_in, r_out)?;
    if count.net == 0 {
        return Err(EqnnError::Invalid("no free equivariant channel parameters".into()));
    }
    let (din, dout) = (r_in.dim as f64, r_out.dim as f64);
    Ok((din * din * dout * dout - din * din) / count.net as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{su2_defining, su2_tensor, symmetric_qubit_rep, trivial_group, trivial_rep, GroupSpec};
    use crate::linalg::{kron, pauli::single, Pauli};

    #[test]
    fn trivial_single_qubit_channels() {
        let r = trivial_rep(&trivial_group(), 2);
        let c = count_parameters_channel(&r, &r).unwrap();
        assert_eq!((c.sum_m2, c.tp_rank, c.net), (16, 4, 12));
        assert!((parameter_utilization(&r, &r).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn su2_pooling_counts() {
        let c = count_parameters_channel(&su2_tensor(2), &su2_defining()).unwrap();
        assert_eq!((c.sum_m2, c.tp_rank, c.net), (5, 2, 3));
    }

    #[test]
    fn su2_two_to_two_utilization() {
        let r = su2_tensor(2);
        let c = count_parameters_channel(&r, &r).unwrap();
        assert_eq!(c.sum_m2, 14);
        let mu = parameter_utilization(&r, &r).unwrap();
        assert!(mu >= 240.0 / 14.0 - 1e-9);
    }

    #[test]
    fn symmetric_group_unitary_count() {
        assert_eq!(count_parameters_unitary(&symmetric_qubit_rep(3)).unwrap(), 20);
    }

    #[test]
    fn larger_group_gives_larger_utilization() {
        let x = single(Pauli::X);
        let i = single(Pauli::I);
        let z2 = Representation::finite(GroupSpec::finite("Z2", &["a"]), vec![kron(&x, &x)]).unwrap();
        let z2z2 = Representation::finite(
            GroupSpec::finite("Z2xZ2", &["a", "b"]),
            vec![kron(&x, &x), kron(&x, &i)],
        )
        .unwrap();
        let small = parameter_utilization(&z2, &z2).unwrap();
        let big = parameter_utilization(&z2z2, &z2z2).unwrap();
        assert!(big > small);
    }
}
