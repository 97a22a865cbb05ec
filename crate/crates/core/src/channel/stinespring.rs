//! Stinespring dilation by unitary completion of stacked Kraus operators.

use super::KrausSet;
use crate::error::{EqnnError, Result};
use crate::linalg::{partial_trace, unitary_deviation, CMatrix, CVector, C64};

/// A unitary `U` on `H_env ⊗ H_out` whose first `d_in` columns are the
/// isometry `|ψ> ↦ Σ_k |k> ⊗ K_k|ψ>`. The channel is
/// `ρ ↦ Tr_env[U (ρ ⊕ 0) U^†]`, where `ρ ⊕ 0` places the input in the first
/// `d_in` basis states (environment reference state index 0 when
/// `d_in = d_out`).
#[derive(Debug, Clone)]
pub struct StinespringDilation {
    pub unitary: CMatrix,
    pub env_dim: usize,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl StinespringDilation {
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.shape() != (self.in_dim, self.in_dim) {
            return Err(EqnnError::DimensionMismatch("input does not match the dilation".into()));
        }
        let n = self.unitary.nrows();
        let mut big = CMatrix::zeros(n, n);
        big.view_mut((0, 0), (self.in_dim, self.in_dim)).copy_from(rho);
        let out = &self.unitary * big * self.unitary.adjoint();
        partial_trace(&out, &[self.env_dim, self.out_dim], &[1])
    }
}

/// Completes the stacked Kraus isometry to a unitary. The environment has
/// the smallest power-of-two dimension holding all Kraus operators (and the
/// input, for dimension-reducing channels). Completion runs Gram–Schmidt over
/// the standard basis in order, so the result is deterministic.
pub fn stinespring_dilate(k: &KrausSet) -> Result<StinespringDilation> {
    let dev = k.completeness_deviation();
    if dev > 1e-10 {
        return Err(EqnnError::NotTracePreserving(dev));
    }
    let r = k.operators.len();
    let need = r.max(k.in_dim.div_ceil(k.out_dim));
    let env_dim = need.next_power_of_two();
    let n = env_dim * k.out_dim;
    let mut u = CMatrix::zeros(n, n);
    for (idx, op) in k.operators.iter().enumerate() {
        u.view_mut((idx * k.out_dim, 0), (k.out_dim, k.in_dim)).copy_from(op);
    }
    let mut filled = k.in_dim;
    let mut candidate = 0;
    while filled < n {
        let mut v = CVector::zeros(n);
        v[candidate] = C64::new(1.0, 0.0);
        candidate += 1;
        for _ in 0..2 {
            for j in 0..filled {
                let col = u.column(j);
                let proj = col.dotc(&v);
                v -= col * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            u.set_column(filled, &(v / C64::new(norm, 0.0)));
            filled += 1;
        }
        if candidate > n && filled < n {
            return Err(EqnnError::NoConvergence("unitary completion ran out of candidates".into()));
        }
    }
    let udev = unitary_deviation(&u);
    if udev > 1e-10 {
        return Err(EqnnError::NoConvergence(format!("completed dilation not unitary ({udev:.3e})")));
    }
    Ok(StinespringDilation {
        unitary: u,
        env_dim,
        in_dim: k.in_dim,
        out_dim: k.out_dim,
    })
}
