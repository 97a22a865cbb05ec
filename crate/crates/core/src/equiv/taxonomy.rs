//! Layer taxonomy and Fourier-space checks.

use serde::{Deserialize, Serialize};

use crate::error::{EqnnError, Result};
use crate::group::{enumerate_joint, IsotypicDecomposition, Representation};
use crate::linalg::{c, kron, real_nullspace, trace, CMatrix, RMatrix, NULLSPACE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerSize {
    Standard,
    Embedding,
    Pooling,
}

/// How the kernels of consecutive representations compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelRelation {
    /// `ker R_in ⊊ ker R_out`.
    Projection,
    /// `ker R_out ⊊ ker R_in`.
    Lifting,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerClass {
    pub size: LayerSize,
    pub kernel: KernelRelation,
}

/// Whether `u` is a multiple of the identity, i.e. acts trivially by conjugation.
fn is_scalar(u: &CMatrix) -> bool {
    let d = u.nrows();
    let s = trace(u) / c(d as f64, 0.0);
    (u - CMatrix::identity(d, d) * s).norm() <= 1e-8 * (d as f64).sqrt()
}

fn finite_relation(r_in: &Representation, r_out: &Representation) -> Result<KernelRelation> {
    let elems = enumerate_joint(&[r_in, r_out], r_in.group.enumeration_bound())?;
    let (mut in_only, mut out_only) = (0usize, 0usize);
    for (_, mats) in &elems {
        match (is_scalar(&mats[0]), is_scalar(&mats[1])) {
            (true, false) => in_only += 1,
            (false, true) => out_only += 1,
            _ => {}
        }
    }
    Ok(relation(in_only, out_only))
}

fn relation(in_only: usize, out_only: usize) -> KernelRelation {
    match (in_only, out_only) {
        (0, n) if n > 0 => KernelRelation::Projection,
        (n, 0) if n > 0 => KernelRelation::Lifting,
        _ => KernelRelation::Neither,
    }
}

/// Real matrix whose nullspace is the kernel of the algebra map (modulo the
/// identity, which acts trivially by conjugation).
fn algebra_kernel_system(r: &Representation) -> RMatrix {
    let d = r.dim;
    let k = r.n_generators();
    let mut m = RMatrix::zeros(2 * d * d, k);
    for (j, g) in r.generators.iter().enumerate() {
        let s = trace(g) / c(d as f64, 0.0);
        let traceless = g - CMatrix::identity(d, d) * s;
        for (i, z) in traceless.iter().enumerate() {
            m[(i, j)] = z.re;
            m[(d * d + i, j)] = z.im;
        }
    }
    m
}

fn lie_relation(r_in: &Representation, r_out: &Representation) -> KernelRelation {
    let a = algebra_kernel_system(r_in);
    let b = algebra_kernel_system(r_out);
    let dim_in = real_nullspace(&a, NULLSPACE_TOL).ncols();
    let dim_out = real_nullspace(&b, NULLSPACE_TOL).ncols();
    let mut stacked = RMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    stacked.view_mut((0, 0), a.shape()).copy_from(&a);
    stacked.view_mut((a.nrows(), 0), b.shape()).copy_from(&b);
    let both = real_nullspace(&stacked, NULLSPACE_TOL).ncols();
    relation(dim_in - both, dim_out - both)
}

/// Classifies a layer by operator-space size and kernel inclusion.
///
/// Kernels are taken projectively (elements acting as scalars count as
/// trivial). Lie representations compare algebra-level kernels.
pub fn classify_layer(r_in: &Representation, r_out: &Representation) -> Result<LayerClass> {
    if r_in.group.kind != r_out.group.kind || r_in.n_generators() != r_out.n_generators() {
        return Err(EqnnError::Invalid("representations must share a group".into()));
    }
    let size = match r_in.dim.cmp(&r_out.dim) {
        std::cmp::Ordering::Equal => LayerSize::Standard,
        std::cmp::Ordering::Less => LayerSize::Embedding,
        std::cmp::Ordering::Greater => LayerSize::Pooling,
    };
    let kernel = if r_in.is_finite() {
        finite_relation(r_in, r_out)?
    } else {
        lie_relation(r_in, r_out)
    };
    Ok(LayerClass { size, kernel })
}

/// `ρ^{⊗k}`, refusing outputs with more than `max_dim` rows.
pub fn nonlinear_embed(rho: &CMatrix, k: usize, max_dim: usize) -> Result<CMatrix> {
    if k == 0 {
        return Err(EqnnError::Invalid("embedding needs k >= 1".into()));
    }
    let d = rho.nrows();
    let total = (d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > max_dim as u128 {
        return Err(EqnnError::Invalid(format!("dimension {d}^{k} exceeds the cap {max_dim}")));
    }
    let mut out = rho.clone();
    for _ in 1..k {
        out = kron(&out, rho);
    }
    Ok(out)
}

/// Residual of `W u W^†` against `⊕ I_{d_λ} ⊗ u_λ` and the blocks `u_λ`.
pub fn fourier_action_check(u: &CMatrix, dec: &IsotypicDecomposition) -> (f64, Vec<CMatrix>) {
    dec.commutant_blocks(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic_shift_rep, isotypic_decompose, su2_defining, su2_tensor};
    use crate::linalg::{expm, swap_matrix};

    #[test]
    fn su2_pooling_is_pooling() {
        let c = classify_layer(&su2_tensor(2), &su2_defining()).unwrap();
        assert_eq!(c.size, LayerSize::Pooling);
        assert_eq!(c.kernel, KernelRelation::Neither);
        let s = classify_layer(&su2_tensor(2), &su2_tensor(2)).unwrap();
        assert_eq!(s.size, LayerSize::Standard);
        let e = classify_layer(&su2_defining(), &su2_tensor(2)).unwrap();
        assert_eq!(e.size, LayerSize::Embedding);
    }

    #[test]
    fn cyclic_half_trace_is_projection() {
        let c = classify_layer(&cyclic_shift_rep(4), &cyclic_shift_rep(2)).unwrap();
        assert_eq!(c.size, LayerSize::Pooling);
        assert_eq!(c.kernel, KernelRelation::Projection);
        let l = classify_layer(&cyclic_shift_rep(2), &cyclic_shift_rep(4)).unwrap();
        assert_eq!(l.kernel, KernelRelation::Lifting);
    }

    #[test]
    fn embed_powers() {
        let mut rho = CMatrix::zeros(2, 2);
        rho[(0, 0)] = c(1.0, 0.0);
        assert_eq!(nonlinear_embed(&rho, 1, 16).unwrap(), rho);
        let two = nonlinear_embed(&rho, 2, 16).unwrap();
        assert_eq!(two[(0, 0)], c(1.0, 0.0));
        assert!((two.norm() - 1.0).abs() < 1e-15);
        assert!(nonlinear_embed(&rho, 5, 16).is_err());
    }

    #[test]
    fn swap_exponential_acts_by_phases() {
        let dec = isotypic_decompose(&su2_tensor(2), 2, 1).unwrap();
        let theta = 0.37;
        let u = expm(&(swap_matrix() * c(0.0, -theta)));
        let (res, parts) = fourier_action_check(&u, &dec);
        assert!(res < 1e-8);
        let mut phases: Vec<f64> = parts.iter().map(|p| p[(0, 0)].arg()).collect();
        phases.sort_by(f64::total_cmp);
        assert!((phases[0] + theta).abs() < 1e-10 && (phases[1] - theta).abs() < 1e-10);
        let (r0, _) = fourier_action_check(&CMatrix::identity(4, 4), &dec);
        assert!(r0 < 1e-12);
    }
}
