//! Equivariant maps as the joint nullspace of commutation constraints.

use super::{tagged_basis, EquivarianceProblem, EquivariantBasis, Provenance, TraceTag};
use crate::error::{EqnnError, Result};
use crate::linalg::{real_nullspace, to_complex, BasisKind, CMatrix, PauliString, RMatrix, NULLSPACE_TOL};

/// Real constraint `M = A_in^T ⊗ I_out − I_in ⊗ A_out` for generator `k`, so
/// that `M vec(T) = vec(T A_in − A_out T)` vanishes exactly when the transfer
/// matrix `T` intertwines that generator's actions.
pub(crate) fn constraint_real(a_in: &RMatrix, a_out: &RMatrix) -> RMatrix {
    let ni = a_in.nrows();
    let no = a_out.nrows();
    let mut m = RMatrix::zeros(ni * no, ni * no);
    // column (j, i) ↔ T[i, j] at index j*no + i
    for j in 0..ni {
        for i in 0..no {
            let col = j * no + i;
            // (T A_in)[i, l] = Σ_j T[i, j] A_in[j, l]
            for l in 0..ni {
                let v = a_in[(j, l)];
                if v != 0.0 {
                    m[(l * no + i, col)] += v;
                }
            }
            // (A_out T)[r, j] = Σ_i A_out[r, i] T[i, j]
            for r in 0..no {
                let v = a_out[(r, i)];
                if v != 0.0 {
                    m[(j * no + r, col)] -= v;
                }
            }
        }
    }
    m
}

/// Constraint matrix for generator (or algebra generator) `k`.
pub fn constraint_matrix(problem: &EquivarianceProblem, k: usize) -> Result<CMatrix> {
    let (ain, aout) = problem.actions();
    if k >= ain.len() {
        return Err(EqnnError::Invalid(format!("generator index {k} out of range")));
    }
    Ok(to_complex(&constraint_real(&ain[k], &aout[k])))
}

/// Indices of vectorized transfer-matrix entries allowed by the locality cap.
pub(crate) fn allowed_entries(problem: &EquivarianceProblem) -> Result<Vec<usize>> {
    let ni = problem.in_dim() * problem.in_dim();
    let no = problem.out_dim() * problem.out_dim();
    let Some(w) = problem.locality else {
        return Ok((0..ni * no).collect());
    };
    let (BasisKind::Pauli(nin), BasisKind::Pauli(nout)) = (problem.in_basis().kind(), problem.out_basis().kind())
    else {
        return Err(EqnnError::Invalid("a locality cap needs qubit representations".into()));
    };
    let mut out = Vec::new();
    for j in 0..ni {
        if PauliString::from_index(nin, j).weight() > w {
            continue;
        }
        for i in 0..no {
            if PauliString::from_index(nout, i).weight() <= w {
                out.push(j * no + i);
            }
        }
    }
    Ok(out)
}

/// Basis of all equivariant linear maps, from one SVD of the vertically
/// stacked constraints of every generator.
pub fn solve_nullspace(problem: &EquivarianceProblem) -> Result<EquivariantBasis> {
    let (ain, aout) = problem.actions();
    let n = problem.vec_len();
    let cols = allowed_entries(problem)?;
    let mut stacked = RMatrix::zeros(ain.len() * n, cols.len());
    for (g, (a, b)) in ain.iter().zip(&aout).enumerate() {
        let m = constraint_real(a, b);
        for (k, &c) in cols.iter().enumerate() {
            stacked.view_mut((g * n, k), (n, 1)).copy_from(&m.column(c));
        }
    }
    let null = real_nullspace(&stacked, NULLSPACE_TOL);
    let mut full = RMatrix::zeros(n, null.ncols());
    for (k, &c) in cols.iter().enumerate() {
        for b in 0..null.ncols() {
            full[(c, b)] = null[(k, b)];
        }
    }
    tagged_basis(problem, &full, Provenance::Nullspace)
}

/// Splits the span of `vecs` into a trace-preserving element (if one exists),
/// trace-annihilating elements and trace-altering elements.
///
/// The trace of `φ(ρ)` is read off row 0 of the transfer matrix: a map is
/// trace annihilating when that row vanishes, and trace preserving when it
/// equals `√(d_in/d_out) e_0`.
pub(crate) fn canonicalize_trace_tags(vecs: &RMatrix, in_dim: usize, out_dim: usize) -> (Vec<Vec<f64>>, Vec<TraceTag>) {
    let k = vecs.ncols();
    let ni = in_dim * in_dim;
    let no = out_dim * out_dim;
    if k == 0 {
        return (Vec::new(), Vec::new());
    }
    // F[j, b] = T_b[0, j]
    let f = RMatrix::from_fn(ni, k, |j, b| vecs[(j * no, b)]);
    let ann = real_nullspace(&f, NULLSPACE_TOL);
    let comp = if ann.ncols() == 0 {
        RMatrix::identity(k, k)
    } else {
        real_nullspace(&ann.transpose(), NULLSPACE_TOL)
    };

    let mut coeffs: Vec<(RMatrix, TraceTag)> = Vec::new();
    let mut altering = comp.clone();
    if comp.ncols() > 0 && ni > 1 {
        let g = f.rows(1, ni - 1) * &comp;
        let p = real_nullspace(&g, NULLSPACE_TOL);
        if p.ncols() >= 1 {
            let p0 = p.columns(0, 1).clone_owned();
            let mut c = &comp * &p0;
            let f0 = (f.row(0) * &c)[(0, 0)];
            let target = (in_dim as f64 / out_dim as f64).sqrt();
            c *= target / f0;
            coeffs.push((c, TraceTag::TracePreserving));
            let rest = real_nullspace(&p0.transpose(), NULLSPACE_TOL);
            altering = &comp * rest;
        }
    } else if comp.ncols() > 0 {
        // 1x1 operators: the only row entry is the trace itself
        let mut c = comp.columns(0, 1).clone_owned();
        let f0 = (f.row(0) * &c)[(0, 0)];
        c *= (in_dim as f64 / out_dim as f64).sqrt() / f0;
        coeffs.push((c, TraceTag::TracePreserving));
        altering = RMatrix::zeros(k, 0);
    }
    for b in 0..ann.ncols() {
        coeffs.push((ann.columns(b, 1).clone_owned(), TraceTag::TraceAnnihilating));
    }
    for b in 0..altering.ncols() {
        coeffs.push((altering.columns(b, 1).clone_owned(), TraceTag::TraceAltering));
    }

    let mut out = Vec::with_capacity(coeffs.len());
    let mut tags = Vec::with_capacity(coeffs.len());
    for (c, tag) in coeffs {
        let mut v: Vec<f64> = (vecs * c).iter().copied().collect();
        if tag != TraceTag::TracePreserving {
            normalize_sign(&mut v);
        }
        out.push(v);
        tags.push(tag);
    }
    (out, tags)
}

/// Unit norm with the largest-magnitude entry positive.
fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |a, x| if x.abs() > a.abs() + 1e-12 { x } else { a });
    let s = if pivot < 0.0 { -1.0 / norm } else { 1.0 / norm };
    v.iter_mut().for_each(|x| *x *= s);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{is_tp, TransferMatrix};
    use crate::group::{trivial_group, trivial_rep, GroupSpec, Representation};
    use crate::linalg::{pauli::single, Pauli};

    fn z2_problem() -> EquivarianceProblem {
        let spec = GroupSpec::finite("Z2", &["s"]);
        let rin = Representation::finite(spec.clone(), vec![single(Pauli::X)]).unwrap();
        let rout = Representation::finite(spec, vec![single(Pauli::Z)]).unwrap();
        EquivarianceProblem::new(rin, rout).unwrap()
    }

    #[test]
    fn trivial_group_gives_all_maps() {
        let r = trivial_rep(&trivial_group(), 2);
        let p = EquivarianceProblem::new(r.clone(), r).unwrap();
        let b = solve_nullspace(&p).unwrap();
        assert_eq!(b.len(), 16);
        assert!(constraint_matrix(&p, 0).unwrap().norm() == 0.0);
        assert_eq!(b.count(TraceTag::TracePreserving), 1);
        assert_eq!(b.count(TraceTag::TraceAnnihilating), 12);
        assert_eq!(b.count(TraceTag::TraceAltering), 3);
    }

    #[test]
    fn z2_example_has_eight_maps() {
        let p = z2_problem();
        let b = solve_nullspace(&p).unwrap();
        assert_eq!(b.len(), 8);
        for r in &b.residuals {
            assert!(*r < 1e-10);
        }
        let tp = &b.elements[0];
        assert_eq!(b.trace_tags[0], TraceTag::TracePreserving);
        assert!(is_tp(&tp.to_choi(), 1e-10).0);
    }

    #[test]
    fn known_equivariant_map_is_annihilated() {
        // φ(ρ) = H ρ H maps the X-action to the Z-action
        let p = z2_problem();
        let h = (single(Pauli::X) + single(Pauli::Z)).scale(0.5f64.sqrt());
        let t = TransferMatrix::from_fn(2, 2, |r| &h * r * &h);
        let m = constraint_matrix(&p, 0).unwrap();
        let v = crate::linalg::vectorize(&t.matrix);
        assert!((m * v).norm() < 1e-10);
    }
}
