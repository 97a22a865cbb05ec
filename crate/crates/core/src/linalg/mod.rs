//! Dense complex linear algebra on top of nalgebra.
//!
//! Superoperators use column-stacking vectorization throughout:
//! `vec(|a><b|)` has its single nonzero entry at index `b * rows + a`, and
//! `vec(A X B) = (B^T ⊗ A) vec(X)`.

pub mod basis;
pub mod json;
pub mod pauli;

use nalgebra::{DMatrix, DVector};
use nalgebra::Complex;

use crate::error::{EqnnError, Result};

pub use basis::{hermitian_basis, pauli_basis, BasisKind, OperatorBasis};
pub use pauli::{Pauli, PauliString};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default relative singular-value threshold for nullspaces.
pub const NULLSPACE_TOL: f64 = 1e-9;
/// Singular values below this are zero regardless of the matrix scale.
const ABS_FLOOR: f64 = 1e-13;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all(mats: &[CMatrix]) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for m in mats {
        out = out.kronecker(m);
    }
    out
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Hilbert–Schmidt inner product `Tr[a^† b]`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `‖m − m^†‖_F`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).norm()
}

/// `‖u^† u − I‖_F`.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.nrows())).norm()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermitian_deviation(m) <= tol
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    unitary_deviation(u) <= tol
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

/// Column-stacking vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn devectorize(v: &CVector, rows: usize, cols: usize) -> Result<CMatrix> {
    if v.len() != rows * cols {
        return Err(EqnnError::DimensionMismatch(format!(
            "vector of length {} cannot be reshaped to {rows}x{cols}",
            v.len()
        )));
    }
    Ok(CMatrix::from_column_slice(rows, cols, v.as_slice()))
}

/// Partial trace of `m` on a tensor product with subsystem dimensions
/// `dims`, keeping the subsystems listed in `keep` (in their original order).
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.nrows() != total {
        return Err(EqnnError::DimensionMismatch(format!(
            "matrix is {}x{} but subsystem dims multiply to {total}",
            m.nrows(),
            m.ncols()
        )));
    }
    if let Some(&k) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(EqnnError::DimensionMismatch(format!(
            "subsystem {k} out of range for {} subsystems",
            dims.len()
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // strides of each subsystem in the full index (last subsystem fastest)
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let offset = |sub: &[usize], sub_dims: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for (pos, &s) in sub.iter().enumerate().rev() {
            let d = sub_dims[pos];
            off += (idx % d) * strides[s];
            idx /= d;
        }
        off
    };
    let kept_off: Vec<usize> = (0..dk).map(|i| offset(&keep_sorted, &kept_dims, i)).collect();
    let traced_off: Vec<usize> = (0..dt).map(|i| offset(&traced, &traced_dims, i)).collect();

    let mut out = CMatrix::zeros(dk, dk);
    for (i, &ri) in kept_off.iter().enumerate() {
        for (j, &cj) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m[(ri + t, cj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn hermitian_eig(m: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    let dev = hermitian_deviation(m);
    if dev > tol * m.norm().max(1.0) {
        return Err(EqnnError::NotHermitian(dev));
    }
    Ok(hermitian_eig_unchecked(m))
}

/// Eigen-decomposition of the Hermitian part of `m`.
pub fn hermitian_eig_unchecked(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigenvalues of a real symmetric matrix, ascending, with eigenvectors.
pub fn real_symmetric_eig(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), RMatrix::zeros(0, 0));
    }
    let h = (m + m.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = RMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eig_unchecked(m).0.first().copied().unwrap_or(0.0)
}

/// Thin singular value decomposition `m = u diag(s) v^†`, values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd {
            u: CMatrix::zeros(r, 0),
            s: Vec::new(),
            v: CMatrix::zeros(c, 0),
        };
    }
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    let k = dec.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let mut uu = CMatrix::zeros(r, k);
    let mut vv = CMatrix::zeros(c, k);
    let mut s = Vec::with_capacity(k);
    for (pos, &i) in order.iter().enumerate() {
        uu.set_column(pos, &u.column(i));
        vv.set_column(pos, &v_t.row(i).adjoint());
        s.push(dec.singular_values[i]);
    }
    Svd { u: uu, s, v: vv }
}

/// Reduces a tall matrix to an upper-triangular square factor with the same
/// row space (and hence the same kernel).
fn compress_rows(m: &CMatrix) -> CMatrix {
    let (r, c) = m.shape();
    if r > 2 * c {
        m.clone().qr().r()
    } else {
        m.clone()
    }
}

/// Orthonormal basis (as columns) of the kernel of `m`. A right singular
/// vector belongs to the kernel when its singular value is at most
/// `tol * σ_max`.
pub fn nullspace(m: &CMatrix, tol: f64) -> CMatrix {
    let c = m.ncols();
    if c == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.iter().all(|z| *z == ZERO) {
        return CMatrix::identity(c, c);
    }
    let mut a = compress_rows(m);
    if a.nrows() < c {
        let mut padded = CMatrix::zeros(c, c);
        padded.view_mut((0, 0), a.shape()).copy_from(&a);
        a = padded;
    }
    let dec = svd(&a);
    let smax = dec.s.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..dec.s.len()).filter(|&i| dec.s[i] <= (tol * smax).max(ABS_FLOOR)).collect();
    let mut out = CMatrix::zeros(c, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &dec.v.column(i));
    }
    out
}

/// Real kernel of a real matrix, orthonormal columns.
pub fn real_nullspace(m: &RMatrix, tol: f64) -> RMatrix {
    let c = m.ncols();
    if c == 0 {
        return RMatrix::zeros(0, 0);
    }
    if m.amax() == 0.0 {
        return RMatrix::identity(c, c);
    }
    let mut a = if m.nrows() > 2 * c {
        m.clone().qr().r()
    } else {
        m.clone()
    };
    if a.nrows() < c {
        let mut padded = RMatrix::zeros(c, c);
        padded.view_mut((0, 0), a.shape()).copy_from(&a);
        a = padded;
    }
    let dec = a.svd(false, true);
    let v_t = dec.v_t.expect("v_t requested");
    let smax = dec.singular_values.max();
    let keep: Vec<usize> = (0..dec.singular_values.len())
        .filter(|&i| dec.singular_values[i] <= (tol * smax).max(ABS_FLOOR))
        .collect();
    let mut out = RMatrix::zeros(c, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &v_t.row(i).transpose());
    }
    out
}

/// Real vectors `x` with `m x = 0` for complex `m`, found by stacking the real
/// and imaginary parts.
pub fn realified_nullspace(m: &CMatrix, tol: f64) -> RMatrix {
    let (r, c) = m.shape();
    let mut stacked = RMatrix::zeros(2 * r, c);
    for i in 0..r {
        for j in 0..c {
            stacked[(i, j)] = m[(i, j)].re;
            stacked[(r + i, j)] = m[(i, j)].im;
        }
    }
    real_nullspace(&stacked, tol)
}

/// Numerical rank with a relative singular-value threshold.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    let s = svd(&compress_rows(m)).s;
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > (tol * smax).max(ABS_FLOOR)).count()
}

pub fn real_rank(m: &RMatrix, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().svd(false, false).singular_values;
    let smax = s.max();
    s.iter().filter(|&&x| x > (tol * smax).max(ABS_FLOOR)).count()
}

/// Orthonormal basis of the column span of a real matrix.
pub fn real_orthonormal_span(m: &RMatrix, tol: f64) -> RMatrix {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return RMatrix::zeros(r, 0);
    }
    let dec = m.clone().svd(true, false);
    let u = dec.u.expect("u requested");
    let smax = dec.singular_values.max();
    let keep: Vec<usize> = (0..dec.singular_values.len())
        .filter(|&i| smax > 0.0 && dec.singular_values[i] > tol * smax)
        .collect();
    let mut out = RMatrix::zeros(r, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &u.column(i));
    }
    out
}

/// Frobenius distance between the orthogonal projectors onto two column spans.
pub fn projector_distance(a: &RMatrix, b: &RMatrix) -> f64 {
    let qa = real_orthonormal_span(a, 1e-10);
    let qb = real_orthonormal_span(b, 1e-10);
    let pa = &qa * qa.transpose();
    let pb = &qb * qb.transpose();
    (pa - pb).norm()
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=24 {
        term = &term * &scaled;
        term.scale_mut(1.0 / k as f64);
        sum += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(a)` for anti-Hermitian `a`, via the spectral decomposition of `-i a`.
pub fn expm_skew(a: &CMatrix) -> CMatrix {
    let h = a.map(|z| z * c(0.0, -1.0));
    let (vals, vecs) = hermitian_eig_unchecked(&h);
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| C64::from_polar(1.0, l)),
    ));
    &vecs * phases * vecs.adjoint()
}

/// Permutation matrix sending computational basis state `|b_0 … b_{n-1}>` to
/// the state whose qubit `perm[q]` carries bit `b_q`. Qubit 0 is the most
/// significant bit.
pub fn qubit_permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let d = 1usize << n;
    let mut m = CMatrix::zeros(d, d);
    for b in 0..d {
        let mut t = 0usize;
        for (q, &p) in perm.iter().enumerate() {
            let bit = (b >> (n - 1 - q)) & 1;
            t |= bit << (n - 1 - p);
        }
        m[(t, b)] = ONE;
    }
    m
}

/// SWAP on two qubits.
pub fn swap_matrix() -> CMatrix {
    qubit_permutation_matrix(&[1, 0])
}
