//! Complete positivity, trace preservation and unitality checks.

use super::{ChoiOperator, TransferMatrix};
use crate::linalg::{min_eigenvalue, partial_trace, CMatrix};

/// `(J ≥ -tol, min eigenvalue of J)`.
pub fn is_cp(j: &ChoiOperator, tol: f64) -> (bool, f64) {
    let min = min_eigenvalue(&j.matrix);
    (min >= -tol, min)
}

/// `(‖Tr_out J − I_in‖_F ≤ tol, deviation)`. Tracing out the output factor
/// of the Choi operator leaves an operator on the input space.
pub fn is_tp(j: &ChoiOperator, tol: f64) -> (bool, f64) {
    let red = partial_trace(&j.matrix, &[j.in_dim, j.out_dim], &[0]).expect("Choi dimensions");
    let dev = (red - CMatrix::identity(j.in_dim, j.in_dim)).norm();
    (dev <= tol, dev)
}

/// `(φ(I/d_in) = I/d_out within tol, deviation)`.
pub fn is_unital(t: &TransferMatrix, tol: f64) -> (bool, f64) {
    // φ(B_0) with B_0 = I/√d_in must equal √(d_in/d_out) B_0^out
    let col = t.matrix.column(0);
    let target = (t.in_dim as f64 / t.out_dim as f64).sqrt();
    let mut dev = (col[0].re - target).powi(2) + col[0].im.powi(2);
    for z in col.iter().skip(1) {
        dev += z.norm_sqr();
    }
    let dev = dev.sqrt();
    (dev <= tol, dev)
}
