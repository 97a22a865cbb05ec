//! JSON encoding of complex matrices: `{"rows", "cols", "data": [[re, im], ...]}`
//! with `data` in row-major order.

use serde::{Deserialize, Serialize};

use super::{c, CMatrix};
use crate::error::{EqnnError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(EqnnError::Invalid(format!(
                "matrix JSON has {} entries, expected {}x{}",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        if self.data.iter().any(|z| !z[0].is_finite() || !z[1].is_finite()) {
            return Err(EqnnError::Invalid("matrix JSON contains non-finite entries".into()));
        }
        Ok(CMatrix::from_row_iterator(
            self.rows,
            self.cols,
            self.data.iter().map(|z| c(z[0], z[1])),
        ))
    }
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self::from_matrix(m)
    }
}
