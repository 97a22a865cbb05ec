//! Pauli strings and fast Pauli-basis traces.

use std::fmt;

use super::{c, CMatrix, C64, ONE, ZERO};
use crate::error::{EqnnError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i & 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// (x bit, z bit) of the symplectic representation; Y = i X Z.
    fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Unnormalized single-qubit Pauli matrix.
pub fn single(p: Pauli) -> CMatrix {
    match p {
        Pauli::I => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        Pauli::X => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Pauli::Y => CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        Pauli::Z => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// A tensor product of single-qubit Paulis; letter 0 acts on qubit 0, the
/// most significant bit of the computational index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    pub letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            letters: vec![Pauli::I; n],
        }
    }

    /// The string at position `index` in lexicographic order I<X<Y<Z with
    /// qubit 0 most significant.
    pub fn from_index(n: usize, index: usize) -> Self {
        let letters = (0..n)
            .map(|q| Pauli::from_index(index >> (2 * (n - 1 - q))))
            .collect();
        Self { letters }
    }

    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, p| acc * 4 + p.index())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(EqnnError::Invalid(format!("bad Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters })
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Bit masks (x, z, number of Y letters) in computational-index order.
    pub fn masks(&self) -> (usize, usize, usize) {
        let n = self.letters.len();
        let mut x = 0;
        let mut z = 0;
        let mut ny = 0;
        for (q, p) in self.letters.iter().enumerate() {
            let (xb, zb) = p.xz();
            let bit = 1 << (n - 1 - q);
            if xb {
                x |= bit;
            }
            if zb {
                z |= bit;
            }
            if xb && zb {
                ny += 1;
            }
        }
        (x, z, ny)
    }

    /// Unnormalized matrix.
    pub fn matrix(&self) -> CMatrix {
        let n = self.letters.len();
        let d = 1usize << n;
        let (x, z, ny) = self.masks();
        let phase = i_pow(ny);
        let mut m = CMatrix::zeros(d, d);
        for b in 0..d {
            let sign = if (z & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b ^ x, b)] = phase * sign;
        }
        m
    }

    /// Matrix scaled so that `Tr[P P] = 1`.
    pub fn normalized_matrix(&self) -> CMatrix {
        let s = (2f64).powf(-(self.letters.len() as f64) / 2.0);
        self.matrix().scale(s)
    }

    /// `Tr[P m]` for the unnormalized string, in O(d) time.
    pub fn trace_with(&self, m: &CMatrix) -> C64 {
        let d = m.nrows();
        let (x, z, ny) = self.masks();
        let mut acc = ZERO;
        // P[b ^ x, b] = i^ny (-1)^{pop(z & b)}, so Tr[P m] = Σ_b P[b ^ x, b] m[b, b ^ x]
        for b in 0..d {
            let sign = if (z & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            acc += m[(b, b ^ x)] * sign;
        }
        acc * i_pow(ny)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            let ch = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    #[test]
    fn matrix_matches_kron() {
        for idx in 0..16 {
            let p = PauliString::from_index(2, idx);
            let want = kron(&single(p.letters[0]), &single(p.letters[1]));
            assert!((p.matrix() - want).norm() < 1e-15, "{p}");
            assert_eq!(p.index(), idx);
        }
    }

    #[test]
    fn fast_trace_matches_dense() {
        let m = CMatrix::from_fn(8, 8, |i, j| c((i * 3 + j) as f64 * 0.1, (i as f64) - (j as f64) * 0.5));
        for idx in 0..64 {
            let p = PauliString::from_index(3, idx);
            let dense = (p.matrix() * &m).trace();
            assert!((dense - p.trace_with(&m)).norm() < 1e-12, "{p}");
        }
    }

    #[test]
    fn parse_round_trip() {
        let p = PauliString::parse("XIZY").unwrap();
        assert_eq!(p.to_string(), "XIZY");
        assert_eq!(p.weight(), 3);
        assert!(PauliString::parse("XQ").is_err());
    }
}
