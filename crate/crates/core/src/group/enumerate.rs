//! Closure of a finite generating set.

use super::Representation;
use crate::error::{EqnnError, Result};
use crate::linalg::{identity, CMatrix};

/// Frobenius distance below which two group elements are identified.
pub const DEDUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct GroupElement {
    /// Generator indices whose product (left to right) gives the element.
    pub word: Vec<usize>,
    pub matrix: CMatrix,
}

/// All elements of the group generated by `rep`'s generators, identity
/// first, in breadth-first order of word length.
pub fn enumerate_group(rep: &Representation, max_size: usize) -> Result<Vec<GroupElement>> {
    let joint = enumerate_joint(&[rep], max_size)?;
    Ok(joint
        .into_iter()
        .map(|(word, mut mats)| GroupElement {
            word,
            matrix: mats.pop().expect("one representation"),
        })
        .collect())
}

/// Enumerates the group generated jointly by several representations of the
/// same abstract group: the element for word `w` is the tuple
/// `(R_1(w), …, R_k(w))`, deduplicated on the whole tuple. This gives the
/// correct abstract group even when some of the representations are not
/// faithful.
pub fn enumerate_joint(reps: &[&Representation], max_size: usize) -> Result<Vec<(Vec<usize>, Vec<CMatrix>)>> {
    let first = reps
        .first()
        .ok_or_else(|| EqnnError::Invalid("no representation to enumerate".into()))?;
    if reps.iter().any(|r| !r.is_finite()) {
        return Err(EqnnError::Invalid("enumeration needs a finite group".into()));
    }
    let k = first.n_generators();
    if reps.iter().any(|r| r.n_generators() != k) {
        return Err(EqnnError::Invalid("representations have different generator counts".into()));
    }
    let mut elems: Vec<(Vec<usize>, Vec<CMatrix>)> =
        vec![(Vec::new(), reps.iter().map(|r| identity(r.dim)).collect())];
    let mut frontier = 0;
    while frontier < elems.len() {
        let (word, mats) = elems[frontier].clone();
        for s in 0..k {
            let next: Vec<CMatrix> = mats
                .iter()
                .zip(reps)
                .map(|(m, r)| m * &r.generators[s])
                .collect();
            let known = elems.iter().any(|(_, e)| {
                e.iter()
                    .zip(&next)
                    .map(|(a, b)| (a - b).norm_squared())
                    .sum::<f64>()
                    .sqrt()
                    <= DEDUP_TOL
            });
            if !known {
                if elems.len() >= max_size {
                    return Err(EqnnError::GroupTooLarge(max_size));
                }
                let mut w = word.clone();
                w.push(s);
                elems.push((w, next));
            }
        }
        frontier += 1;
    }
    Ok(elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{symmetric_qubit_rep, GroupSpec};
    use crate::linalg::{kron, pauli::single, Pauli};

    #[test]
    fn z2_has_two_elements() {
        let spec = GroupSpec::finite("Z2", &["x"]);
        let r = Representation::finite(spec, vec![single(Pauli::X)]).unwrap();
        assert_eq!(enumerate_group(&r, 10).unwrap().len(), 2);
    }

    #[test]
    fn z2xz2_on_two_qubits() {
        let spec = GroupSpec::finite("Z2xZ2", &["a", "b"]);
        let x = single(Pauli::X);
        let i = single(Pauli::I);
        let r = Representation::finite(spec, vec![kron(&x, &i), kron(&i, &x)]).unwrap();
        assert_eq!(enumerate_group(&r, 10).unwrap().len(), 4);
    }

    #[test]
    fn s3_has_six_elements() {
        let r = symmetric_qubit_rep(3);
        let elems = enumerate_group(&r, 100).unwrap();
        assert_eq!(elems.len(), 6);
        // every word reproduces its matrix
        for e in &elems {
            let mut m = identity(8);
            for &s in &e.word {
                m *= &r.generators[s];
            }
            assert!((m - &e.matrix).norm() < 1e-12);
        }
    }

    #[test]
    fn bound_is_enforced() {
        let r = symmetric_qubit_rep(3);
        assert!(matches!(enumerate_group(&r, 4), Err(EqnnError::GroupTooLarge(4))));
    }

    #[test]
    fn joint_enumeration_sees_unfaithful_factor() {
        // g ↦ i has order 4, g ↦ -1 only order 2
        let spec = GroupSpec::finite("Z4", &["g"]);
        let a = Representation::finite(spec.clone(), vec![identity(1) * crate::linalg::c(0.0, 1.0)]).unwrap();
        let b = Representation::finite(spec, vec![identity(1) * crate::linalg::c(-1.0, 0.0)]).unwrap();
        assert_eq!(enumerate_joint(&[&a, &b], 10).unwrap().len(), 4);
        assert_eq!(enumerate_joint(&[&b], 10).unwrap().len(), 2);
    }
}
