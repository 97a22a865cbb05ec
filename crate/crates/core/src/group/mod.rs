//! Group representations given by generators.
//!
//! A finite group is presented by unitary images of a generating set. A
//! compact Lie group is presented by anti-Hermitian images of a basis of its
//! Lie algebra, optionally together with a [`LieRealization`] that evaluates
//! the representation on sampled group elements.

pub mod adjoint;
pub mod commutant;
pub mod enumerate;
pub mod haar;
pub mod isotypic;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EqnnError, Result};
use crate::linalg::json::MatrixJson;
use crate::linalg::{
    c, hermitian_basis, identity, kron, pauli::single, qubit_permutation_matrix,
    unitary_deviation, CMatrix, Pauli,
};

pub use adjoint::{adjoint_algebra_superop, adjoint_superop};
pub use commutant::commutant_basis;
pub use enumerate::{enumerate_group, enumerate_joint, GroupElement};
pub use haar::{haar_su2, haar_unitary};
pub use isotypic::{isotypic_decompose, IsotypicBlock, IsotypicDecomposition};

pub const REP_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_GROUP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Finite,
    Lie,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub name: String,
    /// Labels of the group generators (finite) or algebra generators (Lie).
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
}

impl GroupSpec {
    pub fn finite(name: &str, generators: &[&str]) -> Self {
        Self {
            kind: GroupKind::Finite,
            name: name.into(),
            generators: generators.iter().map(|s| s.to_string()).collect(),
            max_size: None,
        }
    }

    pub fn lie(name: &str, generators: &[&str]) -> Self {
        Self {
            kind: GroupKind::Lie,
            name: name.into(),
            generators: generators.iter().map(|s| s.to_string()).collect(),
            max_size: None,
        }
    }

    pub fn su2() -> Self {
        Self::lie("SU(2)", &["X", "Y", "Z"])
    }

    pub fn enumeration_bound(&self) -> usize {
        self.max_size.unwrap_or(DEFAULT_MAX_GROUP)
    }
}

/// Compact Lie groups with a Haar sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LieGroup {
    SU2,
    /// U(d) in its defining dimension.
    U(usize),
}

impl LieGroup {
    pub fn defining_dim(self) -> usize {
        match self {
            LieGroup::SU2 => 2,
            LieGroup::U(d) => d,
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> CMatrix {
        match self {
            LieGroup::SU2 => haar_su2(rng),
            LieGroup::U(d) => haar_unitary(d, rng),
        }
    }

    /// Anti-Hermitian basis of the Lie algebra in the defining representation.
    pub fn algebra_basis(self) -> Vec<CMatrix> {
        let mi = c(0.0, -1.0);
        match self {
            LieGroup::SU2 => [Pauli::X, Pauli::Y, Pauli::Z]
                .iter()
                .map(|&p| single(p) * (mi * 0.5))
                .collect(),
            LieGroup::U(d) => hermitian_basis(d)
                .into_elements()
                .into_iter()
                .map(|b| b * mi)
                .collect(),
        }
    }

    pub fn spec(self) -> GroupSpec {
        match self {
            LieGroup::SU2 => GroupSpec::su2(),
            LieGroup::U(d) => {
                let labels: Vec<String> = (0..d * d).map(|i| format!("h{i}")).collect();
                GroupSpec {
                    kind: GroupKind::Lie,
                    name: format!("U({d})"),
                    generators: labels,
                    max_size: None,
                }
            }
        }
    }
}

/// One tensor factor of a Lie representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Defining,
    Dual,
    /// Trivial action on a space of the given dimension.
    Trivial(usize),
}

impl Factor {
    fn dim(self, group: LieGroup) -> usize {
        match self {
            Factor::Trivial(d) => d,
            _ => group.defining_dim(),
        }
    }

    fn dual(self) -> Factor {
        match self {
            Factor::Defining => Factor::Dual,
            Factor::Dual => Factor::Defining,
            t => t,
        }
    }
}

/// `R(g) = ⊗_k f_k(g)` with `f_k(g) ∈ {g, g*, I}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieRealization {
    pub group: LieGroup,
    pub factors: Vec<Factor>,
}

impl LieRealization {
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim(self.group)).product()
    }

    /// Representation matrix of the defining-representation element `g`.
    pub fn eval(&self, g: &CMatrix) -> CMatrix {
        let mut out = identity(1);
        for f in &self.factors {
            let m = match f {
                Factor::Defining => g.clone(),
                Factor::Dual => g.conjugate(),
                Factor::Trivial(d) => identity(*d),
            };
            out = kron(&out, &m);
        }
        out
    }

    /// Image of the algebra element `a` (given in the defining representation).
    pub fn algebra_image(&self, a: &CMatrix) -> CMatrix {
        let dims: Vec<usize> = self.factors.iter().map(|f| f.dim(self.group)).collect();
        let total = self.dim();
        let mut out = CMatrix::zeros(total, total);
        for (k, f) in self.factors.iter().enumerate() {
            let local = match f {
                Factor::Defining => a.clone(),
                Factor::Dual => a.conjugate(),
                Factor::Trivial(_) => continue,
            };
            let left: usize = dims[..k].iter().product();
            let right: usize = dims[k + 1..].iter().product();
            out += kron(&kron(&identity(left), &local), &identity(right));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub group: GroupSpec,
    pub dim: usize,
    /// Unitary generator images (finite) or anti-Hermitian algebra images (Lie).
    pub generators: Vec<CMatrix>,
    pub realization: Option<LieRealization>,
}

impl Representation {
    /// Finite-group representation from unitary generator images.
    pub fn finite(group: GroupSpec, generators: Vec<CMatrix>) -> Result<Self> {
        if group.kind != GroupKind::Finite {
            return Err(EqnnError::Invalid("finite representation needs a finite group spec".into()));
        }
        let dim = check_generators(&group, &generators)?;
        for g in &generators {
            let dev = unitary_deviation(g);
            if dev > REP_TOL {
                return Err(EqnnError::NotUnitary(dev));
            }
        }
        Ok(Self {
            group,
            dim,
            generators,
            realization: None,
        })
    }

    /// Lie-algebra representation from anti-Hermitian generator images.
    pub fn lie(group: GroupSpec, generators: Vec<CMatrix>, realization: Option<LieRealization>) -> Result<Self> {
        if group.kind != GroupKind::Lie {
            return Err(EqnnError::Invalid("Lie representation needs a Lie group spec".into()));
        }
        let dim = check_generators(&group, &generators)?;
        for a in &generators {
            let dev = (a + a.adjoint()).norm();
            if dev > REP_TOL {
                return Err(EqnnError::Invalid(format!(
                    "algebra image is not anti-Hermitian (deviation {dev:.3e})"
                )));
            }
        }
        if let Some(r) = &realization {
            if r.dim() != dim {
                return Err(EqnnError::DimensionMismatch(format!(
                    "realization has dimension {} but generators are {dim}x{dim}",
                    r.dim()
                )));
            }
        }
        Ok(Self {
            group,
            dim,
            generators,
            realization,
        })
    }

    /// Builds the Lie representation determined by a realization.
    pub fn from_realization(realization: LieRealization) -> Self {
        let generators = realization
            .group
            .algebra_basis()
            .iter()
            .map(|a| realization.algebra_image(a))
            .collect();
        Self {
            group: realization.group.spec(),
            dim: realization.dim(),
            generators,
            realization: Some(realization),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.group.kind == GroupKind::Finite
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    /// Evaluates the representation on a sampled defining-representation element.
    pub fn eval(&self, g: &CMatrix) -> Result<CMatrix> {
        self.realization
            .as_ref()
            .map(|r| r.eval(g))
            .ok_or(EqnnError::MissingSampler)
    }

    fn same_group(&self, other: &Representation) -> Result<()> {
        if self.group.kind != other.group.kind || self.generators.len() != other.generators.len() {
            return Err(EqnnError::Invalid(format!(
                "representations of different groups: {} and {}",
                self.group.name, other.group.name
            )));
        }
        Ok(())
    }
}

fn check_generators(group: &GroupSpec, generators: &[CMatrix]) -> Result<usize> {
    if generators.len() != group.generators.len() {
        return Err(EqnnError::Invalid(format!(
            "{} generator matrices for {} generator labels",
            generators.len(),
            group.generators.len()
        )));
    }
    let dim = generators.first().map(|g| g.nrows()).unwrap_or(1);
    if generators.iter().any(|g| g.shape() != (dim, dim)) {
        return Err(EqnnError::DimensionMismatch("generator matrices must be square and equal-sized".into()));
    }
    Ok(dim)
}

/// Defining representation of SU(2).
pub fn su2_defining() -> Representation {
    Representation::from_realization(LieRealization {
        group: LieGroup::SU2,
        factors: vec![Factor::Defining],
    })
}

/// `g ↦ g^{⊗n}` for SU(2).
pub fn su2_tensor(n: usize) -> Representation {
    tensor_rep(&su2_defining(), n)
}

/// Defining representation of U(d).
pub fn unitary_defining(d: usize) -> Representation {
    Representation::from_realization(LieRealization {
        group: LieGroup::U(d),
        factors: vec![Factor::Defining],
    })
}

/// Trivial representation on a `dim`-dimensional space.
pub fn trivial_rep(group: &GroupSpec, dim: usize) -> Representation {
    let k = group.generators.len();
    match group.kind {
        GroupKind::Finite => Representation {
            group: group.clone(),
            dim,
            generators: vec![identity(dim); k],
            realization: None,
        },
        GroupKind::Lie => Representation {
            group: group.clone(),
            dim,
            generators: vec![CMatrix::zeros(dim, dim); k],
            realization: lie_group_of(group).map(|g| LieRealization {
                group: g,
                factors: vec![Factor::Trivial(dim)],
            }),
        },
    }
}

fn lie_group_of(spec: &GroupSpec) -> Option<LieGroup> {
    if spec == &GroupSpec::su2() {
        return Some(LieGroup::SU2);
    }
    let d = (spec.generators.len() as f64).sqrt().round() as usize;
    (d * d == spec.generators.len() && spec.name == format!("U({d})")).then_some(LieGroup::U(d))
}

/// The trivial group presented with a single identity generator.
pub fn trivial_group() -> GroupSpec {
    GroupSpec::finite("trivial", &["e"])
}

/// `k`-fold tensor power.
pub fn tensor_rep(r: &Representation, k: usize) -> Representation {
    let mut out = r.clone();
    for _ in 1..k {
        out = tensor_product(&out, r).expect("same group");
    }
    if k == 0 {
        return trivial_rep(&r.group, 1);
    }
    out
}

/// `R_1 ⊗ R_2` for two representations of the same group.
pub fn tensor_product(a: &Representation, b: &Representation) -> Result<Representation> {
    a.same_group(b)?;
    let generators = match a.group.kind {
        GroupKind::Finite => a
            .generators
            .iter()
            .zip(&b.generators)
            .map(|(x, y)| kron(x, y))
            .collect(),
        GroupKind::Lie => a
            .generators
            .iter()
            .zip(&b.generators)
            .map(|(x, y)| kron(x, &identity(b.dim)) + kron(&identity(a.dim), y))
            .collect(),
    };
    let realization = match (&a.realization, &b.realization) {
        (Some(ra), Some(rb)) if ra.group == rb.group => Some(LieRealization {
            group: ra.group,
            factors: ra.factors.iter().chain(&rb.factors).copied().collect(),
        }),
        _ => None,
    };
    Ok(Representation {
        group: a.group.clone(),
        dim: a.dim * b.dim,
        generators,
        realization,
    })
}

/// Direct sum `R_1 ⊕ R_2`.
pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    a.same_group(b)?;
    let generators = a
        .generators
        .iter()
        .zip(&b.generators)
        .map(|(x, y)| {
            let mut m = CMatrix::zeros(a.dim + b.dim, a.dim + b.dim);
            m.view_mut((0, 0), (a.dim, a.dim)).copy_from(x);
            m.view_mut((a.dim, a.dim), (b.dim, b.dim)).copy_from(y);
            m
        })
        .collect();
    Ok(Representation {
        group: a.group.clone(),
        dim: a.dim + b.dim,
        generators,
        realization: None,
    })
}

/// Dual representation `g ↦ R(g)*` (entrywise complex conjugate).
pub fn dual_rep(r: &Representation) -> Representation {
    Representation {
        group: r.group.clone(),
        dim: r.dim,
        generators: r.generators.iter().map(|g| g.conjugate()).collect(),
        realization: r.realization.as_ref().map(|re| LieRealization {
            group: re.group,
            factors: re.factors.iter().map(|f| f.dual()).collect(),
        }),
    }
}

/// Representation of a permutation group acting by permuting `n` qubits.
/// Each generator is a permutation of `0..n` (qubit `q` moves to `perm[q]`).
pub fn qubit_permutation_rep(name: &str, perms: &[Vec<usize>], n: usize) -> Result<Representation> {
    for p in perms {
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(EqnnError::Invalid(format!("{p:?} is not a permutation of 0..{n}")));
        }
    }
    let labels: Vec<String> = perms.iter().map(|p| format!("{p:?}")).collect();
    let spec = GroupSpec {
        kind: GroupKind::Finite,
        name: name.into(),
        generators: labels,
        max_size: None,
    };
    Representation::finite(spec, perms.iter().map(|p| qubit_permutation_matrix(p)).collect())
}

/// The symmetric group S_n permuting `n` qubits, generated by adjacent
/// transpositions.
pub fn symmetric_qubit_rep(n: usize) -> Representation {
    let perms: Vec<Vec<usize>> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, i + 1);
            p
        })
        .collect();
    qubit_permutation_rep(&format!("S{n}"), &perms, n).expect("valid permutations")
}

/// Z_n acting on `n` qubits by the cyclic shift `q ↦ q + 1 mod n`.
pub fn cyclic_shift_rep(n: usize) -> Representation {
    let perm: Vec<usize> = (0..n).map(|q| (q + 1) % n).collect();
    let spec = GroupSpec::finite(&format!("Z{n}"), &["shift"]);
    Representation::finite(spec, vec![qubit_permutation_matrix(&perm)]).expect("permutation is unitary")
}

/// Left regular representation of the finite group generated by `r`
/// (which must be faithful). Basis vectors are indexed by the enumeration
/// order of [`enumerate_group`].
pub fn regular_rep(r: &Representation) -> Result<Representation> {
    let elems = enumerate_group(r, r.group.enumeration_bound())?;
    let n = elems.len();
    let find = |m: &CMatrix| -> Result<usize> {
        elems
            .iter()
            .position(|e| (&e.matrix - m).norm() <= enumerate::DEDUP_TOL)
            .ok_or_else(|| EqnnError::Invalid("product left the enumerated group".into()))
    };
    let mut gens = Vec::with_capacity(r.generators.len());
    for s in &r.generators {
        let mut m = CMatrix::zeros(n, n);
        for (h, e) in elems.iter().enumerate() {
            let t = find(&(s * &e.matrix))?;
            m[(t, h)] = c(1.0, 0.0);
        }
        gens.push(m);
    }
    let mut spec = r.group.clone();
    spec.name = format!("{} (regular)", r.group.name);
    Representation::finite(spec, gens)
}

/// JSON form of a representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub group: String,
    pub dim: usize,
    pub generators: Vec<MatrixJson>,
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<LieRealization>,
}

impl RepresentationJson {
    pub fn from_rep(r: &Representation) -> Self {
        Self {
            group: r.group.name.clone(),
            dim: r.dim,
            generators: r.generators.iter().map(MatrixJson::from_matrix).collect(),
            kind: r.group.kind,
            labels: Some(r.group.generators.clone()),
            realization: r.realization.clone(),
        }
    }

    pub fn to_rep(&self) -> Result<Representation> {
        if let Some(real) = &self.realization {
            let rep = Representation::from_realization(real.clone());
            if rep.dim != self.dim {
                return Err(EqnnError::DimensionMismatch(format!(
                    "realization dimension {} differs from declared {}",
                    rep.dim, self.dim
                )));
            }
            return Ok(rep);
        }
        let gens = self
            .generators
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        if gens.iter().any(|g| g.shape() != (self.dim, self.dim)) {
            return Err(EqnnError::DimensionMismatch(format!(
                "generators do not match declared dimension {}",
                self.dim
            )));
        }
        let labels = self
            .labels
            .clone()
            .unwrap_or_else(|| (0..gens.len()).map(|i| format!("g{i}")).collect());
        let spec = GroupSpec {
            kind: self.kind,
            name: self.group.clone(),
            generators: labels,
            max_size: None,
        };
        match self.kind {
            GroupKind::Finite => Representation::finite(spec, gens),
            GroupKind::Lie => Representation::lie(spec, gens, None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_skew, swap_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn su2_tensor_generators_are_sums() {
        let r = su2_tensor(2);
        let x = single(Pauli::X);
        let want = (kron(&x, &identity(2)) + kron(&identity(2), &x)) * c(0.0, -0.5);
        assert!((&r.generators[0] - want).norm() < 1e-15);
    }

    #[test]
    fn realization_matches_exponentiated_algebra() {
        let r = su2_tensor(3);
        let real = r.realization.clone().unwrap();
        for (k, a) in LieGroup::SU2.algebra_basis().iter().enumerate() {
            let theta = 0.37 + k as f64;
            let g = expm_skew(&(a * c(theta, 0.0)));
            let lhs = real.eval(&g);
            let rhs = expm_skew(&(&r.generators[k] * c(theta, 0.0)));
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn dual_rep_conjugates() {
        let r = su2_defining();
        let d = dual_rep(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = haar_su2(&mut rng);
        assert!((d.eval(&g).unwrap() - g.conjugate()).norm() < 1e-15);
    }

    #[test]
    fn cyclic_shift_has_order_n() {
        let r = cyclic_shift_rep(3);
        let g = &r.generators[0];
        assert_eq!(g.nrows(), 8);
        assert!((g * g * g - identity(8)).norm() < 1e-15);
        assert!((g - identity(8)).norm() > 1.0);
        assert_eq!(enumerate_group(&r, 10).unwrap().len(), 3);
    }

    #[test]
    fn regular_rep_of_z2() {
        let spec = GroupSpec::finite("Z2", &["x"]);
        let r = Representation::finite(spec, vec![single(Pauli::X)]).unwrap();
        let reg = regular_rep(&r).unwrap();
        assert_eq!(reg.dim, 2);
        assert!((&reg.generators[0] - single(Pauli::X)).norm() < 1e-15);
    }

    #[test]
    fn swap_commutes_with_su2_tensor() {
        let r = su2_tensor(2);
        for a in &r.generators {
            assert!((a * swap_matrix() - swap_matrix() * a).norm() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip() {
        let r = cyclic_shift_rep(2);
        let j = RepresentationJson::from_rep(&r);
        let text = serde_json::to_string(&j).unwrap();
        let back: RepresentationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_rep().unwrap(), r);
        let s = su2_tensor(2);
        let back = RepresentationJson::from_rep(&s).to_rep().unwrap();
        assert!((back.generators[1].clone() - &s.generators[1]).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_generator_rejected() {
        let spec = GroupSpec::finite("bad", &["g"]);
        let m = identity(2) * c(2.0, 0.0);
        assert!(matches!(Representation::finite(spec, vec![m]), Err(EqnnError::NotUnitary(_))));
    }
}
