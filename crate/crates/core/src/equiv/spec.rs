//! Serializable descriptions of representations and equivariance problems.

use serde::{Deserialize, Serialize};

use super::EquivarianceProblem;
use crate::error::{EqnnError, Result};
use crate::group::{qubit_permutation_rep, GroupSpec, Representation, RepresentationJson};
use crate::linalg::pauli::PauliString;

/// A representation written as explicit matrices, Pauli-string generators or
/// qubit permutations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RepSpec {
    Explicit(RepresentationJson),
    /// Finite group generated by Pauli strings such as `"XI"`.
    Pauli { group: String, generators: Vec<String> },
    /// Finite group permuting `n` qubits; qubit `q` moves to `perm[q]`.
    Permutation {
        group: String,
        n: usize,
        generators: Vec<Vec<usize>>,
    },
}

impl RepSpec {
    pub fn build(&self) -> Result<Representation> {
        match self {
            RepSpec::Explicit(r) => r.to_rep(),
            RepSpec::Pauli { group, generators } => {
                let strings = generators
                    .iter()
                    .map(|s| PauliString::parse(s))
                    .collect::<Result<Vec<_>>>()?;
                let labels: Vec<&str> = generators.iter().map(String::as_str).collect();
                Representation::finite(
                    GroupSpec::finite(group, &labels),
                    strings.iter().map(PauliString::matrix).collect(),
                )
            }
            RepSpec::Permutation { group, n, generators } => qubit_permutation_rep(group, generators, *n),
        }
    }
}

/// Seed maps used by the twirl method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedSet {
    /// Every unit transfer matrix.
    Units,
    /// Trace-preserving Pauli seeds.
    TpPauli,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(default)]
    pub name: String,
    pub r_in: RepSpec,
    pub r_out: RepSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locality: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<SeedSet>,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<EquivarianceProblem> {
        let p = EquivarianceProblem::new(self.r_in.build()?, self.r_out.build()?)?;
        Ok(match self.locality {
            Some(w) => p.with_locality(w),
            None => p,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| EqnnError::Invalid(format!("problem spec: {e}")))
    }
}
