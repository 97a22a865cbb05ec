//! Construction and verification of equivariant superoperators.
//!
//! A map φ is equivariant when `φ ∘ Ad_{R_in(g)} = Ad_{R_out(g)} ∘ φ` for all
//! group elements. Three constructions are provided and cross-checked:
//! the joint nullspace of linear commutation constraints ([`solve_nullspace`]),
//! group averaging ([`twirl`]), and block parameterization of the Choi
//! operator in the isotypic basis of `R_in* ⊗ R_out` ([`solve_choi_method`]).

pub mod choi_method;
pub mod counting;
pub mod nullspace;
pub mod spec;
pub mod taxonomy;
pub mod twirl;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::channel::TransferMatrix;
use crate::error::{EqnnError, Result};
use crate::group::adjoint::real_actions;
use crate::group::{GroupKind, GroupSpec, Representation};
use crate::linalg::{hermitian_basis, projector_distance, OperatorBasis, RMatrix};

pub use choi_method::{solve_choi_method, ChoiBlockFamily};
pub use counting::{count_parameters_channel, count_parameters_unitary, parameter_utilization, ChannelCount};
pub use nullspace::{constraint_matrix, solve_nullspace};
pub use spec::{ProblemSpec, RepSpec, SeedSet};
pub use taxonomy::{classify_layer, fourier_action_check, nonlinear_embed, KernelRelation, LayerClass, LayerSize};
pub use twirl::{
    antisymmetric_norm, solve_twirl, tp_pauli_seeds, twirl, twirl_operator_weingarten, twirl_superoperator, twirled_span, TwirlConfig,
    TwirlMode, TwirlResult,
};
pub use verify::{model_invariance, verify_basis, verify_equivariance};

/// Whether constraints are imposed on group generators or on Lie-algebra
/// generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Group,
    Algebra,
}

#[derive(Debug, Clone)]
pub struct EquivarianceProblem {
    pub group: GroupSpec,
    pub r_in: Representation,
    pub r_out: Representation,
    pub level: Level,
    /// Optional cap on the Pauli weight of transfer-matrix indices.
    pub locality: Option<usize>,
}

impl EquivarianceProblem {
    pub fn new(r_in: Representation, r_out: Representation) -> Result<Self> {
        if r_in.group.kind != r_out.group.kind || r_in.n_generators() != r_out.n_generators() {
            return Err(EqnnError::Invalid(format!(
                "input ({}) and output ({}) representations must share a group",
                r_in.group.name, r_out.group.name
            )));
        }
        let level = match r_in.group.kind {
            GroupKind::Finite => Level::Group,
            GroupKind::Lie => Level::Algebra,
        };
        Ok(Self {
            group: r_in.group.clone(),
            r_in,
            r_out,
            level,
            locality: None,
        })
    }

    pub fn with_locality(mut self, weight: usize) -> Self {
        self.locality = Some(weight);
        self
    }

    pub fn in_dim(&self) -> usize {
        self.r_in.dim
    }

    pub fn out_dim(&self) -> usize {
        self.r_out.dim
    }

    pub fn in_basis(&self) -> OperatorBasis {
        hermitian_basis(self.r_in.dim)
    }

    pub fn out_basis(&self) -> OperatorBasis {
        hermitian_basis(self.r_out.dim)
    }

    /// Real generator actions on the input and output operator spaces.
    pub fn actions(&self) -> (Vec<RMatrix>, Vec<RMatrix>) {
        (
            real_actions(&self.r_in, &self.in_basis()),
            real_actions(&self.r_out, &self.out_basis()),
        )
    }

    /// Length of a vectorized transfer matrix.
    pub fn vec_len(&self) -> usize {
        let a = self.in_dim() * self.in_dim();
        let b = self.out_dim() * self.out_dim();
        a * b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceTag {
    TracePreserving,
    TraceAnnihilating,
    TraceAltering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Nullspace,
    Twirl,
    Choi,
    ClosedForm,
}

/// A basis of equivariant superoperators with trace-behaviour tags.
#[derive(Debug, Clone)]
pub struct EquivariantBasis {
    pub elements: Vec<TransferMatrix>,
    pub trace_tags: Vec<TraceTag>,
    pub provenance: Provenance,
    /// Equivariance residual of each element.
    pub residuals: Vec<f64>,
}

impl EquivariantBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Columns are the real vectorized transfer matrices.
    pub fn span_matrix(&self) -> RMatrix {
        let n = self.elements.first().map(|t| t.matrix.len()).unwrap_or(0);
        let mut m = RMatrix::zeros(n, self.elements.len());
        for (j, t) in self.elements.iter().enumerate() {
            for (i, z) in t.matrix.iter().enumerate() {
                m[(i, j)] = z.re;
            }
        }
        m
    }

    /// Frobenius distance between the orthogonal projectors onto the spans.
    pub fn projector_distance(&self, other: &EquivariantBasis) -> f64 {
        projector_distance(&self.span_matrix(), &other.span_matrix())
    }

    /// Elements usable in a channel parameterization (trace-altering ones
    /// are excluded).
    pub fn physical(&self) -> Vec<(&TransferMatrix, TraceTag)> {
        self.elements
            .iter()
            .zip(&self.trace_tags)
            .filter(|(_, &t)| t != TraceTag::TraceAltering)
            .map(|(e, &t)| (e, t))
            .collect()
    }

    pub fn count(&self, tag: TraceTag) -> usize {
        self.trace_tags.iter().filter(|&&t| t == tag).count()
    }
}

/// Builds a basis from real vectorized transfer matrices (columns of `vecs`),
/// reorganised so that the first element is trace preserving (if the span
/// contains one), followed by trace-annihilating and trace-altering elements.
pub(crate) fn tagged_basis(
    problem: &EquivarianceProblem,
    vecs: &RMatrix,
    provenance: Provenance,
) -> Result<EquivariantBasis> {
    let (cols, tags) = nullspace::canonicalize_trace_tags(vecs, problem.in_dim(), problem.out_dim());
    let mut elements = Vec::with_capacity(cols.len());
    for v in &cols {
        elements.push(TransferMatrix::from_real_vec(v, problem.in_dim(), problem.out_dim())?);
    }
    let (ain, aout) = problem.actions();
    let actions: Vec<(RMatrix, RMatrix)> = ain.into_iter().zip(aout).collect();
    let residuals = verify::residuals_against(&elements, &actions, crate::exec::Exec::default());
    Ok(EquivariantBasis {
        elements,
        trace_tags: tags,
        provenance,
        residuals,
    })
}

/// Trace behaviour of a single map, read from row 0 of its transfer matrix.
pub fn trace_tag(t: &TransferMatrix, tol: f64) -> TraceTag {
    let target = (t.in_dim as f64 / t.out_dim as f64).sqrt();
    let row = t.matrix.row(0);
    let off: f64 = row.iter().skip(1).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let head = row[0];
    if off <= tol && head.norm() <= tol {
        TraceTag::TraceAnnihilating
    } else if off <= tol && (head.re - target).abs() <= tol && head.im.abs() <= tol {
        TraceTag::TracePreserving
    } else {
        TraceTag::TraceAltering
    }
}
