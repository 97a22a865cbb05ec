use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in two families: validation problems with the caller's
/// input, and numerical failures (non-convergence, rank trouble). The CLI maps
/// them to different exit codes via [`EqnnError::is_numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EqnnError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("map is not completely positive (min Choi eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),
    #[error("map is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("group enumeration exceeded {0} elements without closing")]
    GroupTooLarge(usize),
    #[error("isotypic decomposition failed: {0}")]
    Decomposition(String),
    #[error("singular Gram matrix (smallest singular value {0:.3e})")]
    SingularGram(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("operation needs a Haar sampler, but the representation has no Lie realization")]
    MissingSampler,
}

impl EqnnError {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            EqnnError::Decomposition(_)
                | EqnnError::SingularGram(_)
                | EqnnError::NoConvergence(_)
                | EqnnError::GroupTooLarge(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EqnnError::DimensionMismatch(_) => "dimension_mismatch",
            EqnnError::NotHermitian(_) => "not_hermitian",
            EqnnError::NotUnitary(_) => "not_unitary",
            EqnnError::NotCompletelyPositive(_) => "not_cp",
            EqnnError::NotTracePreserving(_) => "not_tp",
            EqnnError::GroupTooLarge(_) => "group_too_large",
            EqnnError::Decomposition(_) => "decomposition",
            EqnnError::SingularGram(_) => "singular_gram",
            EqnnError::NoConvergence(_) => "no_convergence",
            EqnnError::Invalid(_) => "invalid",
            EqnnError::MissingSampler => "missing_sampler",
        }
    }
}

pub type Result<T, E = EqnnError> = std::result::Result<T, E>;
