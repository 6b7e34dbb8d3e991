use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad `(n, k)` or a label outside the required family.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Malformed complex: dangling ids, broken identifications and the like.
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was invoked on an argument that violates its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A step of the recursive build produced something it should not have.
    #[error("construction failed in {step}: {detail}")]
    Construction { step: String, detail: String },
}

impl Error {
    pub(crate) fn construction(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Construction {
            step: step.into(),
            detail: detail.into(),
        }
    }
}
