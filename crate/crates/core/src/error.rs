use thiserror::Error;

/// Errors raised across the library.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("function is not affine")]
    NotAffine,

    #[error("relation is empty")]
    EmptyRelation,

    #[error("index sets overlap at position {0}")]
    OverlappingSets(usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("hyperarc {0} repeats a vertex")]
    RepeatedVertex(usize),

    #[error("unsatisfiable gadget: partition function is zero")]
    Unsatisfiable,

    #[error("conditioned event has probability zero (admissibility condition (iv))")]
    ZeroProbabilityCondition,

    #[error("invalid conditioning: {0}")]
    InvalidConditioning(String),

    #[error("all-zero target function")]
    ZeroTarget,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance unsatisfiable: {0}")]
    InstanceUnsatisfiable(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
