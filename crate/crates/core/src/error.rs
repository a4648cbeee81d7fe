use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("expected degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("arity mismatch: operator takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("invalid graph counts: n = {n}, nbar = {nbar}")]
    InvalidCounts { n: usize, nbar: usize },

    #[error("graph is not admissible")]
    NotAdmissible,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Poisson structure has non-constant components")]
    NonConstant,

    #[error("missing weight for graph {0}")]
    MissingWeight(String),

    #[error("first-order term is not induced by a bivector: {0}")]
    NotBivector(String),

    #[error("coincident points")]
    CoincidentPoints,

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
