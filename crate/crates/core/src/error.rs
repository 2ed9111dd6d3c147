use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edge index must be a positive integer, got {0}")]
    InvalidIndex(i128),

    #[error("graph is not connected")]
    Disconnected,

    #[error("operation requires an unweighted graph (all indices 1)")]
    Weighted,

    #[error("vertex `{0}` has degree 1")]
    DegreeOne(String),

    #[error("graph has no cycles, so there is no exponential growth")]
    Acyclic,

    #[error("depth {depth} reaches truncated vertices (exact up to depth {radius})")]
    DepthExceedsTruncation { depth: usize, radius: usize },

    #[error("delta {delta} outside [0, {max}]")]
    DeltaOutOfRange { delta: f64, max: f64 },

    #[error("degenerate spectrum: every non-backtracking eigenvalue lies on the unit circle")]
    DegenerateSpectrum,

    #[error("enumeration guard of {limit} steps exceeded")]
    GuardExceeded { limit: u64 },

    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,

    #[error("series must have zero constant term")]
    NonzeroConstantTerm,

    #[error("truncation degrees differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
