//! Crate-wide error type.

/// Errors shared by every module of the crate.
///
/// Enumeration guards fail hard with [`Error::TooLarge`]; nothing is ever
/// silently truncated. The `Internal*` variants signal bugs, not bad input.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{what} requires ~2^{needed_log2:.1} steps, over the {knob} limit of 2^{limit_log2}")]
    TooLarge {
        what: &'static str,
        needed_log2: f64,
        limit_log2: u32,
        /// Name of the configuration knob that bounds this computation.
        knob: &'static str,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("message vector is zero")]
    ZeroMessage,
    #[error("degenerate block {block}: its columns are F_q-linearly dependent")]
    Degenerate { block: usize },
    #[error("field context mismatch: operands belong to different fields")]
    ContextMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dropped basis vector is not an F_qm-multiple of an F_q-combination of the rest")]
    HypothesisNotSatisfied,
    #[error("bad arguments: {0}")]
    BadArgs(String),
    #[error("bad profiles: {0}")]
    BadProfiles(String),
    #[error("not a partition of the projective space: {0}")]
    NotAPartition(String),
    #[error("class {class} is not rank-{rho}-saturating inside its subspace")]
    ClassNotSaturating { class: usize, rho: usize },
    #[error("system is not cutting")]
    NotCutting,
    #[error("construction self-check failed: {0}")]
    ConstructionCheckFailed(String),
    #[error("internal disagreement: {0} — this is a bug")]
    InternalDisagreement(String),
    #[error("no irreducible polynomial found in an exhaustive scan — this is a bug")]
    InternalIrreducibilityFailure,
    #[error("incomplete table: {0}")]
    IncompleteTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
