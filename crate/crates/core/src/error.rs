use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus {0} is outside the supported range 1..=16")]
    UnsupportedGenus(usize),
    #[error("genus {got} is too large for {what} (limit {limit})")]
    GenusTooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("operands live in different genus contexts ({0} vs {1})")]
    ContextMismatch(usize, usize),
    #[error("subspace is not symplectic")]
    NotSymplectic,
    #[error("vectors do not form a symplectic pair or frame: {0}")]
    NotUnimodular(String),
    #[error("value is not sigma of a genus-1 subspace")]
    NotGenus1Image,
    #[error("vector is not in the span of the given basis")]
    NotInSpan,
    #[error("bad parity pattern: {0}")]
    BadParityPattern(String),
    #[error("values are not coprime: {0}")]
    NotCoprime(String),
    #[error("frame is invalid: {0}")]
    FrameInvalid(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("cycle system is invalid: {0}")]
    InvalidSystem(String),
    #[error("invalid partition tree: {0}")]
    InvalidTree(String),
    #[error("tree has no curves")]
    NoCurves,
    #[error("mixed wedge shapes: {0}")]
    MixedShapes(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("certificate format error: {0}")]
    CertificateFormat(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
