use thiserror::Error;

/// Errors raised by geometry kernels, aggregation rules and certification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input point set is empty")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error("invalid fault budget t={t} for n={n}")]
    InvalidFaultBudget { n: usize, t: usize },

    #[error("resilience violated: n={n} must exceed 2t={}", 2 * t)]
    ResilienceViolation { n: usize, t: usize },

    #[error("{count} candidate subsets exceed the enumeration cap {cap}")]
    TooManySubsets { count: u128, cap: u128 },

    #[error("{solver} did not converge within {iterations} iterations")]
    NonConvergence { solver: &'static str, iterations: usize },

    #[error("tangent configuration has no real solution (discriminant {discriminant})")]
    InvalidTangentConfiguration { discriminant: f64 },

    #[error("ball has zero radius")]
    ZeroRadius,

    #[error("zero-radius candidate balls have different centers")]
    ConflictingZeroRadius,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("instance too large for oracle: {0}")]
    InstanceTooLarge(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
