use thiserror::Error;

/// Errors raised by exact arithmetic and the verification procedures.
///
/// `InsufficientPrecision` and `Inconclusive` are recoverable: callers retry
/// at a deeper truncation floor. Everything else indicates bad input or a
/// failed certificate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The truncation floor hides the data needed to decide the question.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// Inverse of zero, or of a truncated series with no visible leading term.
    #[error("undefined inverse: {0}")]
    UndefinedInverse(String),

    #[error("zero divisor: {0}")]
    ZeroDivisor(String),

    #[error("singular matrix")]
    SingularMatrix,

    /// The linear coefficient in the root-lifting step vanished. This must
    /// not happen for the polynomials built here; it is asserted, not assumed.
    #[error("degenerate recursion at step {step}: linear coefficient vanished")]
    DegenerateRecursion { step: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An identity that holds by construction failed to verify.
    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    /// No decision either way at the working precision; not a disproof.
    #[error("inconclusive at current precision: {0}")]
    Inconclusive(String),

    /// A membership certificate failed; carries the offending data.
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
}

pub type Result<T> = std::result::Result<T, ExactError>;
