use thiserror::Error;

/// Errors shared by all algebraic operations in this crate.
///
/// Every fallible operation distinguishes between *structural* mismatches
/// (operands living over different surfaces or truncation orders) and
/// *domain* violations (an input outside the mathematical domain of the
/// operation, e.g. taking `log_t` of a tensor whose augmentation is not 1).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// Operands belong to different surface signatures or truncation orders.
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    /// A basis symbol index is out of range for the signature.
    #[error("symbol out of range: {0}")]
    SymbolOutOfRange(String),

    /// The input violates a documented precondition of the operation.
    #[error("domain violation: {0}")]
    Domain(String),

    /// A linear system that must be solvable (by a theorem backing the
    /// construction) turned out inconsistent; indicates an internal bug.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    /// Malformed external data (JSON wire format, word syntax, ...).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
