//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown attribute `{name}`")]
    UnknownAttribute { line: usize, col: usize, name: String },
    #[error("{line}:{col}: {msg}")]
    DomainMismatch { line: usize, col: usize, msg: String },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("schema mismatch: expected `{expected}`, found `{found}`")]
    SchemaMismatch { expected: String, found: String },
    #[error("transitive closure did not converge within {max_iter} iterations")]
    IterationCap { max_iter: usize },
    #[error("grid universe too large: {pairs} ground pairs exceeds cap {cap}")]
    UniverseTooLarge { pairs: usize, cap: usize },
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),
    #[error("relation is not an SPO on the given universe")]
    NotSpoOnUniverse,
    #[error("coefficient must be positive, got {0}")]
    NonPositiveCoefficient(String),
    #[error("utility comparison not expressible as a constraint formula: {0}")]
    InexpressibleUtility(String),
    #[error("chain containment fails at index {index}: relation {index} does not entail its successor")]
    ChainNotMonotonic { index: usize },
    #[error("chain member at index {index} is not an SPO")]
    ChainMemberNotSpo { index: usize },
    #[error("dominance cycle detected: preference relation is not an SPO")]
    DominanceCycle,
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
