use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("zero has no primitive direction")]
    ZeroVector,

    #[error("matrix is singular")]
    Singular,

    #[error("not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid kernel embedding: {0}")]
    InvalidKernel(String),

    #[error("independence condition violated at vertex {vertex:?}: {detail}")]
    IndependenceViolated { vertex: Vec<usize>, detail: String },

    #[error("internal consistency check failed: {0}")]
    CrossCheck(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("embedding error: {0}")]
    Embedding(String),

    #[error("toric structure error: {0}")]
    Toric(String),

    #[error("point {0} does not lie in the polytope")]
    OutsidePolytope(String),

    #[error("weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
