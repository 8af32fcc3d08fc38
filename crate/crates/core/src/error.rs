use thiserror::Error;

pub use crate::parser::ParseError;

/// Errors produced by the analysis entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),

    #[error("the zero polynomial cannot be analysed")]
    ZeroPolynomial,

    #[error("monomial subset is empty")]
    EmptySubset,

    #[error("monomial index {index} out of range for {len} monomials")]
    MonomialIndex { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed matrix: {0}")]
    Matrix(String),

    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("equation is not linear (total degree {0})")]
    Nonlinear(u32),

    #[error("equation is not partition regular: {0}")]
    NotPartitionRegular(String),

    #[error("invalid construction parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid coloring: {0}")]
    Coloring(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
