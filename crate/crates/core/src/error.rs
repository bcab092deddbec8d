use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes: usage and
/// configuration problems exit 2, budget violations exit 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("field size {p}^{m} exceeds the field budget {budget}")]
    FieldBudget { p: u64, m: u32, budget: u64 },
    #[error("degree {0} is not registered in the tower")]
    UnknownDegree(u32),
    #[error("no embedding path from degree {0} to degree {1}")]
    NoEmbeddingPath(u32, u32),
    #[error("no compatible primitive modulus of degree {m} over GF({p})")]
    NoCompatibleModulus { p: u64, m: u32 },
    #[error("discrete log of zero")]
    ZeroDlog,
    #[error("group order {order} exceeds the scan budget {budget}")]
    GroupBudget { order: u128, budget: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("element is not regular semisimple")]
    NotRegularSemisimple,
    #[error("element lies outside the expected group")]
    OutsideGroup,
    #[error("element lies outside the torus point set")]
    OutsideTorus,
    #[error("partition does not sum to {0}")]
    BadPartition(u8),
    #[error("malformed torus pair: {0}")]
    MalformedTorusPair(String),
    #[error("torus or character is not epsilon-invariant")]
    NotEpsilonInvariant,
    #[error("transpose-inverse mode requires n = 2 and odd q")]
    BadTransposeInverseConfig,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
