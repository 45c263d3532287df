use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("tensor is not cubical: dims {0:?}")]
    NonCubicalTensor(Vec<usize>),
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("tensor is not binary: dims {0:?}")]
    NotBinary(Vec<usize>),
    #[error("dense tensor with {0} entries exceeds the dense limit; use sparse storage")]
    TooLarge(u128),
    #[error("parameter shape mismatch: {0}")]
    ParameterShapeMismatch(String),
    #[error("denominator divisible by {0}")]
    DenominatorDivisibleByP(u64),
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("generator {0} is not rank one")]
    GeneratorNotRankOne(usize),
    #[error("generator {0} is not symmetric")]
    GeneratorNotSymmetric(usize),
    #[error("slice-space basis element {0} is not in the span of the generators")]
    SpanFailure(usize),
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("lambdas are not distinct")]
    LambdasNotDistinct,
    #[error("sum of lambdas {sum} does not equal alpha {alpha}")]
    SumMismatch { sum: String, alpha: String },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree {0} is odd")]
    OddDegree(usize),
    #[error("bad vector length {0}")]
    BadLength(usize),
    #[error("n = {n} is below the minimum {min}")]
    NTooSmall { n: usize, min: usize },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
