use thiserror::Error;

use crate::combinatorics::FaceId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field configuration: {0}")]
    InvalidField(String),
    #[error("cannot parse scalar {text:?}: {reason}")]
    ParseScalar { text: String, reason: String },
    #[error("exact comparison is not available for float64 scalars")]
    InexactComparison,

    #[error("invalid vertex {vertex} for a {n}-vertex complex")]
    InvalidVertex { vertex: u8, n: u8 },
    #[error("duplicate label {0} in permutation")]
    DuplicateLabel(u8),

    #[error("determinant indices must be pairwise distinct, got ({0}, {1}, {2})")]
    DuplicateIndex(u8, u8, u8),
    #[error("duplicate Vandermonde parameter at vertices {0} and {1}")]
    DuplicateParameter(u8, u8),
    #[error("legs do not match simplex {simplex}: {reason}")]
    LegMismatch { simplex: u8, reason: String },
    #[error("zero denominator d_{{{0}{1}{2}}} in transfer matrix entry")]
    ZeroDenominator(u8, u8, u8),
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("parameters are not generic; vanishing determinants: {0:?}")]
    NonGenericParameters(Vec<[u8; 3]>),
    #[error("unsupported vertex count {0}")]
    UnsupportedSize(usize),
    #[error("parameter set does not match the move: {0}")]
    ParameterShape(String),

    #[error("bad embedding positions {0:?}")]
    BadPositions(Vec<usize>),
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("input block of simplex {0} is singular on the local permitted space")]
    SingularInputBlock(u8),
    #[error("edge vector e_{0} has no representative")]
    MissingEdgeVector(FaceId),

    #[error("run {seed} did not converge")]
    NotConverged { seed: u64 },
    #[error("non-finite value encountered")]
    NonFinite,

    #[error("io error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}
