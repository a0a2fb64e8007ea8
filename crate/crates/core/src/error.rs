use thiserror::Error;

use crate::complex::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mode mismatch")]
    ModeMismatch,
    #[error("invalid torus knot T({p},{q}): need p >= 2 and gcd(p,q) = 1")]
    InvalidTorus { p: i64, q: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("complex violates an invariant: {0}")]
    Violation(Violation),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("not an L-space staircase: {0}")]
    NotStaircase(String),
    #[error("complex is not knot-like: {0}")]
    NotKnotLike(String),
    #[error("no open path")]
    NoOpenPath,
    #[error("multiple open paths")]
    MultipleOpenPaths,
    #[error("closed form inapplicable: {0}")]
    ClosedFormInapplicable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Violation(v)
    }
}
