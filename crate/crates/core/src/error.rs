use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires characteristic other than 2")]
    CharacteristicTwo,

    #[error("division by zero")]
    DivisionByZero,

    #[error("value {0} is not invertible in {1}")]
    NotInvertible(String, Field),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("input rows are linearly dependent")]
    DependentRows,

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("monomial cap exceeded: {reached} terms > cap {cap}")]
    CapExceeded { cap: usize, reached: usize },

    #[error("field too small: need more than {needed} elements")]
    FieldTooSmall { needed: u64 },

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("variable x{0} occurs in the input but has no generator in the ideal")]
    MissingGenerator(usize),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("undecided: |f| landed strictly between M and 2M")]
    Undecided,

    #[error("root approximation failed to converge: {0}")]
    Convergence(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
