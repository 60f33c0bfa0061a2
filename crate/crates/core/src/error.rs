use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of size {p}^{r} exceeds the 2^20 element cap")]
    FieldTooLarge { p: u64, r: u32 },
    #[error("invalid field spec {0:?}")]
    InvalidFieldSpec(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires characteristic 2")]
    OddCharacteristic,
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("points are projectively equal")]
    EqualPoints,
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("work cap exceeded: need {needed}, cap {cap}")]
    WorkCapExceeded { needed: u128, cap: u128 },
    #[error("the zero form is not allowed here")]
    ZeroForm,
    #[error("incidence identity violated: {0}")]
    IdentityViolation(String),
    #[error("line {0} is contained in the curve")]
    LineInCurve(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
