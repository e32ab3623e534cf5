use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("modulus degree mismatch: expected monic of degree {expected}, got {found}")]
    DegreeMismatch { expected: u32, found: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("invalid field spec {0:?}: expected \"p\" or \"p^k\"")]
    InvalidFieldSpec(String),
    #[error("inhomogeneous input: {0}")]
    InhomogeneousInput(String),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("unsupported certificate {0:?}")]
    UnsupportedCertificate(String),
    #[error("degree pattern violation: {0}")]
    PatternViolation(String),
    #[error("empty input")]
    EmptyInput,
    #[error("forms live over different fields")]
    MixedFields,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("enumeration too large: {size} exceeds cap {cap}")]
    TooLarge { size: String, cap: u64 },
    #[error("search space too large: {size} points exceeds cap {cap}")]
    SearchSpaceTooLarge { size: String, cap: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
