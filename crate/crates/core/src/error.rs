use thiserror::Error;

/// Errors raised anywhere in the field, code, simulation and protocol layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported ceiling of 2^16")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("invalid modulus polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("polynomial {0:?} is reducible over the prime field")]
    ReduciblePolynomial(Vec<u32>),
    #[error("no built-in modulus polynomial for GF({p}^{m}); supply one explicitly")]
    NoBuiltinPolynomial { p: u32, m: u32 },
    #[error("element {value} is outside the field of order {q}")]
    ElementOutOfRange { value: u32, q: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("column selection is empty")]
    EmptySelection,

    #[error("generator matrix has rank {rank}, expected full row rank {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("invalid player subset: {0}")]
    InvalidSubset(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("amplitudes are not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("projection onto the measured outcome is degenerate (norm^2 = {0:e})")]
    DegenerateState(f64),

    #[error("subset B = {subset_b} is not assisted: rank(G_B) = {rank} < k = {k}")]
    NotAssisted { subset_b: String, rank: usize, k: usize },
    #[error("state has {0:e} probability mass outside the code restricted to B")]
    SupportLeak(f64),
    #[error("outcome probability {got} differs from the uniform value {expected}")]
    NonUniformOutcome { got: f64, expected: f64 },
    #[error("corrected state still carries a relative phase (max deviation {0:e})")]
    PhaseResidual(f64),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
