use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scalars from different fields were combined")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^32")]
    InvalidModulus(u64),
    #[error("cannot parse scalar literal {0:?}")]
    ScalarParse(String),
    #[error("invalid q-matrix entry ({i}, {j}): {reason}")]
    InvalidQMatrix { i: usize, j: usize, reason: String },
    #[error("exponent overflow: value exceeds cap {cap}")]
    ExponentOverflow { cap: u32 },
    #[error("monomial does not divide the dividend")]
    NotADivisor,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("elements belong to different Taylor complexes")]
    ComplexMismatch,
    #[error("the generator list is empty")]
    EmptyGenerators,
    #[error("generator {index} is divisible by generator {divisor}; pass minimal generators")]
    NonMinimalGenerators { index: usize, divisor: usize },
    #[error("{s} generators exceed the cap of {cap}")]
    TooManyGenerators { s: usize, cap: usize },
    #[error("index {index} is not a member of the subset")]
    NotInSubset { index: usize },
    #[error("divided powers need an element of even positive homological degree, got {degree}")]
    NotEvenPositive { degree: usize },
    #[error("divided powers need a homogeneous element: {0}")]
    Inhomogeneous(&'static str),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("negative deviation in degree {degree}; the series is not exact enough or inconsistent")]
    NegativeDeviation { degree: usize },
    #[error("series is exact only through degree {have}, degree {needed} requested")]
    InsufficientExactness { needed: usize, have: usize },
    #[error("integer overflow while manipulating a power series")]
    SeriesOverflow,
}
