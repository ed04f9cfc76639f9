use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} is not supported (max {max})", max = crate::gf::MAX_ORDER)]
    UnsupportedOrder(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid field element {value} for q = {q}")]
    InvalidElement { value: u64, q: u32 },
    #[error("dimension k must be at least 1")]
    InvalidDimension,
    #[error("PG({km1}, {q}) has too many points (cap {cap})", km1 = .k.saturating_sub(1))]
    Overflow { q: u32, k: usize, cap: usize },
    #[error("generator matrix has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("multiset has {got} elements, expected (q^k - 1)/(q - 1) = {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("difference vector is not integral")]
    NonIntegral,
    #[error("search budget of {budget} nodes exhausted after visiting {visited}")]
    BudgetExhausted { budget: u64, visited: u64 },
    #[error("input too large for this oracle: {0}")]
    TooLarge(String),
    #[error("invalid survey bounds: min_entry {min} > max_entry {max}")]
    InvalidBounds { min: i64, max: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("witness failed verification: {0}")]
    UnverifiedWitness(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
