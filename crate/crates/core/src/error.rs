use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be a positive integer, got 0")]
    Zero,

    #[error("k must be at least 2, got {0}")]
    InvalidK(u32),

    #[error("greatest common exponential divisor does not exist: {0} and {1} have different prime factors")]
    NoCommonStructure(u64, u64),

    #[error("{what}: {n} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, n: u64, cap: u64 },

    #[error("sequence limits differ ({0} vs {1})")]
    MismatchedLimits(usize, usize),

    #[error("sequence is not invertible over the integers: f(1) = {0}")]
    NotInvertible(i128),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("s = {0} is too close to the pole of zeta at 1")]
    NearPole(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("zeta({s}) methods disagree by {gap:e}")]
    ZetaDisagreement { s: f64, gap: f64 },

    #[error("Euler product tail is not summable (tail exponent {0} <= 1)")]
    NonSummableTail(f64),

    #[error("local Euler factor at p = {0} is not positive")]
    NonPositiveFactor(u64),

    #[error("grid: {0}")]
    Grid(String),

    #[error("fit needs at least {need} points spanning {decades} decades, got {got} points over {span:.2}")]
    InsufficientGrid { need: usize, decades: f64, got: usize, span: f64 },

    #[error("cache: {0}")]
    Cache(String),
}
