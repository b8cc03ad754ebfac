use thiserror::Error;

/// Errors reported by the library and the CLI front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("position collection must be non-empty")]
    EmptyCollection,

    #[error("positions must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<usize>),

    #[error("operation needs at least two units, collection has one")]
    SingleUnit,

    #[error("word of length {len} is shorter than the span {delta}")]
    WordTooShort { len: usize, delta: usize },

    #[error("seed of length {len} must have length equal to the span {delta}")]
    SeedLength { len: usize, delta: usize },

    #[error(
        "span {delta} exceeds the brute-force cap {cap}; use the polynomial method (--method poly, --t-max)"
    )]
    OverOracleCap { delta: usize, cap: usize },

    #[error("parameter {name} = {value} exceeds the cap {cap}")]
    OverCap {
        name: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("span {delta} is too large for a default period bound; pass an explicit --t-max")]
    NeedsPeriodBound { delta: usize },

    #[error("brute-force spectrum {brute:?} differs from polynomial spectrum {poly:?}")]
    MethodMismatch { brute: Vec<u64>, poly: Vec<u64> },

    #[error("cylinder size {n} must exceed the last position {last}")]
    CylinderTooSmall { n: u64, last: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
