use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {0} is not a supported prime power (2 <= q <= 512)")]
    InvalidField(u32),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("value is not in k_infinity (exponent {0} is not a multiple of q-1)")]
    NotInKInfinity(i64),
    #[error("inverse twist undefined: exponent {exponent} not divisible by {modulus}")]
    NonDivisibleTwist { exponent: i64, modulus: i64 },
    #[error("tail bound not met: last term has valuation {tail}, target {target}")]
    TailBound { tail: i64, target: i64 },
    #[error("product does not contract at factor {0}")]
    NonContraction(usize),
    #[error("{0} is a pole")]
    Pole(String),
    #[error("{0} must be monic of positive degree")]
    NotMonic(String),
    #[error("{0} is not coprime to the level")]
    NotCoprime(String),
    #[error("cycle elements have different levels")]
    LevelMismatch,
    #[error("{0} is not a power of an irreducible")]
    NotPrimePower(String),
    #[error("degree {deg} exceeds the configured cap {cap}")]
    DegreeCap { deg: usize, cap: usize },
    #[error("cycle element is not effective")]
    NotEffective,
    #[error("cycle element has weight zero")]
    ZeroWeight,
    #[error("bracket <{x}>_{n} is not 1")]
    BracketPrecondition { x: String, n: u32 },
    #[error("coefficients are not polynomials of t-degree below the truncation")]
    CoefficientBound,
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("functional equation fails: residual valuation {0}")]
    FunctionalEquation(i64),
    #[error("det Phi is not c (t - T)^s")]
    DeterminantShape,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
