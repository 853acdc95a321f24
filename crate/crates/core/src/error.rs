use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational `{0}`")]
    InvalidRational(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero exponent for g({index}) at position {pos}")]
    ZeroExponent { index: String, pos: usize },
    #[error("certificate has no factors")]
    EmptyCertificate,
    #[error("invalid certificate json: {0}")]
    Json(String),
    #[error("modulus degenerates for q = {0}; q must be a prime other than 2 and 3")]
    DegenerateModulus(u64),
    #[error("multiplier must be 6 or 9, got {0}")]
    BadMultiplier(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("residue {r} is not invertible modulo {modulus}")]
    NotInvertible { r: u64, modulus: u64 },
    #[error("{0} is divisible by 3, so no power of two times it is a member")]
    DivisibleByThree(String),
    #[error("expected an odd integer, got {0}")]
    EvenInput(String),
    #[error("{0}")]
    InvalidArgument(String),
}
