//! Membership in the Wooley semigroup generated by `(3n+2)/(2n+1)`, with
//! certificates, a complete decision procedure and supporting computations.

pub mod arith;
pub mod cli;
pub mod certificate;
pub mod decider;
pub mod error;
pub mod smooth;
pub mod survey;
pub mod wild;

pub use arith::{Rational, Scalar};
pub use error::Error;

/// Arbitrary-precision rational; the type used throughout the public API.
pub type Rat = Rational<num_bigint::BigUint>;
/// Machine-word rationals for bounded computations.
pub type Rat64 = Rational<u64>;
pub type Rat128 = Rational<u128>;
