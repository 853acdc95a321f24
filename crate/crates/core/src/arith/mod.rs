//! Exact arithmetic shared by every other module.

pub mod factor;
pub mod generator;
pub mod rational;

pub use factor::{factorize, factorize_u64, is_prime, is_prime_u64, totient, Factorization};
pub use generator::{
    cmp_generator_pow, cmp_three_halves_pow, generator_den, generator_num, generator_value,
    inverse_generator_value, rat_pow, solve_generator,
};
pub use rational::{Rational, Scalar};
