//! The generators `g(n) = (3n+2)/(2n+1)` and exact power comparisons.
//!
//! Every bound used by the decider reduces to comparing `g(n)^m` with a
//! rational, which is done by cross-multiplying integers. No roots, no
//! floating point.

use std::cmp::Ordering;

use super::rational::{pow_int, Rational, Scalar};

#[inline]
fn two<T: Scalar>() -> T {
    T::one() + T::one()
}

#[inline]
fn three<T: Scalar>() -> T {
    two::<T>() + T::one()
}

/// Numerator `3n+2` of the generator.
pub fn generator_num<T: Scalar>(n: &T) -> T {
    three::<T>() * n.clone() + two::<T>()
}

/// Denominator `2n+1` of the generator.
pub fn generator_den<T: Scalar>(n: &T) -> T {
    two::<T>() * n.clone() + T::one()
}

/// `g(n) = (3n+2)/(2n+1)`. The two parts are always coprime:
/// `3(2n+1) - 2(3n+2) = -1`.
pub fn generator_value<T: Scalar>(n: &T) -> Rational<T> {
    Rational::from_parts_unchecked(generator_num(n), generator_den(n))
}

/// Inverse generator `(2n+1)/(3n+2)` of the 3x+1 semigroup.
pub fn inverse_generator_value<T: Scalar>(n: &T) -> Rational<T> {
    Rational::from_parts_unchecked(generator_den(n), generator_num(n))
}

/// Returns `n` with `g(n) = r`, if such a nonnegative integer exists.
///
/// Solves `num·(2n+1) = den·(3n+2)`, i.e. `n·(2·num − 3·den) = 2·den − num`.
pub fn solve_generator<T: Scalar>(r: &Rational<T>) -> Option<T> {
    let (num, den) = (r.num(), r.den());
    let two_num = two::<T>() * num.clone();
    let three_den = three::<T>() * den.clone();
    let two_den = two::<T>() * den.clone();
    // need 3/2 < r <= 2
    if two_num <= three_den || *num > two_den {
        return None;
    }
    let divisor = two_num - three_den;
    let dividend = two_den - num.clone();
    let (n, rem) = dividend.div_rem(&divisor);
    rem.is_zero().then_some(n)
}

/// `r^k` in lowest terms.
pub fn rat_pow<T: Scalar>(r: &Rational<T>, k: u32) -> Rational<T> {
    r.pow(k)
}

/// Compares `g(n)^m` with `r` exactly:
/// `(3n+2)^m · den(r)` against `num(r) · (2n+1)^m`.
pub fn cmp_generator_pow<T: Scalar>(n: &T, m: u32, r: &Rational<T>) -> Ordering {
    let lhs = pow_int(&generator_num(n), m) * r.den().clone();
    let rhs = r.num().clone() * pow_int(&generator_den(n), m);
    lhs.cmp(&rhs)
}

/// Compares `(3/2)^m` with `r` exactly.
pub fn cmp_three_halves_pow<T: Scalar>(m: u32, r: &Rational<T>) -> Ordering {
    let lhs = pow_int(&three::<T>(), m) * r.den().clone();
    let rhs = r.num().clone() * pow_int(&two::<T>(), m);
    lhs.cmp(&rhs)
}
