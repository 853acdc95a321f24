use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Unsigned;

use crate::error::Error;

/// Integer types a [`Rational`] can be built over.
///
/// Implemented for every unsigned integer type that `num-integer` knows
/// about, including `BigUint`. Fixed-width instantiations overflow like
/// their underlying type; the search code only uses the arbitrary-precision
/// one.
pub trait Scalar: Integer + Unsigned + Clone + fmt::Display + fmt::Debug {
    fn from_u64(v: u64) -> Self;
}

macro_rules! impl_scalar_prim {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn from_u64(v: u64) -> Self {
                <$t>::try_from(v).expect("value does not fit scalar type")
            }
        }
    )*};
}
impl_scalar_prim!(u32, u64, u128, usize);

impl Scalar for num_bigint::BigUint {
    #[inline]
    fn from_u64(v: u64) -> Self {
        num_bigint::BigUint::from(v)
    }
}

/// A nonnegative rational number kept in lowest terms with a positive
/// denominator. Two equal values always have identical fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational<T> {
    num: T,
    den: T,
}

impl<T: Scalar> Rational<T> {
    pub fn new(num: T, den: T) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    /// Builds the value without reducing. Caller guarantees lowest terms.
    pub(crate) fn from_parts_unchecked(num: T, den: T) -> Self {
        debug_assert!(!den.is_zero());
        Rational { num, den }
    }

    fn reduced(num: T, den: T) -> Self {
        let g = num.gcd(&den);
        if g.is_one() {
            Rational { num, den }
        } else {
            Rational {
                num: num / g.clone(),
                den: den / g,
            }
        }
    }

    pub fn from_integer(n: T) -> Self {
        Rational {
            num: n,
            den: T::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(T::one())
    }

    pub fn num(&self) -> &T {
        &self.num
    }

    pub fn den(&self) -> &T {
        &self.den
    }

    pub fn into_parts(self) -> (T, T) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Rational {
                num: self.den.clone(),
                den: self.num.clone(),
            })
        }
    }

    /// `self^k`; the empty power is `1/1`.
    pub fn pow(&self, k: u32) -> Self {
        // Powers of coprime integers stay coprime.
        Rational {
            num: pow_int(&self.num, k),
            den: pow_int(&self.den, k),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self * &r)
    }

    /// Rendering that drops the `/1` of integers.
    pub fn to_human(&self) -> String {
        if self.is_integer() {
            self.num.to_string()
        } else {
            self.to_string()
        }
    }
}

pub(crate) fn pow_int<T: Scalar>(base: &T, mut k: u32) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b.clone();
        }
        k >>= 1;
        if k > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

impl<'a, T: Scalar> Mul<&'a Rational<T>> for &'a Rational<T> {
    type Output = Rational<T>;

    fn mul(self, rhs: &'a Rational<T>) -> Rational<T> {
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = (self.num.clone() / g1.clone()) * (rhs.num.clone() / g2.clone());
        let den = (self.den.clone() / g2) * (rhs.den.clone() / g1);
        if num.is_zero() {
            return Rational {
                num,
                den: T::one(),
            };
        }
        Rational { num, den }
    }
}

impl<T: Scalar> Mul for Rational<T> {
    type Output = Rational<T>;

    fn mul(self, rhs: Rational<T>) -> Rational<T> {
        &self * &rhs
    }
}

impl<'a, T: Scalar> Div<&'a Rational<T>> for &'a Rational<T> {
    type Output = Rational<T>;

    /// Panics on division by zero; see [`Rational::checked_div`].
    fn div(self, rhs: &'a Rational<T>) -> Rational<T> {
        self.checked_div(rhs).expect("division by zero rational")
    }
}

impl<T: Scalar> Div for Rational<T> {
    type Output = Rational<T>;

    fn div(self, rhs: Rational<T>) -> Rational<T> {
        &self / &rhs
    }
}

impl<T: Scalar> PartialOrd for Rational<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Rational<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (self.num.clone() * other.den.clone()).cmp(&(other.num.clone() * self.den.clone()))
    }
}

impl<T: Scalar> fmt::Display for Rational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl<T: Scalar> fmt::Debug for Rational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl<T: Scalar + FromStr> FromStr for Rational<T> {
    type Err = Error;

    /// Accepts `a/b` or a bare integer `a`, surrounding whitespace ignored.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::InvalidRational(s.to_string());
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        match s.split_once('/') {
            Some((a, b)) => {
                let (a, b) = (a.trim(), b.trim());
                if !digits(a) || !digits(b) {
                    return Err(bad());
                }
                let num = a.parse::<T>().map_err(|_| bad())?;
                let den = b.parse::<T>().map_err(|_| bad())?;
                Rational::new(num, den)
            }
            None => {
                if !digits(s) {
                    return Err(bad());
                }
                Ok(Rational::from_integer(s.parse::<T>().map_err(|_| bad())?))
            }
        }
    }
}
