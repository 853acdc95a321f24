//! Factorization certificates and their exact verification.
//!
//! A certificate is a formal product of generators. Three flavours exist:
//!
//! * [`WooleyCert`]: a nonempty product of `g(n) = (3n+2)/(2n+1)`, proving
//!   membership in the Wooley semigroup.
//! * [`WildCert`]: a Wooley product times a signed power of two, proving
//!   membership in the wild semigroup (which adds the generator `1/2`).
//! * [`InverseCert`]: a product of `(2n+1)/(3n+2)` times a nonnegative power
//!   of two, proving membership in the inverse semigroup of the 3x+1 problem.
//!
//! Factor lists are canonical: indices strictly increasing with repeated
//! indices merged into exponents.

mod json;
mod table1;
mod text;

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{generator_den, generator_num};
use crate::error::Error;
use crate::Rat;

pub use json::{from_json, to_json, CertJson};
pub use table1::{
    builtin_table1, composite_67_identity, g423_witness, identity_67, known_cert, table1_row, Table1Row,
    TABLE1_PRINTED_2_3_13,
};
pub use text::{parse, serialize, ParsedCert};

/// `(generator index, exponent)` with a positive exponent.
pub type Factor = (BigUint, u64);

fn normalize(factors: impl IntoIterator<Item = Factor>) -> Result<Vec<Factor>, Error> {
    let mut v: Vec<Factor> = Vec::new();
    for (n, e) in factors {
        if e == 0 {
            return Err(Error::ZeroExponent {
                index: n.to_string(),
                pos: 0,
            });
        }
        v.push((n, e));
    }
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<Factor> = Vec::with_capacity(v.len());
    for (n, e) in v {
        match out.last_mut() {
            Some((m, f)) if *m == n => *f += e,
            _ => out.push((n, e)),
        }
    }
    Ok(out)
}

fn merge(a: &[Factor], b: &[Factor]) -> Vec<Factor> {
    normalize(a.iter().chain(b.iter()).cloned()).expect("inputs are canonical")
}

/// `∏ num(n)^e / ∏ den(n)^e`, reduced once at the end.
fn product_value(
    factors: &[Factor],
    num_of: fn(&BigUint) -> BigUint,
    den_of: fn(&BigUint) -> BigUint,
) -> (BigUint, BigUint) {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (n, e) in factors {
        let e = u32::try_from(*e).expect("exponent exceeds u32");
        num *= num_of(n).pow(e);
        den *= den_of(n).pow(e);
    }
    (num, den)
}

fn reduce(num: BigUint, den: BigUint) -> Rat {
    Rat::new(num, den).expect("denominators are positive")
}

/// Nonempty product of Wooley generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WooleyCert {
    factors: Vec<Factor>,
}

impl WooleyCert {
    /// Accepts factors in any order with repeats; rejects zero exponents and
    /// the empty product.
    pub fn new(factors: impl IntoIterator<Item = Factor>) -> Result<Self, Error> {
        let factors = normalize(factors)?;
        if factors.is_empty() {
            return Err(Error::EmptyCertificate);
        }
        Ok(WooleyCert { factors })
    }

    /// Certificate from a list of indices, each used once per occurrence.
    pub fn from_indices<I, T>(indices: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        Self::new(indices.into_iter().map(|n| (n.into(), 1)))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Total number of generators, counted with multiplicity.
    pub fn factor_count(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// The nondecreasing index sequence `n₁ ≤ n₂ ≤ …`.
    pub fn index_sequence(&self) -> Vec<BigUint> {
        self.factors
            .iter()
            .flat_map(|(n, e)| std::iter::repeat_n(n.clone(), *e as usize))
            .collect()
    }

    pub fn value(&self) -> Rat {
        let (num, den) = product_value(&self.factors, generator_num, generator_den);
        reduce(num, den)
    }

    /// Multiset union; the value of the result is the product of the values.
    pub fn compose(&self, other: &WooleyCert) -> WooleyCert {
        WooleyCert {
            factors: merge(&self.factors, &other.factors),
        }
    }

    /// Every exponent multiplied by `k ≥ 1`.
    pub fn pow(&self, k: u64) -> WooleyCert {
        assert!(k > 0, "a Wooley certificate cannot be raised to the zeroth power");
        WooleyCert {
            factors: self.factors.iter().map(|(n, e)| (n.clone(), e * k)).collect(),
        }
    }
}

/// `2^two_exponent · value(wooley)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WildCert {
    wooley: Option<WooleyCert>,
    two_exponent: i64,
}

impl WildCert {
    pub fn new(wooley: Option<WooleyCert>, two_exponent: i64) -> Result<Self, Error> {
        if wooley.is_none() && two_exponent == 0 {
            return Err(Error::EmptyCertificate);
        }
        Ok(WildCert {
            wooley,
            two_exponent,
        })
    }

    pub fn wooley(&self) -> Option<&WooleyCert> {
        self.wooley.as_ref()
    }

    pub fn two_exponent(&self) -> i64 {
        self.two_exponent
    }

    pub fn value(&self) -> Rat {
        let base = self.wooley.as_ref().map(WooleyCert::value).unwrap_or_else(Rat::one);
        let (num, den) = base.into_parts();
        let shift = self.two_exponent.unsigned_abs() as usize;
        if self.two_exponent >= 0 {
            reduce(num << shift, den)
        } else {
            reduce(num, den << shift)
        }
    }
}

/// `2^two_exponent · ∏ ((2n+1)/(3n+2))^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InverseCert {
    inv_factors: Vec<Factor>,
    two_exponent: u64,
}

impl InverseCert {
    /// The empty product is allowed here (e.g. `2 = 2^1`), but the whole
    /// certificate may not be the bare unit.
    pub fn new(inv_factors: impl IntoIterator<Item = Factor>, two_exponent: u64) -> Result<Self, Error> {
        let inv_factors = normalize(inv_factors)?;
        if inv_factors.is_empty() && two_exponent == 0 {
            return Err(Error::EmptyCertificate);
        }
        Ok(InverseCert {
            inv_factors,
            two_exponent,
        })
    }

    pub fn inv_factors(&self) -> &[Factor] {
        &self.inv_factors
    }

    pub fn two_exponent(&self) -> u64 {
        self.two_exponent
    }

    pub fn value(&self) -> Rat {
        let (num, den) = product_value(&self.inv_factors, generator_den, generator_num);
        reduce(num << (self.two_exponent as usize), den)
    }
}

/// Any of the three certificate kinds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    Wooley(WooleyCert),
    Wild(WildCert),
    Inverse(InverseCert),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    Wooley,
    Wild,
    Inverse,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::Wooley => "wooley",
            CertKind::Wild => "wild",
            CertKind::Inverse => "inverse",
        }
    }
}

impl Certificate {
    pub fn kind(&self) -> CertKind {
        match self {
            Certificate::Wooley(_) => CertKind::Wooley,
            Certificate::Wild(_) => CertKind::Wild,
            Certificate::Inverse(_) => CertKind::Inverse,
        }
    }

    pub fn value(&self) -> Rat {
        cert_value(self)
    }
}

impl From<WooleyCert> for Certificate {
    fn from(c: WooleyCert) -> Self {
        Certificate::Wooley(c)
    }
}

impl From<WildCert> for Certificate {
    fn from(c: WildCert) -> Self {
        Certificate::Wild(c)
    }
}

impl From<InverseCert> for Certificate {
    fn from(c: InverseCert) -> Self {
        Certificate::Inverse(c)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(&self.value(), self))
    }
}

/// Exact value of a certificate in lowest terms.
pub fn cert_value(cert: &Certificate) -> Rat {
    match cert {
        Certificate::Wooley(c) => c.value(),
        Certificate::Wild(c) => c.value(),
        Certificate::Inverse(c) => c.value(),
    }
}

/// True iff the certificate evaluates exactly to `target`.
pub fn verify(cert: &Certificate, target: &Rat) -> bool {
    // Cheap necessary conditions before the full product.
    if let Certificate::Wooley(_) = cert {
        if target.den().is_even() || target.is_zero() {
            return false;
        }
        if (target.num() % 3u32).is_zero() {
            return false;
        }
    }
    &cert_value(cert) == target
}

pub fn compose(a: &WooleyCert, b: &WooleyCert) -> WooleyCert {
    a.compose(b)
}
