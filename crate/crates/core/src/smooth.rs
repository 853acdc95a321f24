//! Smooth numbers in arithmetic progressions.
//!
//! `n` is `Y`-smooth when every prime factor of `n` is strictly below `Y`.
//! For a prime `q > 3` and `N = 6q` or `9q`, [`smooth_residue_report`]
//! counts the invertible classes mod `N` whose least positive residue is
//! `q`-smooth. When they are a majority, every invertible class is a product
//! of two such classes by pigeonhole, which [`pigeonhole_product`] makes
//! explicit.

use num_integer::Integer;
use num_traits::Float;
use serde::Serialize;

use crate::arith::{factorize_u64, is_prime_u64, totient};
use crate::error::Error;

/// True iff every prime factor of `n` is `< y`. `1` is smooth for any `y`.
pub fn is_smooth(n: u64, y: u64) -> bool {
    assert!(n >= 1, "smoothness is defined for n ≥ 1");
    factorize_u64(n).last().is_none_or(|&(p, _)| p < y)
}

/// Largest prime factor of every `0 ≤ m ≤ limit` (0 and 1 map to 1).
fn largest_prime_factors(limit: usize) -> Vec<u32> {
    let mut lpf = vec![1u32; limit + 1];
    for p in 2..=limit {
        if lpf[p] == 1 {
            let mut m = p;
            while m <= limit {
                lpf[m] = p as u32;
                m += p;
            }
        }
    }
    lpf
}

/// Counts of `q`-smooth least residues among the invertible classes mod
/// `multiplier·q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothClassReport {
    pub q: u64,
    pub multiplier: u64,
    #[serde(skip)]
    pub modulus: u64,
    #[serde(rename = "phi")]
    pub phi_n: u64,
    pub smooth_count: u64,
    /// `smooth_count > phi_n / 2`.
    pub majority: bool,
}

fn check_modulus(q: u64, multiplier: u64) -> Result<u64, Error> {
    if q == 2 || q == 3 {
        return Err(Error::DegenerateModulus(q));
    }
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    if multiplier != 6 && multiplier != 9 {
        return Err(Error::BadMultiplier(multiplier));
    }
    q.checked_mul(multiplier)
        .filter(|&n| n < u32::MAX as u64)
        .ok_or_else(|| Error::InvalidArgument(format!("modulus {multiplier}·{q} is too large")))
}

/// The invertible classes mod `n` together with which of them have a
/// `y`-smooth least residue.
pub struct SmoothClasses {
    pub modulus: u64,
    pub y: u64,
    smooth: Vec<bool>,
    pub phi: u64,
    pub count: u64,
}

impl SmoothClasses {
    pub fn new(modulus: u64, y: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let lpf = largest_prime_factors(modulus as usize);
        let mut smooth = vec![false; modulus as usize];
        let mut phi = 0;
        let mut count = 0;
        for r in 1..modulus {
            if r.gcd(&modulus) != 1 {
                continue;
            }
            phi += 1;
            if (lpf[r as usize] as u64) < y {
                smooth[r as usize] = true;
                count += 1;
            }
        }
        SmoothClasses {
            modulus,
            y,
            smooth,
            phi,
            count,
        }
    }

    pub fn is_smooth_class(&self, r: u64) -> bool {
        self.smooth[(r % self.modulus) as usize]
    }

    pub fn majority(&self) -> bool {
        2 * self.count > self.phi
    }

    /// Invertible least residues that are not smooth, ascending.
    pub fn exceptions(&self) -> Vec<u64> {
        (1..self.modulus)
            .filter(|r| r.gcd(&self.modulus) == 1 && !self.smooth[*r as usize])
            .collect()
    }

    /// Smooth `(S, S')` with `S·S' ≡ r`, taking the smallest such `S`.
    /// `None` unless the smooth classes are a majority.
    pub fn pigeonhole(&self, r: u64) -> Result<Option<(u64, u64)>, Error> {
        let n = self.modulus;
        let r = r % n;
        if r.gcd(&n) != 1 {
            return Err(Error::NotInvertible { r, modulus: n });
        }
        if !self.majority() {
            return Ok(None);
        }
        for s in 1..n {
            if !self.smooth[s as usize] {
                continue;
            }
            let s_inv = mod_inverse(s, n).expect("smooth classes are invertible");
            let t = mulmod(r, s_inv, n);
            if self.smooth[t as usize] {
                debug_assert_eq!(mulmod(s, t, n), r);
                return Ok(Some((s, t)));
            }
        }
        unreachable!("a majority of smooth classes always meets its translate")
    }
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// Counts the `q`-smooth least residues among invertible classes mod
/// `multiplier·q`, for a prime `q > 3` and `multiplier ∈ {6, 9}`.
pub fn smooth_residue_report(q: u64, multiplier: u64) -> Result<SmoothClassReport, Error> {
    let n = check_modulus(q, multiplier)?;
    let classes = SmoothClasses::new(n, q);
    debug_assert_eq!(classes.phi, totient(n));
    Ok(SmoothClassReport {
        q,
        multiplier,
        modulus: n,
        phi_n: classes.phi,
        smooth_count: classes.count,
        majority: classes.majority(),
    })
}

/// Smallest `n ≡ r (mod modulus)` with `1 ≤ n ≤ limit·modulus` that is
/// `y`-smooth.
pub fn find_smooth_in_class(r: u64, modulus: u64, y: u64, limit: u64) -> Result<Option<u64>, Error> {
    if modulus == 0 || r.gcd(&modulus) != 1 {
        return Err(Error::NotInvertible { r, modulus });
    }
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be at least 1".into()));
    }
    let end = limit.saturating_mul(modulus);
    let mut n = r % modulus;
    if n == 0 {
        n = modulus;
    }
    while n <= end {
        if is_smooth(n, y) {
            return Ok(Some(n));
        }
        n += modulus;
    }
    Ok(None)
}

/// `y`-smooth least residues `S, S'` with `S·S' ≡ r (mod modulus)`, or
/// `None` when the smooth classes are not a majority.
pub fn pigeonhole_product(r: u64, modulus: u64, y: u64) -> Result<Option<(u64, u64)>, Error> {
    if modulus < 2 || r.gcd(&modulus) != 1 {
        return Err(Error::NotInvertible { r, modulus });
    }
    SmoothClasses::new(modulus, y).pigeonhole(r)
}

/// `u^-u`, a rough stand-in for the Dickman function. Only for sizing
/// searches.
pub fn dickman_rough<F: Float>(u: F) -> F {
    u.powf(-u)
}
