//! Independent reference implementations shared by the integration tests.
//! They use `num-rational` rather than the crate's own arithmetic.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn g(a: &BigInt) -> BigRational {
    BigRational::new(a * 3 + 2, a * 2 + 1)
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact product of `g(a)` over a list of indices.
pub fn product(indices: &[BigInt]) -> BigRational {
    indices.iter().fold(BigRational::one(), |acc, a| acc * g(a))
}

#[derive(Debug, PartialEq, Eq)]
pub enum Oracle {
    Member(Vec<BigInt>),
    NonMember,
    /// The step limit ran out.
    Unknown,
}

struct Naive {
    steps: u64,
    limit: u64,
    path: Vec<BigInt>,
    /// Primes of the target.
    base: Vec<BigInt>,
    /// Primes of `(3a+2)(2a+1)` by index `a`, `None` if factoring gave up.
    seen: HashMap<BigInt, Option<Vec<BigInt>>>,
}

/// Smallest `a ≥ 0` with `g(a) < t`, for `t > 3/2`.
fn first_below(t: &BigRational) -> BigInt {
    let two = int(2);
    if t > &two {
        return BigInt::zero();
    }
    // g(a) < t  iff  a > (2 - t)/(2t - 3)
    let x = (&two - t) / (t * int(2) - int(3));
    x.floor().to_integer() + 1
}

impl Naive {
    /// Nondecreasing `lo ≤ a_1 ≤ … ≤ a_k` with `∏ g(a_i) = r`.
    fn dfs(&mut self, r: &BigRational, k: u32, lo: &BigInt) -> Option<bool> {
        // every g(a) has an odd denominator and a numerator prime to 3
        if r.denom().is_even() || (r.numer() % BigInt::from(3)).is_zero() {
            return Some(false);
        }
        let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
        if k == 1 {
            // g(a) = r  iff  a = (2 - r)/(2r - 3)
            if r <= &three_halves || r > &int(2) {
                return Some(false);
            }
            let a = (int(2) - r) / (r * int(2) - int(3));
            if a.is_integer() && &a.to_integer() >= lo {
                self.path.push(a.to_integer());
                return Some(true);
            }
            return Some(false);
        }
        if k == 2 {
            return self.pair(r, lo);
        }
        // the other k-1 factors each exceed 3/2
        let cap = r / three_halves.pow(k as i32 - 1);
        if cap <= three_halves {
            return Some(false);
        }
        let mut a = first_below(&cap).max(lo.clone());
        loop {
            let ga = g(&a);
            // later factors are at most g(a)
            if ga.pow(k as i32) < *r {
                return Some(false);
            }
            self.steps += 1;
            if self.steps > self.limit {
                return None;
            }
            self.path.push(a.clone());
            match self.dfs(&(r / &ga), k - 1, &a) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.path.pop();
            a += 1;
        }
    }

    /// `g(a)·g(b) = p/q` with `lo ≤ a ≤ b`. With `X = 2a+1`, `Y = 2b+1` and
    /// `E = 4p - 9q` this is `(EX - 3q)(EY - 3q) = 4pq`, both factors positive.
    fn pair(&mut self, r: &BigRational, lo: &BigInt) -> Option<bool> {
        let (p, q) = (r.numer(), r.denom());
        let e: BigInt = p * 4 - q * 9;
        if !e.is_positive() {
            return Some(false);
        }
        let n: BigInt = p * q * 4;
        let three_q: BigInt = q * 3;
        // X ≤ Y means EX - 3q ≤ √(4pq)
        let xlo: BigInt = lo * 2 + 1;
        let xhi: BigInt = (n.sqrt() + &three_q) / &e;
        if xlo > xhi {
            return Some(false);
        }
        let width = (&xhi - &xlo).to_u64().unwrap_or(u64::MAX);
        if width <= SCAN_WIDTH {
            let mut x = xlo;
            while x <= xhi {
                if x.is_odd() {
                    self.steps += 1;
                    if self.steps > self.limit {
                        return None;
                    }
                    let d: BigInt = &e * &x - &three_q;
                    if d.is_positive() && (&n % &d).is_zero() {
                        let (y, ry) = (&n / &d + &three_q).div_rem(&e);
                        if ry.is_zero() && y.is_odd() {
                            return Some(self.found_pair(r, x, y));
                        }
                    }
                }
                x += 1;
            }
            return Some(false);
        }
        // every prime of pq divides the target or some 3a+2, 2a+1 on the path
        let mut primes = self.base.clone();
        for a in self.path.clone() {
            let ps = self.seen.entry(a.clone()).or_insert_with(|| {
                let mut v = prime_factors(&(&a * 3 + 2))?;
                v.extend(prime_factors(&(&a * 2 + 1))?);
                Some(v)
            });
            primes.extend(ps.as_ref()?.iter().cloned());
        }
        primes.sort();
        primes.dedup();
        let f = factor_over(&n, &primes);
        let count: u64 = f.iter().map(|(_, e)| *e as u64 + 1).product();
        if self.steps + count > self.limit {
            return None;
        }
        for d in divisors(&f) {
            let other = &n / &d;
            if d > other {
                continue;
            }
            self.steps += 1;
            if self.steps > self.limit {
                return None;
            }
            let (x, rx) = (&d + &three_q).div_rem(&e);
            let (y, ry) = (&other + &three_q).div_rem(&e);
            if !rx.is_zero() || !ry.is_zero() || x.is_even() || y.is_even() {
                continue;
            }
            if x >= xlo {
                return Some(self.found_pair(r, x, y));
            }
        }
        Some(false)
    }
}

impl Naive {
    fn found_pair(&mut self, r: &BigRational, x: BigInt, y: BigInt) -> bool {
        let (a, b) = (x >> 1u32, y >> 1u32);
        assert_eq!(g(&a) * g(&b), *r);
        self.path.push(a);
        self.path.push(b);
        true
    }
}

/// Pair problems with fewer candidate `X` than this are scanned instead of
/// factoring `4pq`.
const SCAN_WIDTH: u64 = 1 << 16;

/// Distinct primes of `n`, or `None` when bounded Pollard rho gives up.
fn prime_factors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut stack = vec![n.clone()];
    while let Some(mut m) = stack.pop() {
        for p in 2u32..1000 {
            let p = BigInt::from(p);
            if (&m % &p).is_zero() {
                out.push(p.clone());
                while (&m % &p).is_zero() {
                    m /= &p;
                }
            }
        }
        if m.is_one() {
            continue;
        }
        if wooley::arith::is_prime(&m.to_biguint().unwrap()) {
            out.push(m);
            continue;
        }
        let d = rho(&m, RHO_STEPS)?;
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out.dedup();
    Some(out)
}

const RHO_STEPS: u64 = 200_000;

/// A nontrivial factor of the odd composite `n` from Pollard rho with
/// `x -> x^2 + c`, trying a few `c`.
fn rho(n: &BigInt, steps: u64) -> Option<BigInt> {
    for c in 1u32..4 {
        let f = |x: &BigInt| (x * x + c) % n;
        let (mut x, mut y) = (BigInt::from(2), BigInt::from(2));
        for _ in 0..steps {
            x = f(&x);
            y = f(&f(&y));
            let d = (&x - &y).abs().gcd(n);
            if d == *n {
                break;
            }
            if !d.is_one() {
                return Some(d);
            }
        }
    }
    None
}

/// Exponents of `primes` in `n`, which must have no other prime factor.
fn factor_over(n: &BigInt, primes: &[BigInt]) -> Vec<(BigInt, u32)> {
    let mut rest = n.clone();
    let mut out = Vec::new();
    for p in primes {
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
    }
    assert!(rest.is_one(), "{n} has a prime factor outside the known set");
    out
}

/// All positive divisors of `∏ p^e`, unordered.
fn divisors(f: &[(BigInt, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in f {
        let len = out.len();
        let mut pk = BigInt::one();
        for _ in 0..*e {
            pk *= p;
            for i in 0..len {
                let v = &out[i] * &pk;
                out.push(v);
            }
        }
    }
    out
}

/// Brute-force membership of the positive integer `n`, trying every factor
/// count `m` with `(3/2)^m < n ≤ 2^m` and every index allowed by the size
/// bounds alone.
pub fn naive_oracle(n: u64, limit: u64) -> Oracle {
    let target = int(n as i64);
    let mut base = prime_factors(&BigInt::from(n)).expect("small target");
    base.push(BigInt::from(2));
    let mut st = Naive {
        steps: 0,
        limit,
        path: Vec::new(),
        base,
        seen: HashMap::new(),
    };
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let mut m = 1u32;
    while three_halves.pow(m as i32) < target {
        if int(2).pow(m as i32) >= target {
            st.path.clear();
            match st.dfs(&target, m, &BigInt::zero()) {
                Some(true) => return Oracle::Member(st.path),
                Some(false) => {}
                None => return Oracle::Unknown,
            }
        }
        m += 1;
    }
    Oracle::NonMember
}

pub fn to_big(v: &num_bigint::BigUint) -> BigInt {
    BigInt::from(v.clone())
}

pub fn as_u64(r: &BigRational) -> Option<u64> {
    (r.is_integer() && !r.is_negative()).then(|| r.to_integer().to_u64()).flatten()
}
