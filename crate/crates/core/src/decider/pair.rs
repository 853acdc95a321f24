//! Exact solution of `g(b)·g(c) = p/q` with `n_min ≤ b ≤ c`.
//!
//! With `X = 2b+1`, `Y = 2c+1` and `E = 4p − 9q`, clearing denominators in
//! `(3 + 1/X)(3 + 1/Y) = 4p/q` gives
//!
//! ```text
//! (E·X − 3q)(E·Y − 3q) = 4pq
//! ```
//!
//! Both factors are positive, and `X ≤ Y` iff the first is at most
//! `√(4pq)`. Since `q | XY`, also `Y ≥ q/X`, which caps the first factor at
//! `X(3X+1)`. So `b` ranges over an explicit interval and each `b` is checked
//! by one division. Alternatively the divisors of `4pq` below its square
//! root are enumerated, either all of them or, since `gcd(4pq, E) = 1`, by
//! matching the residues mod `E` of two halves of the factorization. The
//! cheapest of the three is used.

use std::collections::HashMap;

type PrimePowers = Vec<(BigUint, u64)>;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Signed factorization of a residual: positive exponents belong to the
/// numerator, negative to the denominator.
pub(crate) type SignedFactors = Vec<(BigUint, i64)>;

pub(crate) struct PairProblem {
    q: BigUint,
    e: BigUint,
    three_q: BigUint,
    n: BigUint,
    root: BigUint,
    pub blo: BigUint,
    pub bhi: BigUint,
    v2p: u64,
    v3q: u64,
}

pub(crate) enum PairStep {
    Found(BigUint, BigUint),
    Empty,
}

fn v3(x: &BigUint) -> u64 {
    let mut x = x.clone();
    let mut k = 0;
    let three = BigUint::from(3u32);
    loop {
        let (q, r) = x.div_rem(&three);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

pub(crate) fn v2(x: &BigUint) -> u64 {
    x.trailing_zeros().unwrap_or(0)
}

pub(crate) fn v3_big(x: &BigUint) -> u64 {
    v3(x)
}

impl PairProblem {
    /// `None` when no pair with `b ≥ n_min` can exist.
    pub(crate) fn new(p: &BigUint, q: &BigUint, n_min: &BigUint) -> Option<Self> {
        let four_p = p << 2usize;
        let nine_q = q * 9u32;
        if four_p <= nine_q {
            return None;
        }
        let e = four_p - nine_q;
        let three_q = q * 3u32;
        // E·X > 3q
        let xlo = &three_q / &e + 1u32;
        let blo = (xlo >> 1usize).max(n_min.clone());
        let n = (p * q) << 2usize;
        // d₁ = E·X − 3q ≤ d₂ gives d₁ ≤ √(4pq). Also q | X·Y, so
        // Y ≥ q/X and d₁ = q(3X+1)/Y ≤ X(3X+1). Iterate to a fixpoint.
        let mut root = n.sqrt();
        let mut xhi = (&root + &three_q) / &e;
        loop {
            let cap = &xhi * (&xhi * 3u32 + 1u32);
            if cap >= root {
                break;
            }
            root = cap;
            let next = (&root + &three_q) / &e;
            if next == xhi {
                break;
            }
            xhi = next;
        }
        if xhi.is_zero() {
            return None;
        }
        let bhi = (xhi - 1u32) >> 1usize;
        if blo > bhi {
            return None;
        }
        Some(PairProblem {
            q: q.clone(),
            e,
            three_q,
            n,
            root,
            blo,
            bhi,
            v2p: v2(p),
            v3q: v3(q),
        })
    }

    /// Number of candidate `b` values.
    pub(crate) fn width(&self) -> BigUint {
        &self.bhi - &self.blo + 1u32
    }

    /// Checks one `b`; returns `c` when `g(b)·g(c) = p/q`.
    pub(crate) fn check(&self, b: &BigUint) -> Option<BigUint> {
        let num_b = b * 3u32 + 2u32;
        if v2(&num_b) > self.v2p {
            return None;
        }
        let x = (b << 1usize) + 1u32;
        if v3(&x) > self.v3q {
            return None;
        }
        let d = &self.e * &x - &self.three_q;
        let (y, rem) = (&self.q * (&x * 3u32 + 1u32)).div_rem(&d);
        if !rem.is_zero() || y.is_even() {
            return None;
        }
        Some((y - 1u32) >> 1usize)
    }

    /// Scans `b` upward from `start`; `visit` is called once per `b` that
    /// passes the parity filters and may abort the scan by returning false.
    pub(crate) fn scan(&self, start: &BigUint, mut visit: impl FnMut() -> bool) -> Option<PairStep> {
        let mut b = start.max(&self.blo).clone();
        while b <= self.bhi {
            if !visit() {
                return None;
            }
            if let Some(c) = self.check(&b) {
                return Some(PairStep::Found(b, c));
            }
            b += 1u32;
        }
        Some(PairStep::Empty)
    }

    /// Prime powers of `4pq`.
    pub(crate) fn primes_of_n(factors: &SignedFactors) -> Vec<(BigUint, u64)> {
        let mut primes: Vec<(BigUint, u64)> = Vec::with_capacity(factors.len() + 1);
        let mut two = 2u64;
        for (p, e) in factors {
            if p == &BigUint::from(2u32) {
                two += e.unsigned_abs();
            } else {
                primes.push((p.clone(), e.unsigned_abs()));
            }
        }
        primes.push((BigUint::from(2u32), two));
        primes
    }

    /// Splits the prime powers into two groups with balanced divisor counts.
    /// Returns the groups and their divisor counts.
    pub(crate) fn split(primes: &[(BigUint, u64)]) -> (PrimePowers, PrimePowers, u128, u128) {
        let mut sorted: Vec<(BigUint, u64)> = primes.to_vec();
        sorted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| b.0.cmp(&a.0)));
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let (mut ta, mut tb) = (1u128, 1u128);
        for pe in sorted {
            let f = pe.1 as u128 + 1;
            if ta <= tb {
                ta = ta.saturating_mul(f);
                a.push(pe);
            } else {
                tb = tb.saturating_mul(f);
                b.push(pe);
            }
        }
        (a, b, ta, tb)
    }

    /// Expected work of [`Self::by_mitm`]: both half-enumerations plus the
    /// expected number of congruence matches.
    pub(crate) fn mitm_cost(&self, ta: u128, tb: u128) -> u128 {
        let e = self.e.to_u128().unwrap_or(u128::MAX);
        ta.saturating_add(tb).saturating_add(ta.saturating_mul(tb) / e.max(1))
    }

    /// Same answer as [`Self::by_divisors`], but matches `d = a·b` with
    /// `d ≡ −3q (mod E)` by hashing the residues of one half. `4pq` is
    /// coprime to `E`, so every divisor is invertible modulo `E`.
    pub(crate) fn by_mitm(
        &self,
        half_a: &[(BigUint, u64)],
        half_b: &[(BigUint, u64)],
        n_min: &BigUint,
        mut visit: impl FnMut() -> bool,
    ) -> Option<PairStep> {
        let e = &self.e;
        if e.is_one() {
            let all: Vec<(BigUint, u64)> = half_a.iter().chain(half_b).cloned().collect();
            return self.by_divisors_of(&all, n_min, visit);
        }
        let target = (e - (&self.three_q % e)) % e;
        let mut table: HashMap<BigUint, Vec<BigUint>> = HashMap::new();
        let mut stack: Vec<(usize, BigUint)> = vec![(0, BigUint::one())];
        while let Some((i, d)) = stack.pop() {
            if i == half_a.len() {
                if !visit() {
                    return None;
                }
                table.entry(&d % e).or_default().push(d);
                continue;
            }
            let (ref p, k) = half_a[i];
            let mut cur = d;
            for _ in 0..=k {
                if cur > self.root {
                    break;
                }
                stack.push((i + 1, cur.clone()));
                cur *= p;
            }
        }
        let inv: Vec<BigUint> = half_b
            .iter()
            .map(|(p, _)| p.modinv(e).expect("4pq is coprime to E"))
            .collect();
        let dlo = {
            let x = (self.blo.clone() << 1usize) + 1u32;
            &self.e * x - &self.three_q
        };
        let mut best: Option<(BigUint, BigUint)> = None;
        let mut stack: Vec<(usize, BigUint, BigUint)> = vec![(0, BigUint::one(), BigUint::one())];
        while let Some((i, d, di)) = stack.pop() {
            if i == half_b.len() {
                if !visit() {
                    return None;
                }
                let want = (&target * &di) % e;
                if let Some(bucket) = table.get(&want) {
                    for a in bucket {
                        if !visit() {
                            return None;
                        }
                        let full = a * &d;
                        if full > self.root || full < dlo {
                            continue;
                        }
                        if let Some((b, c)) = self.pair_from_divisor(&full, n_min) {
                            if best.as_ref().is_none_or(|(bb, _)| &b < bb) {
                                best = Some((b, c));
                            }
                        }
                    }
                }
                continue;
            }
            let (ref p, k) = half_b[i];
            let mut cur = d;
            let mut cur_inv = di;
            for _ in 0..=k {
                if cur > self.root {
                    break;
                }
                stack.push((i + 1, cur.clone(), cur_inv.clone()));
                cur *= p;
                cur_inv = (cur_inv * &inv[i]) % e;
            }
        }
        Some(match best {
            Some((b, c)) => PairStep::Found(b, c),
            None => PairStep::Empty,
        })
    }

    #[cfg(test)]
    pub(crate) fn by_divisors(
        &self,
        factors: &SignedFactors,
        n_min: &BigUint,
        visit: impl FnMut() -> bool,
    ) -> Option<PairStep> {
        self.by_divisors_of(&Self::primes_of_n(factors), n_min, visit)
    }

    /// Enumerates divisors `d` of `4pq` below the bound and returns the pair
    /// with the smallest `b`. `visit` is called per divisor and may abort.
    pub(crate) fn by_divisors_of(
        &self,
        primes: &[(BigUint, u64)],
        n_min: &BigUint,
        mut visit: impl FnMut() -> bool,
    ) -> Option<PairStep> {
        let mut primes = primes.to_vec();
        // large primes first keeps the partial products near the bound
        primes.sort_by(|a, b| b.0.cmp(&a.0));
        debug_assert_eq!(
            primes.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e as u32)),
            self.n
        );
        let dlo = {
            let x = (self.blo.clone() << 1usize) + 1u32;
            &self.e * x - &self.three_q
        };
        let mut best: Option<(BigUint, BigUint)> = None;
        let mut aborted = false;
        let mut stack: Vec<(usize, BigUint)> = vec![(0, BigUint::one())];
        while let Some((i, d)) = stack.pop() {
            if i == primes.len() {
                if !visit() {
                    aborted = true;
                    break;
                }
                if d < dlo {
                    continue;
                }
                if let Some((b, c)) = self.pair_from_divisor(&d, n_min) {
                    if best.as_ref().is_none_or(|(bb, _)| &b < bb) {
                        best = Some((b, c));
                    }
                }
                continue;
            }
            let (ref p, e) = primes[i];
            let mut cur = d;
            for _ in 0..=e {
                if cur > self.root {
                    break;
                }
                stack.push((i + 1, cur.clone()));
                cur *= p;
            }
        }
        if aborted {
            return None;
        }
        Some(match best {
            Some((b, c)) => PairStep::Found(b, c),
            None => PairStep::Empty,
        })
    }

    fn pair_from_divisor(&self, d1: &BigUint, n_min: &BigUint) -> Option<(BigUint, BigUint)> {
        let (x, r) = (d1 + &self.three_q).div_rem(&self.e);
        if !r.is_zero() || x.is_even() {
            return None;
        }
        let d2 = &self.n / d1;
        let (y, r) = (d2 + &self.three_q).div_rem(&self.e);
        if !r.is_zero() || y.is_even() {
            return None;
        }
        let b = (x - 1u32) >> 1usize;
        let c = (y - 1u32) >> 1usize;
        (&b >= n_min && b <= c).then_some((b, c))
    }

}

/// Which of the three pair strategies to run, with its estimated cost.
pub(crate) enum PairPlan {
    Scan(u64),
    Divisors(u64, Vec<(BigUint, u64)>),
    Mitm(u64, Vec<(BigUint, u64)>, Vec<(BigUint, u64)>),
}

impl PairPlan {
    pub(crate) fn choose(prob: &PairProblem, factors: &SignedFactors, width: u64) -> Self {
        let primes = PairProblem::primes_of_n(factors);
        let (a, b, ta, tb) = PairProblem::split(&primes);
        let half = (ta.saturating_mul(tb) / 2 + 1).min(u64::MAX as u128) as u64;
        let mitm = prob.mitm_cost(ta, tb).min(u64::MAX as u128) as u64;
        if width <= half && width <= mitm {
            PairPlan::Scan(width)
        } else if half <= mitm {
            PairPlan::Divisors(half, primes)
        } else {
            PairPlan::Mitm(mitm, a, b)
        }
    }

    pub(crate) fn cost(&self) -> u64 {
        match self {
            PairPlan::Scan(c) | PairPlan::Divisors(c, _) | PairPlan::Mitm(c, _, _) => *c,
        }
    }

    pub(crate) fn run(&self, prob: &PairProblem, n_min: &BigUint, visit: impl FnMut() -> bool) -> Option<PairStep> {
        match self {
            PairPlan::Scan(_) => prob.scan(n_min, visit),
            PairPlan::Divisors(_, primes) => prob.by_divisors_of(primes, n_min, visit),
            PairPlan::Mitm(_, a, b) => prob.by_mitm(a, b, n_min, visit),
        }
    }
}

#[cfg(test)]
pub(crate) fn small(n: &BigUint) -> u64 {
    n.to_u64().unwrap_or(u64::MAX)
}
