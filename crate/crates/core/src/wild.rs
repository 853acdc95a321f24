//! The wild semigroup: the Wooley semigroup together with `1/2`.
//!
//! An odd `m` is a wild integer iff `2^j·m` is a Wooley integer for some
//! `j ≥ 0`; [`wild_integer_cert`] searches for such a `j`. The 3x+1 map
//! `T` gives certificates in the inverse semigroup: along a trajectory
//! `x → T(x)` each odd step at `x = 2k+1` has ratio `x/T(x) = (2k+1)/(3k+2)`
//! and each even step has ratio 2, so the ratios telescope to `n`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::is_prime;
use crate::certificate::{known_cert, InverseCert, WildCert};
use crate::decider::{decide, Decision, SearchConfig};
use crate::error::Error;
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Odd,
    Even,
}

/// One application of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TStep {
    pub kind: StepKind,
    pub input: BigUint,
    pub output: BigUint,
}

impl TStep {
    /// `input / output`: `(2k+1)/(3k+2)` for odd steps, 2 for even steps.
    pub fn ratio(&self) -> Rat {
        Rat::new(self.input.clone(), self.output.clone()).expect("T(x) ≥ 1")
    }
}

/// `T(x) = (3x+1)/2` for odd `x`, `x/2` for even `x`.
pub fn t_map(x: &BigUint) -> BigUint {
    assert!(!x.is_zero(), "T is defined on positive integers");
    if x.is_odd() {
        (x * 3u32 + 1u32) >> 1usize
    } else {
        x >> 1usize
    }
}

fn t_step(x: &BigUint) -> TStep {
    TStep {
        kind: if x.is_odd() { StepKind::Odd } else { StepKind::Even },
        input: x.clone(),
        output: t_map(x),
    }
}

/// Iterates `T` from `n` until it reaches 1, taking at least one step (so
/// `1 → 2 → 1`). `None` if 1 is not reached within `max_steps`.
pub fn trajectory(n: &BigUint, max_steps: u64) -> Option<Vec<TStep>> {
    assert!(!n.is_zero(), "trajectory needs n ≥ 1");
    let mut steps = Vec::new();
    let mut x = n.clone();
    loop {
        if steps.len() as u64 >= max_steps {
            return None;
        }
        let s = t_step(&x);
        x = s.output.clone();
        steps.push(s);
        if x.is_one() {
            return Some(steps);
        }
    }
}

/// Inverse-semigroup certificate for `n` read off its `T`-trajectory.
pub fn collatz_inverse_cert(n: &BigUint, max_steps: u64) -> Option<InverseCert> {
    let steps = trajectory(n, max_steps)?;
    let mut twos = 0u64;
    let mut inv = Vec::new();
    for s in &steps {
        match s.kind {
            StepKind::Even => twos += 1,
            StepKind::Odd => inv.push((&s.input >> 1usize, 1)),
        }
    }
    Some(InverseCert::new(inv, twos).expect("a trajectory has at least one step"))
}

/// Membership of `a/b` in the wild semigroup via the characterization
/// `gcd(a, 3b) = 1`. The characterization is conditional on the weak 3x+1
/// conjecture (since proved); see [`CHARACTERIZATION_NOTE`].
pub fn wild_rational_member(r: &Rat) -> bool {
    !r.is_zero() && !(r.num() % 3u32).is_zero()
}

/// Provenance attached to verdicts of [`wild_rational_member`].
pub const CHARACTERIZATION_NOTE: &str =
    "conditional on the weak 3x+1 conjecture";

/// Result of searching `j` with `2^j·m` a Wooley integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WildOutcome {
    /// `value(cert) = m` with `cert = 2^-j · (certificate of 2^j·m)`.
    /// `minimal` holds when every smaller `j` was a complete non-member.
    Certified { cert: WildCert, j: u32, minimal: bool },
    /// `m = 1`, the unit; not certified through generators.
    Unit,
    /// No `j ≤ max_exp` succeeded. `undecided` lists the `j` whose search
    /// ran out of budget; when empty, every `j ≤ max_exp` is a non-member.
    NotFound { undecided: Vec<u32> },
}

impl WildOutcome {
    pub fn cert(&self) -> Option<&WildCert> {
        match self {
            WildOutcome::Certified { cert, .. } => Some(cert),
            _ => None,
        }
    }
}

pub(crate) fn search_two_powers(m: &BigUint, max_exp: u32, cfg: &SearchConfig, corpus: bool) -> WildOutcome {
    if (m % 3u32).is_zero() {
        return WildOutcome::NotFound { undecided: Vec::new() };
    }
    if corpus {
        for j in 0..=max_exp {
            let t = Rat::from_integer(m << j as usize);
            if let Some(c) = known_cert(&t) {
                let cert = WildCert::new(Some(c), -(j as i64)).expect("has a Wooley part");
                return WildOutcome::Certified { cert, j, minimal: false };
            }
        }
    }
    let mut undecided = Vec::new();
    for j in 0..=max_exp {
        let t = Rat::from_integer(m << j as usize);
        match decide(&t, cfg) {
            Decision::Member(c) => {
                let cert = WildCert::new(Some(c), -(j as i64)).expect("has a Wooley part");
                let minimal = undecided.is_empty();
                return WildOutcome::Certified { cert, j, minimal };
            }
            Decision::NonMember => {}
            Decision::Undecided { .. } => undecided.push(j),
        }
    }
    WildOutcome::NotFound { undecided }
}

/// Smallest `j ≤ max_exp` found with `decide(2^j·m) = Member`, as a wild
/// certificate of value `m`.
pub fn wild_integer_cert(m: &BigUint, max_exp: u32, cfg: &SearchConfig) -> Result<WildOutcome, Error> {
    if m.is_even() {
        return Err(Error::EvenInput(m.to_string()));
    }
    if m.is_one() {
        return Ok(WildOutcome::Unit);
    }
    Ok(search_two_powers(m, max_exp, cfg, false))
}

/// Conjectural and constructive wildness of `p`, kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WildNumberReport {
    pub p: BigUint,
    pub is_prime: bool,
    /// The conjecture: the wild numbers are exactly the primes other than 3.
    pub conjectural_wild: bool,
    /// A certificate that `p` is a wild integer, found from the embedded
    /// corpus or by search. Says nothing about irreducibility.
    pub constructive: WildOutcome,
}

/// Checks `p` against the conjecture and looks for a wild-integer
/// certificate, trying the embedded corpus before searching.
pub fn wild_number_check(p: &BigUint, max_exp: u32, cfg: &SearchConfig) -> WildNumberReport {
    let prime = is_prime(p);
    let constructive = if p.is_zero() {
        WildOutcome::NotFound { undecided: Vec::new() }
    } else if p.is_one() {
        WildOutcome::Unit
    } else {
        search_two_powers(p, max_exp, cfg, true)
    };
    WildNumberReport {
        p: p.clone(),
        is_prime: prime,
        conjectural_wild: prime && p != &BigUint::from(3u32),
        constructive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::WooleyCert;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn t_map_values() {
        assert_eq!(t_map(&big(5)), big(8));
        assert_eq!(t_map(&big(8)), big(4));
        assert_eq!(t_map(&big(1)), big(2));
    }

    #[test]
    fn inverse_certs_from_trajectories() {
        let c = collatz_inverse_cert(&big(5), 100).unwrap();
        assert_eq!(c, InverseCert::new([(big(2), 1)], 3).unwrap());
        let c = collatz_inverse_cert(&big(1), 100).unwrap();
        assert_eq!(c, InverseCert::new([(big(0), 1)], 1).unwrap());
        let c = collatz_inverse_cert(&big(6), 100).unwrap();
        assert_eq!(c, InverseCert::new([(big(1), 1), (big(2), 1)], 4).unwrap());
        assert_eq!(c.value(), Rat::from_integer(big(6)));
        // 27 takes 70 steps under T
        assert!(collatz_inverse_cert(&big(27), 69).is_none());
        assert_eq!(collatz_inverse_cert(&big(27), 70).unwrap().value(), Rat::from_integer(big(27)));
    }

    #[test]
    fn step_ratios_telescope() {
        for n in 1u64..300 {
            let steps = trajectory(&big(n), 10_000).unwrap();
            let mut prod = Rat::one();
            for s in &steps {
                let r = s.ratio();
                if s.kind == StepKind::Odd {
                    let k = &s.input >> 1usize;
                    assert_eq!(r, crate::arith::inverse_generator_value(&k));
                } else {
                    assert_eq!(r, Rat::from_integer(big(2)));
                }
                prod = &prod * &r;
            }
            assert_eq!(prod, Rat::from_integer(big(n)));
        }
    }

    #[test]
    fn characterization() {
        let r = |a: u64, b: u64| Rat::new(big(a), big(b)).unwrap();
        assert!(wild_rational_member(&r(7, 5)));
        assert!(!wild_rational_member(&r(6, 5)));
        assert!(wild_rational_member(&r(1, 2)));
        assert!(wild_rational_member(&r(2, 9)));
    }

    #[test]
    fn wild_integers() {
        let cfg = SearchConfig::default();
        match wild_integer_cert(&big(5), 2, &cfg).unwrap() {
            WildOutcome::Certified { cert, j, minimal } => {
                assert_eq!((j, minimal), (2, true));
                assert_eq!(cert.two_exponent(), -2);
                assert_eq!(cert.value(), Rat::from_integer(big(5)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            wild_integer_cert(&big(3), 5, &cfg).unwrap(),
            WildOutcome::NotFound { undecided: vec![] }
        );
        assert_eq!(wild_integer_cert(&big(1), 0, &cfg).unwrap(), WildOutcome::Unit);
        assert!(wild_integer_cert(&big(4), 0, &cfg).is_err());
        // 5 and 10 are non-members, so nothing is found below j = 2
        assert_eq!(
            wild_integer_cert(&big(5), 1, &cfg).unwrap(),
            WildOutcome::NotFound { undecided: vec![] }
        );
    }

    #[test]
    fn wild_number_reports() {
        let cfg = SearchConfig::with_budget(100_000);
        let r = wild_number_check(&big(2), 4, &cfg);
        assert!(r.is_prime && r.conjectural_wild);
        let cert = r.constructive.cert().unwrap();
        assert_eq!(cert.two_exponent(), 0);
        assert_eq!(cert.wooley(), Some(&WooleyCert::new([(big(0), 1)]).unwrap()));

        let r = wild_number_check(&big(3), 4, &cfg);
        assert!(r.is_prime && !r.conjectural_wild);
        assert!(r.constructive.cert().is_none());

        let r = wild_number_check(&big(67), 12, &cfg);
        match &r.constructive {
            WildOutcome::Certified { cert, j, minimal } => {
                assert_eq!((*j, *minimal), (12, false));
                assert_eq!(cert.value(), Rat::from_integer(big(67)));
            }
            other => panic!("{other:?}"),
        }
    }
}
