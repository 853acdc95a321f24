//! Membership decision for the Wooley semigroup.
//!
//! A rational `r` is a member iff `r = g(n₁)···g(n_m)` for some
//! `n₁ ≤ … ≤ n_m`. Every factor exceeds 3/2, so `m` is at most the largest
//! `m` with `(3/2)^m < r`, and the smallest index satisfies `g(n₁)^m ≥ r`.
//! Dividing out `g(n₁)` leaves a problem of the same shape, so the search
//! space is finite and the complete search either finds a certificate or
//! exhausts it.
//!
//! The complete search runs in passes with a growing cap on the width of
//! any single index range. Ranges wider than the cap are skipped and
//! counted; a pass that skipped nothing and found nothing proves
//! non-membership. A certificate found in a pass that skipped nothing
//! before it is canonical: fewest factors, then lexicographically smallest
//! index sequence.

mod heuristic;
mod pair;
mod search;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{cmp_generator_pow, cmp_three_halves_pow, generator_value, solve_generator};
use crate::certificate::WooleyCert;
use crate::error::Error;
use crate::Rat;

pub use heuristic::decide_heuristic;
pub use search::{search, search_with, SearchOutcome, TraceLine};

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Complete,
    Heuristic,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "complete" => Ok(Mode::Complete),
            "heuristic" => Ok(Mode::Heuristic),
            other => Err(Error::InvalidArgument(format!(
                "mode must be `complete` or `heuristic`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Nodes allowed before giving up with `Undecided`. A node is one
    /// candidate index that passed the cheap valuation filters and was
    /// expanded, or one divisor visited by the two-factor leaf.
    pub node_budget: u64,
    /// Search at most this many factors. When smaller than the proven bound
    /// an exhausted search reports `Undecided`, not `NonMember`.
    pub max_factors_override: Option<u32>,
    pub mode: Mode,
    pub emit_transcript: bool,
    /// Seed for the heuristic's restarts.
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_BUDGET,
            max_factors_override: None,
            mode: Mode::Complete,
            emit_transcript: false,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig {
            node_budget,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.node_budget == 0 {
            return Err(Error::InvalidArgument("node budget must be at least 1".into()));
        }
        if self.max_factors_override == Some(0) {
            return Err(Error::InvalidArgument("max factors must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Member(WooleyCert),
    NonMember,
    Undecided { nodes: u64 },
}

impl Decision {
    pub fn is_member(&self) -> bool {
        matches!(self, Decision::Member(_))
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, Decision::NonMember)
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Decision::Undecided { .. })
    }

    /// `member`, `non-member` or `undecided`.
    pub fn verdict_str(&self) -> &'static str {
        match self {
            Decision::Member(_) => "member",
            Decision::NonMember => "non-member",
            Decision::Undecided { .. } => "undecided",
        }
    }
}

/// Largest `m` with `(3/2)^m < r`; 0 when `r ≤ 3/2`.
pub fn max_factor_count(r: &Rat) -> u32 {
    let mut m = 0u32;
    while cmp_three_halves_pow(m + 1, r).is_lt() {
        m += 1;
    }
    m
}

fn index_ok(n: &BigUint, m: u32, r: &Rat) -> bool {
    cmp_generator_pow(n, m, r).is_ge()
}

/// Largest `n ≥ n_min` with `g(n)^m ≥ r`, or `None` if `g(n_min)^m < r`.
///
/// `g` decreases strictly toward 3/2, so the predicate is monotone; when
/// `r ≤ (3/2)^m` it holds for every `n` and there is no largest index, which
/// is reported as `None` as well (no product of `m` factors reaches down to
/// such an `r`).
pub fn max_first_index(r: &Rat, m: u32, n_min: &BigUint) -> Option<BigUint> {
    assert!(m >= 1, "max_first_index needs m ≥ 1");
    if !index_ok(n_min, m, r) || cmp_three_halves_pow(m, r).is_ge() {
        return None;
    }
    let mut lo = n_min.clone();
    let mut step = BigUint::one();
    let mut hi = loop {
        let probe = &lo + &step;
        if index_ok(&probe, m, r) {
            lo = probe;
            step <<= 1;
        } else {
            break probe;
        }
    };
    // invariant: ok(lo), !ok(hi)
    while &hi - &lo > BigUint::one() {
        let mid = (&lo + &hi) >> 1;
        if index_ok(&mid, m, r) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Necessary conditions for `r` to be a product of exactly `k` generators
/// with indices `≥ n_min`.
pub fn feasible_residual(r: &Rat, k: u32, n_min: &BigUint) -> bool {
    if k == 0 || r.is_zero() {
        return false;
    }
    if r.den().is_even() || (r.num() % 3u32).is_zero() {
        return false;
    }
    if !cmp_three_halves_pow(k, r).is_lt() {
        return false;
    }
    if cmp_generator_pow(n_min, k, r).is_lt() {
        return false;
    }
    if k == 1 {
        return matches!(solve_generator(r), Some(n) if &n >= n_min);
    }
    true
}

/// Smallest `n` with `g(n) < a/b`, or `None` if `a/b ≤ 3/2`.
pub(crate) fn first_index_below(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    let two_a = a << 1usize;
    let three_b = b * 3u32;
    if two_a <= three_b {
        return None;
    }
    let two_b = b << 1usize;
    if &two_b < a {
        return Some(BigUint::zero());
    }
    Some((two_b - a) / (two_a - three_b) + 1u32)
}

/// Immediate verdicts that need no search.
pub(crate) fn trivial_verdict(r: &Rat) -> Option<Decision> {
    if r.is_zero() || r.den().is_even() || (r.num() % 3u32).is_zero() {
        return Some(Decision::NonMember);
    }
    if let Some(n) = solve_generator(r) {
        // a generator: one factor is the shortest possible representation
        let cert = WooleyCert::new([(n, 1)]).expect("one factor");
        return Some(Decision::Member(cert));
    }
    if max_factor_count(r) == 0 {
        return Some(Decision::NonMember);
    }
    None
}

/// Decides membership of `r` under `cfg`.
pub fn decide(r: &Rat, cfg: &SearchConfig) -> Decision {
    match cfg.mode {
        Mode::Complete => search(r, cfg).decision,
        Mode::Heuristic => decide_heuristic(r, cfg),
    }
}

/// [`decide`] together with the number of nodes expanded.
pub fn decide_counted(r: &Rat, cfg: &SearchConfig) -> (Decision, u64) {
    match cfg.mode {
        Mode::Complete => {
            let out = search(r, cfg);
            (out.decision, out.nodes)
        }
        Mode::Heuristic => heuristic::heuristic_counted(r, cfg),
    }
}

pub(crate) fn value_of(indices: &[BigUint]) -> Rat {
    indices
        .iter()
        .fold(Rat::one(), |acc, n| &acc * &generator_value(n))
}
