//! Data gathering: which integers are Wooley integers, which of those are
//! irreducible, the least `e` with `2^e·p` a Wooley integer, the sequence
//! `h(k) = (3·5^k + 1)/2` and the `g(423)` composite.
//!
//! Nothing here collapses an undecided search into either verdict.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, is_prime_u64};
use crate::certificate::{g423_witness, Certificate, WooleyCert};
use crate::decider::{decide_counted, Decision, SearchConfig};
use crate::error::Error;
use crate::wild::{search_two_powers, WildOutcome};
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Undecided,
}

impl Verdict {
    pub fn of(d: &Decision) -> Self {
        match d {
            Decision::Member(_) => Verdict::Member,
            Decision::NonMember => Verdict::NonMember,
            Decision::Undecided { .. } => Verdict::Undecided,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non-member",
            Verdict::Undecided => "undecided",
        }
    }
}

/// Outcome of deciding one integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRecord {
    pub n: u64,
    pub verdict: Verdict,
    pub cert: Option<WooleyCert>,
    pub nodes: u64,
}

#[derive(Serialize)]
struct RecordRow<'a> {
    n: u64,
    verdict: &'a str,
    cert: String,
    nodes: u64,
}

impl SurveyRecord {
    fn row(&self) -> RecordRow<'_> {
        RecordRow {
            n: self.n,
            verdict: self.verdict.as_str(),
            cert: self
                .cert
                .as_ref()
                .map(|c| Certificate::Wooley(c.clone()).to_string())
                .unwrap_or_default(),
            nodes: self.nodes,
        }
    }

    /// One JSON object; the certificate is in the text grammar.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.row()).expect("plain fields serialize")
    }
}

/// Writes records as CSV with columns `n, verdict, cert, nodes`.
pub fn write_csv<W: std::io::Write>(records: &[SurveyRecord], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r.row()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn record(n: u64, cfg: &SearchConfig) -> SurveyRecord {
    if n.is_multiple_of(3) {
        return SurveyRecord {
            n,
            verdict: Verdict::NonMember,
            cert: None,
            nodes: 0,
        };
    }
    let (d, nodes) = decide_counted(&Rat::from_integer(BigUint::from(n)), cfg);
    SurveyRecord {
        n,
        verdict: Verdict::of(&d),
        cert: match d {
            Decision::Member(c) => Some(c),
            _ => None,
        },
        nodes,
    }
}

/// One record for each `2 ≤ n ≤ x`, sorted by `n`. Multiples of 3 are
/// non-members without search; the rest are decided in parallel.
pub fn wooley_integers_upto(x: u64, cfg: &SearchConfig) -> Vec<SurveyRecord> {
    let mut out: Vec<SurveyRecord> = (2..=x).into_par_iter().map(|n| record(n, cfg)).collect();
    out.sort_by_key(|r| r.n);
    out
}

/// `(confirmed members, undecided)` among the records.
pub fn counting_summary(records: &[SurveyRecord]) -> (usize, usize) {
    let m = records.iter().filter(|r| r.verdict == Verdict::Member).count();
    let u = records.iter().filter(|r| r.verdict == Verdict::Undecided).count();
    (m, u)
}

/// Irreducibility of a Wooley integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WooleyNumberVerdict {
    /// A member that is not a product of two members.
    Irreducible,
    /// `n = d·(n/d)` with both parts members.
    Reducible { d: u64 },
    NotMember,
    Undecided,
}

/// Decides whether `n` is a Wooley number, i.e. an irreducible Wooley
/// integer.
pub fn is_wooley_number(n: u64, cfg: &SearchConfig) -> Result<WooleyNumberVerdict, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let mut memo: HashMap<u64, Verdict> = HashMap::new();
    let mut verdict = |m: u64| *memo.entry(m).or_insert_with(|| record(m, cfg).verdict);
    match verdict(n) {
        Verdict::NonMember => return Ok(WooleyNumberVerdict::NotMember),
        Verdict::Undecided => return Ok(WooleyNumberVerdict::Undecided),
        Verdict::Member => {}
    }
    let mut open = false;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let a = verdict(d);
            if a != Verdict::NonMember {
                let b = verdict(n / d);
                match (a, b) {
                    (Verdict::Member, Verdict::Member) => return Ok(WooleyNumberVerdict::Reducible { d }),
                    (_, Verdict::NonMember) => {}
                    _ => open = true,
                }
            }
        }
        d += 1;
    }
    Ok(if open {
        WooleyNumberVerdict::Undecided
    } else {
        WooleyNumberVerdict::Irreducible
    })
}

/// The least `e` with `2^e·p` a Wooley integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoExponent {
    /// Every smaller exponent was a complete non-member.
    Exact(u32),
    /// A member at this exponent, but some smaller one was undecided.
    UpperBound(u32),
    /// Nothing up to `max_e`; `undecided` lists exponents left open.
    NotFound { undecided: Vec<u32> },
}

/// `e(p)` for a prime `p > 3`, searching `e = 0..=max_e` in order.
pub fn min_two_exponent(p: u64, max_e: u32, cfg: &SearchConfig) -> Result<TwoExponent, Error> {
    if p == 3 {
        return Err(Error::DivisibleByThree(p.to_string()));
    }
    if p.is_even() {
        return Err(Error::EvenInput(p.to_string()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(match search_two_powers(&BigUint::from(p), max_e, cfg, false) {
        WildOutcome::Certified { j, minimal: true, .. } => TwoExponent::Exact(j),
        WildOutcome::Certified { j, .. } => TwoExponent::UpperBound(j),
        WildOutcome::NotFound { undecided } => TwoExponent::NotFound { undecided },
        WildOutcome::Unit => unreachable!("p > 3"),
    })
}

/// `h(k) = (3·5^k + 1)/2`.
pub fn h_value(k: u32) -> BigUint {
    (BigUint::from(5u32).pow(k) * 3u32 + 1u32) >> 1usize
}

/// Values of `h` with the distinct primes dividing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSequence {
    pub values: Vec<(u32, BigUint)>,
    /// `h(k) = 6h(k−1) − 5h(k−2)` held for every `k ≥ 3`.
    pub recurrence_holds: bool,
    pub prime_divisors: BTreeSet<BigUint>,
    /// Prime divisors were collected for `k ≤ factored_upto`; larger values
    /// are not factored.
    pub factored_upto: u32,
}

/// Values above this many bits are not factored.
const H_FACTOR_BITS: u64 = 80;

pub fn h_sequence(k_max: u32) -> Result<HSequence, Error> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let values: Vec<(u32, BigUint)> = (1..=k_max).map(|k| (k, h_value(k))).collect();
    let recurrence_holds = values
        .windows(3)
        .all(|w| &w[1].1 * 6u32 == &w[2].1 + &w[0].1 * 5u32);
    let mut prime_divisors = BTreeSet::new();
    let mut factored_upto = 0;
    for (k, h) in &values {
        if h.bits() > H_FACTOR_BITS {
            break;
        }
        prime_divisors.extend(factorize(h).iter().map(|(p, _)| p.clone()));
        factored_upto = *k;
    }
    Ok(HSequence {
        values,
        recurrence_holds,
        prime_divisors,
        factored_upto,
    })
}

/// Verdicts on `2^a·31` and `2^b·41` for `a, b ≤ 6`, and whether they rule
/// out a Wooley number `2^c·31·41`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonfreeReport {
    pub target: Rat,
    pub cert: WooleyCert,
    pub verified: bool,
    /// `(a, verdict of 2^a·31)` for `a = 0..=6`.
    pub probes_31: Vec<(u32, Verdict)>,
    pub probes_41: Vec<(u32, Verdict)>,
    /// `Some(true)` when members `2^a·31`, `2^b·41` with `a + b ≤ 6`
    /// exist, `Some(false)` when every such pair has a complete
    /// non-member, `None` otherwise.
    pub obstructed: Option<bool>,
}

/// Verifies `2^6·31·41 = g(423)·(2^2·7)·(2^2·11)^2` and probes the powers
/// of two below it.
pub fn nonfree_witness(cfg: &SearchConfig) -> NonfreeReport {
    let (target, cert) = g423_witness();
    let verified = cert.value() == target;
    let probe = |p: u64| -> Vec<(u32, Verdict)> {
        (0..=6u32)
            .into_par_iter()
            .map(|a| (a, record(p << a, cfg).verdict))
            .collect()
    };
    let probes_31 = probe(31);
    let probes_41 = probe(41);
    let pairs = || {
        probes_31.iter().flat_map(|(a, va)| {
            probes_41
                .iter()
                .filter(move |(b, _)| a + b <= 6)
                .map(move |(_, vb)| (*va, *vb))
        })
    };
    let obstructed = if pairs().any(|p| p == (Verdict::Member, Verdict::Member)) {
        Some(true)
    } else if pairs().all(|(x, y)| x == Verdict::NonMember || y == Verdict::NonMember) {
        Some(false)
    } else {
        None
    };
    NonfreeReport {
        target,
        cert,
        verified,
        probes_31,
        probes_41,
        obstructed,
    }
}
