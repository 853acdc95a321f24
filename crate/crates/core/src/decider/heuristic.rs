//! Sound but incomplete search.
//!
//! At each level only a handful of indices are tried: those whose
//! denominator `2n+1` cancels the largest prime power in the residual's
//! denominator, or else whose numerator `3n+2` cancels the largest odd prime
//! power in its numerator, plus the smallest admissible indices. The last
//! two factors are solved exactly. Later restarts shuffle the candidate
//! order with a seeded generator.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pair::{v2, v3_big, PairPlan, PairProblem, PairStep, SignedFactors};
use super::search::{divide_out, merge_signed};
use super::{first_index_below, max_factor_count, max_first_index, trivial_verdict, value_of, Decision, SearchConfig};
use crate::arith::solve_generator;
use crate::certificate::WooleyCert;
use crate::Rat;

const BRANCH: usize = 6;
const RESTARTS: u64 = 8;

struct Heur {
    budget: u64,
    nodes: u64,
    rng: Option<ChaCha8Rng>,
}

/// Smallest `n ≥ lo` with `n ≡ c (mod m)`.
fn first_in_class(lo: &BigUint, c: &BigUint, m: &BigUint) -> BigUint {
    let r = lo % m;
    if &r <= c {
        lo + (c - &r)
    } else {
        lo + (m - &r) + c
    }
}

/// Modular inverse of 3 modulo `m` (gcd(3, m) = 1).
fn inv3(m: &BigUint) -> BigUint {
    // 3·x ≡ 1: x = (m·k + 1)/3 for the k ∈ {1, 2} that makes it integral
    let one = BigUint::one();
    for k in 1u32..=2 {
        let t = m * k + &one;
        if (&t % 3u32).is_zero() {
            return t / 3u32;
        }
    }
    unreachable!("3 is invertible modulo m")
}

fn largest_power(f: &SignedFactors, sign: i64) -> Option<BigUint> {
    f.iter()
        .filter(|(p, e)| e.signum() == sign && p > &BigUint::from(3u32))
        .map(|(p, e)| p.pow(e.unsigned_abs() as u32))
        .max()
}

impl Heur {
    fn tick(&mut self) -> bool {
        if self.nodes >= self.budget {
            return false;
        }
        self.nodes += 1;
        true
    }

    fn candidates(&mut self, f: &SignedFactors, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = Vec::new();
        let push_class = |c: BigUint, m: BigUint, out: &mut Vec<BigUint>| {
            let mut n = first_in_class(lo, &c, &m);
            while &n <= hi && out.len() < BRANCH {
                out.push(n.clone());
                n += &m;
            }
        };
        if let Some(m) = largest_power(f, -1) {
            // 2n+1 ≡ 0 (mod m)
            let c = (&m - 1u32) >> 1usize;
            push_class(c, m, &mut out);
        } else if let Some(m) = largest_power(f, 1) {
            // 3n+2 ≡ 0 (mod m)
            let c = ((&m - 2u32) * inv3(&m)) % &m;
            push_class(c, m, &mut out);
        }
        let mut n = lo.clone();
        while &n <= hi && out.len() < 2 * BRANCH {
            if !out.contains(&n) {
                out.push(n.clone());
            }
            n += 1u32;
        }
        if let Some(rng) = self.rng.as_mut() {
            out.shuffle(rng);
        }
        out
    }

    fn dfs(&mut self, p: &BigUint, q: &BigUint, f: &SignedFactors, k: u32, n_min: &BigUint) -> Option<Vec<BigUint>> {
        if k == 1 {
            if !self.tick() {
                return None;
            }
            let r = Rat::from_parts_unchecked(p.clone(), q.clone());
            return solve_generator(&r).filter(|n| n >= n_min).map(|n| vec![n]);
        }
        if k == 2 {
            let prob = PairProblem::new(p, q, n_min)?;
            let w = prob.width().to_u64().unwrap_or(u64::MAX);
            let plan = PairPlan::choose(&prob, f, w);
            let budget = &mut self.budget;
            let nodes = &mut self.nodes;
            let visit = || {
                if *nodes >= *budget {
                    false
                } else {
                    *nodes += 1;
                    true
                }
            };
            let step = plan.run(&prob, n_min, visit);
            return match step {
                Some(PairStep::Found(b, c)) => Some(vec![b, c]),
                _ => None,
            };
        }
        let r = Rat::from_parts_unchecked(p.clone(), q.clone());
        let hi = max_first_index(&r, k, n_min)?;
        let a = p << (k as usize - 1);
        let b = q * BigUint::from(3u32).pow(k - 1);
        let lo = first_index_below(&a, &b)?.max(n_min.clone());
        if lo > hi {
            return None;
        }
        let (v2p, v3q) = (v2(p), v3_big(q));
        for n in self.candidates(f, &lo, &hi) {
            if v2(&(&n * 3u32 + 2u32)) > v2p || v3_big(&((&n << 1usize) + 1u32)) > v3q {
                continue;
            }
            if !self.tick() {
                return None;
            }
            let (p2, q2) = divide_out(p, q, &n);
            let mut f2 = f.clone();
            merge_signed(&mut f2, &((&n << 1usize) + 1u32), 1);
            merge_signed(&mut f2, &(&n * 3u32 + 2u32), -1);
            if let Some(mut rest) = self.dfs(&p2, &q2, &f2, k - 1, &n) {
                rest.insert(0, n);
                return Some(rest);
            }
        }
        None
    }
}

/// Heuristic membership: `Member` when a certificate is found, otherwise
/// `Undecided`. Only the immediate divisibility and size rejections yield
/// `NonMember`.
pub fn decide_heuristic(r: &Rat, cfg: &SearchConfig) -> Decision {
    heuristic_counted(r, cfg).0
}

/// [`decide_heuristic`] together with the nodes it used.
pub(crate) fn heuristic_counted(r: &Rat, cfg: &SearchConfig) -> (Decision, u64) {
    if let Some(d) = trivial_verdict(r) {
        return (d, 0);
    }
    let bound = max_factor_count(r);
    let m_max = cfg.max_factors_override.map_or(bound, |o| o.min(bound));
    let mut f = SignedFactors::new();
    merge_signed(&mut f, r.num(), 1);
    merge_signed(&mut f, r.den(), -1);
    let mut h = Heur {
        budget: cfg.node_budget.max(1),
        nodes: 0,
        rng: None,
    };
    for restart in 0..=RESTARTS {
        if restart > 0 {
            h.rng = Some(ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart)));
        }
        for m in 2..=m_max {
            if let Some(seq) = h.dfs(r.num(), r.den(), &f, m, &BigUint::zero()) {
                debug_assert_eq!(&value_of(&seq), r);
                if &value_of(&seq) == r {
                    return (Decision::Member(WooleyCert::from_indices(seq).expect("nonempty")), h.nodes);
                }
            }
            if h.nodes >= h.budget {
                return (Decision::Undecided { nodes: h.nodes }, h.nodes);
            }
        }
    }
    (Decision::Undecided { nodes: h.nodes }, h.nodes)
}
