//! Depth-first branch and bound over nondecreasing index sequences.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::pair::{v2, v3_big, PairPlan, PairProblem, PairStep, SignedFactors};
use super::{
    first_index_below, max_factor_count, max_first_index, trivial_verdict, value_of, Decision,
    SearchConfig,
};
use crate::arith::{cmp_three_halves_pow, factorize, solve_generator};
use crate::certificate::WooleyCert;
use crate::Rat;

/// One expanded node: the depth of the choice, the chosen index and the
/// residual left after dividing out `g(index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub depth: usize,
    pub index: BigUint,
    pub residual: Rat,
}

impl std::fmt::Display for TraceLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.depth, self.index, self.residual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub decision: Decision,
    pub nodes: u64,
    /// True when the certificate is provably the canonical one (no range
    /// was skipped before it was found). Always true for non-members.
    pub canonical: bool,
    pub passes: u32,
    /// Ranges skipped in the last pass.
    pub deferred: u64,
    pub transcript: Vec<TraceLine>,
}

const FIRST_CAP: u64 = 1 << 12;
const CAP_GROWTH: u64 = 16;
/// Pair problems narrower than this are scanned without factoring.
const SCAN_ALWAYS: u64 = 64;

struct Engine<'s, 'f> {
    budget: u64,
    nodes: u64,
    cap: Option<u64>,
    deferred: u64,
    out_of_budget: bool,
    path: Vec<BigUint>,
    base: SignedFactors,
    cache: Vec<SignedFactors>,
    sink: Option<&'s mut (dyn FnMut(&TraceLine) + 'f)>,
}

enum Step {
    Found(Vec<BigUint>),
    Empty,
    Stop,
}

pub(crate) fn merge_signed(acc: &mut SignedFactors, n: &BigUint, sign: i64) {
    if n.is_one() {
        return;
    }
    for (p, e) in factorize(n).iter() {
        match acc.binary_search_by(|(q, _)| q.cmp(p)) {
            Ok(i) => {
                acc[i].1 += sign * e as i64;
                if acc[i].1 == 0 {
                    acc.remove(i);
                }
            }
            Err(i) => acc.insert(i, (p.clone(), sign * e as i64)),
        }
    }
}

fn signed_factors(r: &Rat) -> SignedFactors {
    let mut v = SignedFactors::new();
    merge_signed(&mut v, r.num(), 1);
    merge_signed(&mut v, r.den(), -1);
    v
}

/// `p(2n+1) / (q(3n+2))` in lowest terms, given `gcd(p, q) = 1`.
pub(crate) fn divide_out(p: &BigUint, q: &BigUint, n: &BigUint) -> (BigUint, BigUint) {
    let a = (n << 1usize) + 1u32;
    let b = n * 3u32 + 2u32;
    let g1 = p.gcd(&b);
    let g2 = q.gcd(&a);
    ((p / &g1) * (a / &g2), (q / &g2) * (b / &g1))
}

fn width(lo: &BigUint, hi: &BigUint) -> u64 {
    (hi - lo + 1u32).to_u64().unwrap_or(u64::MAX)
}

impl Engine<'_, '_> {
    fn tick(&mut self) -> bool {
        if self.nodes >= self.budget {
            self.out_of_budget = true;
            return false;
        }
        self.nodes += 1;
        true
    }

    fn over_cap(&mut self, w: u64) -> bool {
        match self.cap {
            Some(c) if w > c => {
                self.deferred += 1;
                true
            }
            _ => false,
        }
    }

    fn emit(&mut self, depth: usize, index: &BigUint, p: &BigUint, q: &BigUint) {
        if let Some(sink) = self.sink.as_mut() {
            let line = TraceLine {
                depth,
                index: index.clone(),
                residual: Rat::from_parts_unchecked(p.clone(), q.clone()),
            };
            sink(&line);
        }
    }

    /// Signed factorization of the residual after the current path.
    fn residual_factors(&mut self) -> SignedFactors {
        while self.cache.len() < self.path.len() {
            let i = self.cache.len();
            let mut acc = if i == 0 {
                self.base.clone()
            } else {
                self.cache[i - 1].clone()
            };
            let n = &self.path[i];
            merge_signed(&mut acc, &((n << 1usize) + 1u32), 1);
            merge_signed(&mut acc, &(n * 3u32 + 2u32), -1);
            self.cache.push(acc);
        }
        match self.path.len() {
            0 => self.base.clone(),
            d => self.cache[d - 1].clone(),
        }
    }

    fn set_path(&mut self, depth: usize, n: &BigUint) {
        self.path.truncate(depth);
        self.cache.truncate(depth);
        self.path.push(n.clone());
    }

    fn dfs(&mut self, p: &BigUint, q: &BigUint, k: u32, n_min: &BigUint) -> Step {
        let depth = self.path.len();
        match k {
            0 => unreachable!("k ≥ 1"),
            1 => {
                if !self.tick() {
                    return Step::Stop;
                }
                let r = Rat::from_parts_unchecked(p.clone(), q.clone());
                match solve_generator(&r) {
                    Some(n) if &n >= n_min => {
                        self.emit(depth, &n, &BigUint::one(), &BigUint::one());
                        Step::Found(vec![n])
                    }
                    _ => Step::Empty,
                }
            }
            2 => self.pair(p, q, n_min),
            _ => self.level(p, q, k, n_min),
        }
    }

    fn pair(&mut self, p: &BigUint, q: &BigUint, n_min: &BigUint) -> Step {
        let depth = self.path.len();
        let Some(prob) = PairProblem::new(p, q, n_min) else {
            return Step::Empty;
        };
        let w = prob.width().to_u64().unwrap_or(u64::MAX);
        let plan = if w > SCAN_ALWAYS {
            PairPlan::choose(&prob, &self.residual_factors(), w)
        } else {
            PairPlan::Scan(w)
        };
        if self.over_cap(plan.cost()) {
            return Step::Empty;
        }
        let mut stopped = false;
        let step = {
            let mut visit = || {
                if self.nodes >= self.budget {
                    stopped = true;
                    false
                } else {
                    self.nodes += 1;
                    true
                }
            };
            plan.run(&prob, n_min, &mut visit)
        };
        if stopped {
            self.out_of_budget = true;
            return Step::Stop;
        }
        match step {
            Some(PairStep::Found(b, c)) => {
                let (p2, q2) = divide_out(p, q, &b);
                self.emit(depth, &b, &p2, &q2);
                self.emit(depth + 1, &c, &BigUint::one(), &BigUint::one());
                Step::Found(vec![b, c])
            }
            Some(PairStep::Empty) => Step::Empty,
            None => Step::Stop,
        }
    }

    fn level(&mut self, p: &BigUint, q: &BigUint, k: u32, n_min: &BigUint) -> Step {
        let depth = self.path.len();
        let r = Rat::from_parts_unchecked(p.clone(), q.clone());
        let Some(hi) = max_first_index(&r, k, n_min) else {
            return Step::Empty;
        };
        // after choosing n the rest must exceed (3/2)^(k-1)
        let a = p << (k as usize - 1);
        let b = q * BigUint::from(3u32).pow(k - 1);
        let Some(lo) = first_index_below(&a, &b) else {
            return Step::Empty;
        };
        let lo = lo.max(n_min.clone());
        if lo > hi {
            return Step::Empty;
        }
        if self.over_cap(width(&lo, &hi)) {
            return Step::Empty;
        }
        let v2p = v2(p);
        let v3q = v3_big(q);
        let mut n = lo;
        while n <= hi {
            let num = &n * 3u32 + 2u32;
            let den = (&n << 1usize) + 1u32;
            if v2(&num) <= v2p && v3_big(&den) <= v3q {
                if !self.tick() {
                    return Step::Stop;
                }
                let (p2, q2) = divide_out(p, q, &n);
                self.emit(depth, &n, &p2, &q2);
                self.set_path(depth, &n);
                match self.dfs(&p2, &q2, k - 1, &n) {
                    Step::Found(mut rest) => {
                        rest.insert(0, n);
                        return Step::Found(rest);
                    }
                    Step::Stop => return Step::Stop,
                    Step::Empty => {}
                }
                self.path.truncate(depth);
                self.cache.truncate(depth);
            }
            n += 1u32;
        }
        Step::Empty
    }
}

/// Complete search, streaming the transcript to `sink`.
pub fn search_with(r: &Rat, cfg: &SearchConfig, sink: &mut dyn FnMut(&TraceLine)) -> SearchOutcome {
    run(r, cfg, Some(sink))
}

/// Complete search; collects the transcript when `cfg.emit_transcript`.
pub fn search(r: &Rat, cfg: &SearchConfig) -> SearchOutcome {
    if cfg.emit_transcript {
        let mut lines = Vec::new();
        let mut out = run(r, cfg, Some(&mut |l: &TraceLine| lines.push(l.clone())));
        out.transcript = lines;
        out
    } else {
        run(r, cfg, None)
    }
}

/// Share of the budget given to each probe phase.
const PROBE_CAP: u64 = 1_000_000;

/// Runs in three phases: a short exhaustive probe, a randomized probe that
/// can only confirm members, then exhaustion with the rest of the budget.
/// A member found by the randomized probe is reported as non-canonical.
fn run<'f>(r: &Rat, cfg: &SearchConfig, mut sink: Option<&mut (dyn FnMut(&TraceLine) + 'f)>) -> SearchOutcome {
    let mut out = SearchOutcome {
        decision: Decision::NonMember,
        nodes: 0,
        canonical: true,
        passes: 0,
        deferred: 0,
        transcript: Vec::new(),
    };
    if let Some(d) = trivial_verdict(r) {
        out.decision = d;
        return out;
    }
    let bound = max_factor_count(r);
    let m_max = cfg.max_factors_override.map_or(bound, |o| o.min(bound));
    let truncated = m_max < bound;
    let budget = cfg.node_budget.max(1);

    let first = (budget / 2).clamp(1, PROBE_CAP);
    let mut out = exhaust(r, m_max, truncated, first, sink.as_deref_mut());
    if !matches!(out.decision, Decision::Undecided { .. }) || first == budget {
        return out;
    }

    let rest = budget - out.nodes;
    let probe = (rest / 2).min(PROBE_CAP);
    if probe > 0 {
        let mut hcfg = cfg.clone();
        hcfg.node_budget = probe;
        let (d, used) = super::heuristic::heuristic_counted(r, &hcfg);
        out.nodes += used;
        if let Decision::Member(c) = d {
            out.decision = Decision::Member(c);
            out.canonical = false;
            return out;
        }
    }

    let rest = budget.saturating_sub(out.nodes);
    if rest == 0 {
        out.decision = Decision::Undecided { nodes: out.nodes };
        return out;
    }
    let spent = out.nodes;
    let passes = out.passes;
    let mut last = exhaust(r, m_max, truncated, rest, sink);
    last.nodes += spent;
    last.passes += passes;
    if let Decision::Undecided { nodes } = &mut last.decision {
        *nodes = last.nodes;
    }
    last
}

fn exhaust<'f>(
    r: &Rat,
    m_max: u32,
    truncated: bool,
    budget: u64,
    sink: Option<&mut (dyn FnMut(&TraceLine) + 'f)>,
) -> SearchOutcome {
    let mut out = SearchOutcome {
        decision: Decision::NonMember,
        nodes: 0,
        canonical: true,
        passes: 0,
        deferred: 0,
        transcript: Vec::new(),
    };
    let mut eng = Engine {
        budget,
        nodes: 0,
        cap: Some(FIRST_CAP),
        deferred: 0,
        out_of_budget: false,
        path: Vec::new(),
        base: signed_factors(r),
        cache: Vec::new(),
        sink,
    };
    let (p, q) = (r.num().clone(), r.den().clone());
    loop {
        out.passes += 1;
        eng.deferred = 0;
        let mut found = None;
        for m in 2..=m_max {
            if !cmp_three_halves_pow(m, r).is_lt() {
                break;
            }
            eng.path.clear();
            eng.cache.clear();
            match eng.dfs(&p, &q, m, &BigUint::zero()) {
                Step::Found(seq) => {
                    found = Some(seq);
                    break;
                }
                Step::Stop => break,
                Step::Empty => {}
            }
        }
        out.nodes = eng.nodes;
        out.deferred = eng.deferred;
        if let Some(seq) = found {
            assert_eq!(&value_of(&seq), r, "search produced a wrong certificate");
            out.canonical = eng.deferred == 0;
            out.decision = Decision::Member(WooleyCert::from_indices(seq).expect("nonempty"));
            return out;
        }
        if eng.out_of_budget {
            out.canonical = false;
            out.decision = Decision::Undecided { nodes: eng.nodes };
            return out;
        }
        if eng.deferred == 0 {
            out.decision = if truncated {
                Decision::Undecided { nodes: eng.nodes }
            } else {
                Decision::NonMember
            };
            return out;
        }
        let remaining = eng.budget - eng.nodes;
        eng.cap = match eng.cap {
            Some(c) => {
                let next = c.saturating_mul(CAP_GROWTH);
                (next < remaining).then_some(next)
            }
            None => unreachable!("an uncapped pass never defers"),
        };
    }
}
