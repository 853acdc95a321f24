//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Oracle;
use wooley::arith::factor::sieve_primes;
use wooley::certificate::{
    builtin_table1, composite_67_identity, from_json, g423_witness, identity_67, parse, serialize,
    table1_row, to_json, verify, Certificate, WooleyCert,
};
use wooley::decider::{decide, max_factor_count, search, Decision, SearchConfig};
use wooley::smooth::{pigeonhole_product, smooth_residue_report};
use wooley::survey::{h_sequence, min_two_exponent, wooley_integers_upto, TwoExponent, Verdict};
use wooley::wild::collatz_inverse_cert;
use wooley::Rat;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn int(v: u64) -> Rat {
    Rat::from_integer(BigUint::from(v))
}

fn reference(cert: &WooleyCert) -> BigRational {
    common::product(&cert.index_sequence().iter().map(common::to_big).collect::<Vec<_>>())
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let el = t.elapsed();
    if el > limit {
        return Err(format!("{what} took {el:.1?}, limit {limit:?}"));
    }
    Ok(())
}

fn example_verdicts() -> Check {
    let cfg = SearchConfig::default();
    ensure!(max_factor_count(&int(5)) == 3, "factor bound for 5 is {}", max_factor_count(&int(5)));
    ensure!(max_factor_count(&int(10)) == 5, "factor bound for 10 is {}", max_factor_count(&int(10)));
    for n in [5, 10] {
        let t = Instant::now();
        let out = search(&int(n), &cfg);
        ensure!(out.decision == Decision::NonMember, "decide({n}) = {:?}", out.decision);
        within(t, Duration::from_secs(60), &format!("decide({n})"))?;
    }
    let t = Instant::now();
    let d = decide(&int(20), &cfg);
    within(t, Duration::from_secs(600), "decide(20)")?;
    let Decision::Member(c) = d else {
        return Err(format!("decide(20) = {d:?}"));
    };
    ensure!(reference(&c) == common::int(20), "certificate for 20 evaluates wrongly");
    Ok(format!("5, 10 non-members; {}", serialize(&int(20), &Certificate::Wooley(c))))
}

fn table_corpus() -> Check {
    let t = Instant::now();
    let rows = builtin_table1();
    ensure!(rows.len() == 13, "{} rows", rows.len());
    for r in &rows {
        let want = common::int((r.p << r.k) as i64);
        ensure!(reference(&r.cert) == want, "row {} does not evaluate to its target", r.label());
        ensure!(verify(&Certificate::Wooley(r.cert.clone()), &r.target), "row {} rejected", r.label());
    }
    within(t, Duration::from_secs(1), "corpus check")?;
    Ok("13/13 rows evaluate exactly".into())
}

fn composition_67() -> Check {
    let t = Instant::now();
    let id = reference(&identity_67());
    ensure!(id == BigRational::new(BigInt::from(32 * 67), BigInt::from(5 * 37)), "identity evaluates to {id}");
    let composed = identity_67()
        .compose(&table1_row(5).unwrap().cert)
        .compose(&table1_row(37).unwrap().cert);
    let (target, cert) = composite_67_identity();
    ensure!(composed == cert, "composition differs from the embedded certificate");
    ensure!(target == int(274432), "target is {target}");
    ensure!(reference(&cert) == common::int(274432), "composite does not evaluate to 274432");
    within(t, Duration::from_secs(1), "composition")?;
    Ok(format!("2^12·67 = 274432 with {} factors", cert.factor_count()))
}

fn nonfree_scaffold() -> Check {
    let (target, cert) = g423_witness();
    ensure!(target == int(81344), "target is {target}");
    ensure!(reference(&cert) == common::int(81344), "witness does not evaluate to 81344");
    ensure!(verify(&Certificate::Wooley(cert), &target), "witness rejected");
    Ok("2^6·31·41 = 81344 verified".into())
}

fn collatz_certificates() -> Check {
    let t = Instant::now();
    for n in 1u64..=10_000 {
        let c = collatz_inverse_cert(&BigUint::from(n), 1_000_000).ok_or(format!("no certificate for {n}"))?;
        let mut v = common::int(2).pow(c.two_exponent() as i32);
        for (k, e) in c.inv_factors() {
            v *= common::g(&common::to_big(k)).recip().pow(*e as i32);
        }
        ensure!(v == common::int(n as i64), "certificate for {n} evaluates to {v}");
    }
    within(t, Duration::from_secs(30), "collatz certificates")?;
    Ok("n ≤ 10^4 all certified".into())
}

/// Steps the oracle may take per integer.
const ORACLE_LIMIT: u64 = 20_000_000;

fn oracle_equivalence() -> Check {
    let cfg = SearchConfig::default();
    let (mut cross, mut cert_only) = (0, Vec::new());
    for n in (2u64..=60).filter(|n| n % 3 != 0) {
        let d = decide(&int(n), &cfg);
        let o = common::naive_oracle(n, ORACLE_LIMIT);
        match (&d, &o) {
            (Decision::Undecided { .. }, _) => return Err(format!("decide({n}) undecided")),
            (Decision::Member(c), _) => {
                ensure!(reference(c) == common::int(n as i64), "certificate for {n} is wrong");
                match o {
                    Oracle::Member(p) => {
                        ensure!(common::product(&p) == common::int(n as i64), "oracle certificate for {n} is wrong");
                        cross += 1;
                    }
                    Oracle::NonMember => return Err(format!("oracle says {n} is a non-member")),
                    Oracle::Unknown => cert_only.push(n),
                }
            }
            (Decision::NonMember, Oracle::NonMember) => cross += 1,
            (Decision::NonMember, other) => return Err(format!("{n}: decider non-member, oracle {other:?}")),
        }
    }
    let mut msg = format!("{cross} agree with the oracle");
    if !cert_only.is_empty() {
        msg += &format!("; members {cert_only:?} confirmed by exact certificate only (oracle gave up)");
    }
    Ok(msg)
}

fn smooth_majority() -> Check {
    let r = smooth_residue_report(10007, 6).map_err(|e| e.to_string())?;
    ensure!(r.majority, "no majority mod 6·10007: {r:?}");
    ensure!(r.phi_n == 2 * 10006, "phi(6·10007) = {}", r.phi_n);
    let r = smooth_residue_report(11, 6).map_err(|e| e.to_string())?;
    let brute = (1u64..66)
        .filter(|x| num_integer::gcd(*x, 66) == 1)
        .filter(|&x| smooth_by_trial(x, 11))
        .count() as u64;
    ensure!((r.smooth_count, r.phi_n) == (brute, 20), "report for 11: {r:?}, brute force {brute}");
    ensure!(brute == 6, "brute force count {brute}");
    let primes: Vec<u64> = sieve_primes(1000).into_iter().map(u64::from).filter(|&p| p > 3).take(50).collect();
    ensure!(primes.len() == 50, "only {} primes", primes.len());
    for q in primes {
        let r = smooth_residue_report(q, 6).map_err(|e| e.to_string())?;
        ensure!(r.phi_n == 2 * (q - 1), "phi(6·{q}) = {}", r.phi_n);
    }
    Ok("majority mod 6·10007; (6, 20) for q = 11; phi checked for 50 primes".into())
}

fn smooth_by_trial(mut n: u64, y: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            if d >= y {
                return false;
            }
            n /= d;
        }
        d += 1;
    }
    n < y || n == 1
}

fn pigeonhole_classes() -> Check {
    let q = 10007u64;
    let modulus = 6 * q;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done = 0;
    while done < 100 {
        let r = rng.gen_range(1..modulus);
        if num_integer::gcd(r, modulus) != 1 {
            continue;
        }
        let (s, t) = pigeonhole_product(r, modulus, q)
            .map_err(|e| e.to_string())?
            .ok_or(format!("no product for {r}"))?;
        ensure!((s as u128 * t as u128 % modulus as u128) as u64 == r, "{s}·{t} ≢ {r}");
        ensure!(smooth_by_trial(s, q) && smooth_by_trial(t, q), "{s} or {t} is not smooth");
        done += 1;
    }
    Ok("100/100 classes split".into())
}

fn exponent_of_5() -> Check {
    let cfg = SearchConfig::default();
    for e in [0u32, 1] {
        let d = search(&int(5 << e), &cfg).decision;
        ensure!(d == Decision::NonMember, "2^{e}·5: {d:?}");
    }
    let got = min_two_exponent(5, 4, &cfg).map_err(|e| e.to_string())?;
    ensure!(got == TwoExponent::Exact(2), "e(5): {got:?}");
    Ok("e(5) = 2, with 5 and 10 complete non-members".into())
}

fn h_recurrence() -> Check {
    let h = h_sequence(30).map_err(|e| e.to_string())?;
    ensure!(h.recurrence_holds, "recurrence flag is false");
    let five = BigUint::from(5u32);
    for (k, v) in &h.values {
        ensure!(v * 2u32 == five.pow(*k) * 3u32 + 1u32, "h({k}) = {v}");
    }
    for w in h.values.windows(3) {
        ensure!(&w[2].1 + &w[0].1 * 5u32 == &w[1].1 * 6u32, "recurrence fails at k = {}", w[2].0);
    }
    let first: Vec<u64> = h.values.iter().take(3).map(|(_, v)| v.to_u64().unwrap()).collect();
    ensure!(first == [8, 38, 188], "h(1..3) = {first:?}");
    Ok("k ≤ 30".into())
}

fn property_suites() -> Check {
    use proptest::prelude::*;
    let strategy = (prop::collection::vec(0u64..=200, 1..=8), -4i64..=4, 0u32..3);
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        ..Config::default()
    });
    runner
        .run(&strategy, |(ix, k, kind)| {
            let w = WooleyCert::from_indices(ix.iter().map(|&i| BigUint::from(i))).unwrap();
            let cert = match kind {
                0 => Certificate::Wooley(w.clone()),
                1 => Certificate::Wild(wooley::certificate::WildCert::new(Some(w.clone()), k).unwrap()),
                _ => Certificate::Inverse(
                    wooley::certificate::InverseCert::new(w.factors().to_vec(), k.unsigned_abs()).unwrap(),
                ),
            };
            let v = cert.value();
            let mut expect = reference(&w);
            match kind {
                0 => {}
                1 => expect *= common::int(2).pow(k as i32),
                _ => expect = expect.recip() * common::int(2).pow(k.unsigned_abs() as i32),
            }
            let got = BigRational::new(BigInt::from(v.num().clone()), BigInt::from(v.den().clone()));
            prop_assert_eq!(got, expect);
            prop_assert!(verify(&cert, &v));
            let line = serialize(&v, &cert);
            let back = parse(&line).unwrap();
            prop_assert_eq!(back.target.as_ref(), Some(&v));
            prop_assert_eq!(&back.cert, &cert);
            let (t, c) = from_json(&to_json(&v, &cert)).unwrap();
            prop_assert_eq!(t, v);
            prop_assert_eq!(c, cert);
            Ok(())
        })
        .map_err(|e| format!("property failure: {e}"))?;

    let cfg = SearchConfig::default();
    let records = wooley_integers_upto(100, &cfg);
    let verdict = |n: u64| records.iter().find(|r| r.n == n).map(|r| r.verdict);
    let members: Vec<_> = records.iter().filter(|r| r.verdict == Verdict::Member).collect();
    for r in &members {
        let c = r.cert.as_ref().unwrap();
        ensure!(reference(c) == common::int(r.n as i64), "certificate for {} is wrong", r.n);
    }
    let mut products = 0;
    for a in &members {
        for b in &members {
            if a.n > b.n {
                continue;
            }
            let c = a.cert.as_ref().unwrap().compose(b.cert.as_ref().unwrap());
            let n = a.n * b.n;
            ensure!(reference(&c) == common::int(n as i64), "composed certificate for {n} is wrong");
            if n <= 100 {
                ensure!(verdict(n) != Some(Verdict::NonMember), "{} · {} = {n} reported non-member", a.n, b.n);
                products += 1;
            }
        }
    }
    let undecided: Vec<u64> = records.iter().filter(|r| r.verdict == Verdict::Undecided).map(|r| r.n).collect();
    Ok(format!(
        "1000 certificates; {} members up to 100, {products} products inside the range, undecided {undecided:?}",
        members.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("1 small examples", example_verdicts),
        ("2 embedded corpus", table_corpus),
        ("3 composite for 2^12·67", composition_67),
        ("4 g(423) composite", nonfree_scaffold),
        ("5 3x+1 certificates", collatz_certificates),
        ("6 oracle equivalence", oracle_equivalence),
        ("7 smooth majority", smooth_majority),
        ("8 pigeonhole products", pigeonhole_classes),
        ("9 e(5)", exponent_of_5),
        ("10 h(k) recurrence", h_recurrence),
        ("11 property suites", property_suites),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({secs:.2}s)"),
            Err(msg) => {
                println!("FAIL criterion {name}: {msg} ({secs:.2}s)");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
