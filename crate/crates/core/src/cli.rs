//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 for a definitive answer, 2 when a search ran out
//! of budget, 1 for usage, parse and verification errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use crate::certificate::{
    builtin_table1, from_json, parse, serialize, to_json, CertJson, Certificate,
};
use crate::decider::{search, search_with, Decision, Mode, SearchConfig, TraceLine, DEFAULT_BUDGET};
use crate::smooth::{pigeonhole_product, smooth_residue_report};
use crate::survey::{
    counting_summary, h_sequence, is_wooley_number, min_two_exponent, nonfree_witness,
    wooley_integers_upto, write_csv, TwoExponent, Verdict, WooleyNumberVerdict,
};
use crate::wild::{collatz_inverse_cert, wild_number_check, WildOutcome};
use crate::{Error, Rat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Complete,
    Heuristic,
}

#[derive(Debug, Parser)]
#[command(name = "wooley", version, about = "Decide and certify membership in the Wooley semigroup")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Node budget per search.
    #[arg(long, global = true, env = "WOOLEY_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Complete)]
    pub mode: ModeArg,
    /// Seed for randomized restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a rational is in the semigroup.
    Decide {
        /// `a/b` or an integer.
        value: String,
        /// Stream each expanded node to stderr.
        #[arg(long)]
        transcript: bool,
    },
    /// Check every certificate line of a file (text or JSON lines).
    Verify { file: PathBuf },
    /// Verify the embedded table of certificates for `2^k·p`.
    Table1,
    /// Least `e` with `2^e·p` a Wooley integer.
    Ep {
        p: u64,
        #[arg(long, default_value_t = 16)]
        max_exp: u32,
    },
    /// Inverse-semigroup certificate read off the 3x+1 trajectory.
    CollatzCert {
        n: BigUint,
        /// Maximum number of `T` steps.
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Count `q`-smooth invertible classes modulo `mult·q`.
    SmoothCount {
        q: u64,
        #[arg(long, default_value_t = 6)]
        mult: u64,
    },
    /// Write a class `r` modulo `mult·q` as a product of two `q`-smooth classes.
    Pigeonhole {
        r: u64,
        q: u64,
        #[arg(long, default_value_t = 6)]
        mult: u64,
    },
    /// Decide every integer `2 ≤ n ≤ x`.
    Count {
        x: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Whether a Wooley integer is irreducible.
    Irreducible { n: u64 },
    /// The `g(423)` composite and its factor probes.
    Nonfree,
    /// `h(k) = (3·5^k + 1)/2` for `1 ≤ k ≤ K`.
    HSeq {
        #[arg(default_value_t = 30)]
        k: u32,
    },
    /// Conjectural and constructive wildness of `p`.
    WildCheck {
        p: BigUint,
        #[arg(long, default_value_t = 16)]
        max_exp: u32,
    },
}

struct Ctx<'a> {
    json: bool,
    cfg: SearchConfig,
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
            return code;
        }
    };
    let cfg = SearchConfig {
        node_budget: cli.budget,
        mode: match cli.mode {
            ModeArg::Complete => Mode::Complete,
            ModeArg::Heuristic => Mode::Heuristic,
        },
        seed: cli.seed,
        ..SearchConfig::default()
    };
    let mut ctx = Ctx {
        json: cli.json,
        cfg,
        out,
        err,
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut ctx)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(&cli.command, &mut ctx),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: &Command, cx: &mut Ctx) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    match cmd {
        Command::Decide { value, transcript } => decide_cmd(value, *transcript, cx),
        Command::Verify { file } => verify_cmd(file, cx),
        Command::Table1 => table1_cmd(cx),
        Command::Ep { p, max_exp } => ep_cmd(*p, *max_exp, cx),
        Command::CollatzCert { n, limit } => {
            if n == &BigUint::ZERO {
                return Err(Error::InvalidArgument("n must be at least 1".into()));
            }
            let Some(cert) = collatz_inverse_cert(n, *limit) else {
                writeln!(cx.out, "undecided: 1 not reached within {limit} steps").map_err(io)?;
                return Ok(EXIT_UNDECIDED);
            };
            let target = Rat::from_integer(n.clone());
            let cert = Certificate::Inverse(cert);
            if cx.json {
                writeln!(cx.out, "{}", to_json(&target, &cert)).map_err(io)?;
            } else {
                writeln!(cx.out, "{}", serialize(&target, &cert)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::SmoothCount { q, mult } => {
            let report = smooth_residue_report(*q, *mult)?;
            let text = serde_json::to_string(&report).expect("plain fields serialize");
            writeln!(cx.out, "{text}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Pigeonhole { r, q, mult } => {
            let modulus = smooth_residue_report(*q, *mult)?.modulus;
            let found = pigeonhole_product(*r, modulus, *q)?;
            if cx.json {
                let v = json!({
                    "r": r % modulus,
                    "modulus": modulus,
                    "factors": found.map(|(s, t)| [s, t]),
                });
                writeln!(cx.out, "{v}").map_err(io)?;
            } else {
                match found {
                    Some((s, t)) => writeln!(cx.out, "{s} * {t} ≡ {} (mod {modulus})", r % modulus),
                    None => writeln!(cx.out, "no majority of {q}-smooth classes mod {modulus}"),
                }
                .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Count { x, csv } => {
            let records = wooley_integers_upto(*x, &cx.cfg);
            if *csv {
                write_csv(&records, &mut *cx.out)?;
            } else {
                for r in &records {
                    writeln!(cx.out, "{}", r.to_json()).map_err(io)?;
                }
            }
            let (members, undecided) = counting_summary(&records);
            writeln!(cx.err, "{members} members, {undecided} undecided up to {x}").map_err(io)?;
            Ok(if undecided > 0 { EXIT_UNDECIDED } else { EXIT_OK })
        }
        Command::Irreducible { n } => {
            let (text, code) = match is_wooley_number(*n, &cx.cfg)? {
                WooleyNumberVerdict::Irreducible => ("irreducible".to_string(), EXIT_OK),
                WooleyNumberVerdict::Reducible { d } => (format!("reducible: {d} * {}", n / d), EXIT_OK),
                WooleyNumberVerdict::NotMember => ("non-member".to_string(), EXIT_OK),
                WooleyNumberVerdict::Undecided => ("undecided".to_string(), EXIT_UNDECIDED),
            };
            if cx.json {
                writeln!(cx.out, "{}", json!({ "n": n, "verdict": text })).map_err(io)?;
            } else {
                writeln!(cx.out, "{text}").map_err(io)?;
            }
            Ok(code)
        }
        Command::Nonfree => nonfree_cmd(cx),
        Command::HSeq { k } => {
            let h = h_sequence(*k)?;
            if cx.json {
                let v = json!({
                    "values": h.values.iter().map(|(k, v)| json!({"k": k, "h": v.to_string()})).collect::<Vec<_>>(),
                    "recurrence_holds": h.recurrence_holds,
                    "prime_divisors": h.prime_divisors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "factored_upto": h.factored_upto,
                });
                writeln!(cx.out, "{v}").map_err(io)?;
            } else {
                for (k, v) in &h.values {
                    writeln!(cx.out, "h({k}) = {v}").map_err(io)?;
                }
                writeln!(cx.out, "recurrence h(k) = 6h(k-1) - 5h(k-2): {}", h.recurrence_holds).map_err(io)?;
                let primes: Vec<String> = h.prime_divisors.iter().map(|p| p.to_string()).collect();
                writeln!(cx.out, "primes dividing h(1..={}): {}", h.factored_upto, primes.join(" ")).map_err(io)?;
            }
            Ok(if h.recurrence_holds { EXIT_OK } else { EXIT_ERROR })
        }
        Command::WildCheck { p, max_exp } => {
            let r = wild_number_check(p, *max_exp, &cx.cfg);
            let (found, code) = match &r.constructive {
                WildOutcome::Certified { cert, j, minimal } => {
                    let target = Rat::from_integer(p.clone());
                    let c = Certificate::Wild(cert.clone());
                    let shown = if cx.json {
                        serde_json::to_value(CertJson::new(&target, &c)).expect("plain strings serialize")
                    } else {
                        json!(serialize(&target, &c))
                    };
                    (json!({ "j": j, "minimal": minimal, "cert": shown }), EXIT_OK)
                }
                WildOutcome::Unit => (json!("unit"), EXIT_OK),
                WildOutcome::NotFound { undecided } if undecided.is_empty() => (json!(null), EXIT_OK),
                WildOutcome::NotFound { undecided } => (json!({ "undecided": undecided }), EXIT_UNDECIDED),
            };
            if cx.json {
                let v = json!({
                    "p": p.to_string(),
                    "is_prime": r.is_prime,
                    "conjectural_wild": r.conjectural_wild,
                    "constructive": found,
                });
                writeln!(cx.out, "{v}").map_err(io)?;
            } else {
                writeln!(cx.out, "prime: {}", r.is_prime).map_err(io)?;
                writeln!(cx.out, "wild number by conjecture: {}", r.conjectural_wild).map_err(io)?;
                match &r.constructive {
                    WildOutcome::Certified { cert, j, .. } => writeln!(
                        cx.out,
                        "wild integer: 2^{j}·{p} is a Wooley integer: {}",
                        serialize(&Rat::from_integer(p.clone()), &Certificate::Wild(cert.clone()))
                    ),
                    WildOutcome::Unit => writeln!(cx.out, "wild integer: unit"),
                    WildOutcome::NotFound { undecided } if undecided.is_empty() => {
                        writeln!(cx.out, "wild integer: no 2^j·{p} with j ≤ {max_exp}")
                    }
                    WildOutcome::NotFound { undecided } => {
                        writeln!(cx.out, "wild integer: undecided at j = {undecided:?}")
                    }
                }
                .map_err(io)?;
            }
            Ok(code)
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.parse()
}

fn decide_cmd(value: &str, transcript: bool, cx: &mut Ctx) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    let r = parse_rat(value)?;
    let (decision, nodes, canonical) = match cx.cfg.mode {
        Mode::Complete => {
            let out = if transcript {
                let err = &mut *cx.err;
                let mut sink = |l: &TraceLine| {
                    let _ = writeln!(err, "{l}");
                };
                search_with(&r, &cx.cfg, &mut sink)
            } else {
                search(&r, &cx.cfg)
            };
            (out.decision, out.nodes, Some(out.canonical))
        }
        Mode::Heuristic => {
            let (d, n) = crate::decider::decide_counted(&r, &cx.cfg);
            (d, n, None)
        }
    };
    let cert = match &decision {
        Decision::Member(c) => Some(Certificate::Wooley(c.clone())),
        _ => None,
    };
    if cx.json {
        let v = json!({
            "verdict": decision.verdict_str(),
            "cert": cert.as_ref().map(|c| CertJson::new(&r, c)),
            "nodes": nodes,
            "canonical": canonical,
        });
        writeln!(cx.out, "{v}").map_err(io)?;
    } else {
        writeln!(cx.out, "{}", decision.verdict_str()).map_err(io)?;
        if let Some(c) = &cert {
            writeln!(cx.out, "{}", serialize(&r, c)).map_err(io)?;
        }
        if decision.is_undecided() {
            writeln!(cx.err, "budget of {} nodes exhausted", cx.cfg.node_budget).map_err(io)?;
        }
    }
    Ok(if decision.is_undecided() { EXIT_UNDECIDED } else { EXIT_OK })
}

fn verify_cmd(file: &PathBuf, cx: &mut Ctx) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("{}: {e}", file.display()));
    let text = std::fs::read_to_string(file).map_err(io)?;
    let (mut checked, mut good) = (0usize, 0usize);
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        checked += 1;
        let parsed = if line.starts_with('{') {
            from_json(line).map(|(t, c)| (Some(t), c))
        } else {
            parse(line).map(|p| (p.target, p.cert))
        };
        let (status, ok) = match parsed {
            Err(e) => (format!("error: {e}"), false),
            Ok((Some(t), c)) => {
                let v = c.value();
                if v == t {
                    (format!("ok {}", t.to_human()), true)
                } else {
                    (format!("mismatch: claims {} but evaluates to {}", t.to_human(), v.to_human()), false)
                }
            }
            Ok((None, c)) => (format!("value {}", c.value().to_human()), true),
        };
        good += ok as usize;
        if cx.json {
            writeln!(cx.out, "{}", json!({ "line": i + 1, "ok": ok, "status": status })).map_err(io)?;
        } else {
            writeln!(cx.out, "line {}: {status}", i + 1).map_err(io)?;
        }
    }
    if !cx.json {
        writeln!(cx.out, "{good}/{checked} verified").map_err(io)?;
    }
    Ok(if good == checked { EXIT_OK } else { EXIT_ERROR })
}

fn table1_cmd(cx: &mut Ctx) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    let rows = builtin_table1();
    let mut good = 0;
    for row in &rows {
        let ok = row.cert.value() == row.target;
        good += ok as usize;
        let c = Certificate::Wooley(row.cert.clone());
        if cx.json {
            let v = json!({
                "label": row.label(),
                "verified": ok,
                "cert": CertJson::new(&row.target, &c),
            });
            writeln!(cx.out, "{v}").map_err(io)?;
        } else {
            let mark = if ok { "ok" } else { "FAILED" };
            writeln!(cx.out, "{} {mark}: {}", row.label(), serialize(&row.target, &c)).map_err(io)?;
        }
    }
    if !cx.json {
        writeln!(cx.out, "{good}/{} verified", rows.len()).map_err(io)?;
    }
    Ok(if good == rows.len() { EXIT_OK } else { EXIT_ERROR })
}

fn ep_cmd(p: u64, max_exp: u32, cx: &mut Ctx) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    let e = min_two_exponent(p, max_exp, &cx.cfg)?;
    let (text, v, code) = match &e {
        TwoExponent::Exact(j) => (format!("e({p}) = {j}"), json!({ "p": p, "e": j, "exact": true }), EXIT_OK),
        TwoExponent::UpperBound(j) => (
            format!("e({p}) ≤ {j} (a smaller exponent was undecided)"),
            json!({ "p": p, "e": j, "exact": false }),
            EXIT_UNDECIDED,
        ),
        TwoExponent::NotFound { undecided } if undecided.is_empty() => (
            format!("e({p}) > {max_exp}"),
            json!({ "p": p, "e": null, "exceeds": max_exp }),
            EXIT_OK,
        ),
        TwoExponent::NotFound { undecided } => (
            format!("undecided: no certificate up to {max_exp}, budget exhausted at e = {undecided:?}"),
            json!({ "p": p, "e": null, "undecided": undecided }),
            EXIT_UNDECIDED,
        ),
    };
    if cx.json {
        writeln!(cx.out, "{v}").map_err(io)?;
    } else {
        writeln!(cx.out, "{text}").map_err(io)?;
    }
    Ok(code)
}

fn nonfree_cmd(cx: &mut Ctx) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    let r = nonfree_witness(&cx.cfg);
    let c = Certificate::Wooley(r.cert.clone());
    let probes = |ps: &[(u32, Verdict)]| -> Vec<serde_json::Value> {
        ps.iter().map(|(a, v)| json!({ "a": a, "verdict": v.as_str() })).collect()
    };
    if cx.json {
        let v = json!({
            "cert": CertJson::new(&r.target, &c),
            "verified": r.verified,
            "probes_31": probes(&r.probes_31),
            "probes_41": probes(&r.probes_41),
            "obstructed": r.obstructed,
        });
        writeln!(cx.out, "{v}").map_err(io)?;
    } else {
        writeln!(cx.out, "{}", serialize(&r.target, &c)).map_err(io)?;
        writeln!(cx.out, "verified: {}", r.verified).map_err(io)?;
        for (p, ps) in [(31, &r.probes_31), (41, &r.probes_41)] {
            for (a, v) in ps {
                writeln!(cx.out, "2^{a}·{p}: {}", v.as_str()).map_err(io)?;
            }
        }
        let o = match r.obstructed {
            Some(true) => "yes",
            Some(false) => "no",
            None => "undecided",
        };
        writeln!(cx.out, "split into a 31-part and a 41-part: {o}").map_err(io)?;
    }
    Ok(if !r.verified {
        EXIT_ERROR
    } else if r.obstructed.is_none() {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    })
}
