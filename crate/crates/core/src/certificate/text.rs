//! Line-oriented certificate syntax.
//!
//! ```text
//! line    := target '=' factor ( '*' factor )*
//! target  := int | int '/' int | identifier
//! factor  := 'g' '(' int ')' [ '^' int ]        Wooley generator
//!          | 'ginv' '(' int ')' [ '^' int ]     inverse generator (2n+1)/(3n+2)
//!          | '2' [ '^' signed-int ]             power of two
//! ```
//!
//! Whitespace is free between tokens. A product of `g(·)` alone is a Wooley
//! certificate; a power of two makes it wild; any `ginv(·)` makes it an
//! inverse-semigroup certificate. An identifier target (e.g. `x`) names the
//! product without claiming a value.

use num_bigint::BigUint;

use super::{Certificate, Factor, InverseCert, WildCert, WooleyCert};
use crate::error::Error;
use crate::Rat;

/// A parsed line: the claimed target (if numeric) and the certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedCert {
    pub target: Option<Rat>,
    pub cert: Certificate,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.err(format!("expected `{}`, found `{}`", c as char, b as char))),
            None => Err(self.err(format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn digits(&mut self) -> Result<&'a str, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn uint(&mut self) -> Result<BigUint, Error> {
        let d = self.digits()?;
        Ok(d.parse().expect("ascii digits parse"))
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii word")
    }
}

fn parse_target(lx: &mut Lexer<'_>) -> Result<Option<Rat>, Error> {
    match lx.peek() {
        Some(b) if b.is_ascii_digit() => {
            let num = lx.uint()?;
            if lx.peek() == Some(b'/') {
                lx.pos += 1;
                let at = lx.pos;
                let den = lx.uint()?;
                return Rat::new(num, den)
                    .map(Some)
                    .map_err(|_| Error::Syntax {
                        pos: at,
                        msg: "zero denominator".into(),
                    });
            }
            Ok(Some(Rat::from_integer(num)))
        }
        Some(b) if b.is_ascii_alphabetic() => {
            lx.word();
            Ok(None)
        }
        _ => Err(lx.err("expected a target before `=`")),
    }
}

enum Term {
    Gen(BigUint, u64),
    Inv(BigUint, u64),
    Two(i64),
}

fn parse_exponent(lx: &mut Lexer<'_>, index: &BigUint, start: usize) -> Result<u64, Error> {
    if lx.peek() != Some(b'^') {
        return Ok(1);
    }
    lx.pos += 1;
    let at = lx.pos;
    let d = lx.digits()?;
    let e: u64 = d.parse().map_err(|_| Error::Syntax {
        pos: at,
        msg: "exponent out of range".into(),
    })?;
    if e == 0 {
        return Err(Error::ZeroExponent {
            index: index.to_string(),
            pos: start,
        });
    }
    Ok(e)
}

fn parse_term(lx: &mut Lexer<'_>) -> Result<Term, Error> {
    let start = {
        lx.skip_ws();
        lx.pos
    };
    match lx.peek() {
        Some(b'2') => {
            lx.digits().and_then(|d| {
                if d == "2" {
                    Ok(())
                } else {
                    Err(Error::Syntax {
                        pos: start,
                        msg: format!("bare integer factor `{d}`; only powers of 2 are allowed"),
                    })
                }
            })?;
            if lx.peek() != Some(b'^') {
                return Ok(Term::Two(1));
            }
            lx.pos += 1;
            let neg = if lx.peek() == Some(b'-') {
                lx.pos += 1;
                true
            } else {
                false
            };
            let at = lx.pos;
            let d = lx.digits()?;
            let k: i64 = d.parse().map_err(|_| Error::Syntax {
                pos: at,
                msg: "power of two out of range".into(),
            })?;
            Ok(Term::Two(if neg { -k } else { k }))
        }
        Some(b) if b.is_ascii_alphabetic() => {
            let w = lx.word();
            let inverse = match w {
                "g" => false,
                "ginv" => true,
                other => {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("unknown factor `{other}`"),
                    })
                }
            };
            lx.expect(b'(')?;
            let n = lx.uint()?;
            lx.expect(b')')?;
            let e = parse_exponent(lx, &n, start)?;
            Ok(if inverse { Term::Inv(n, e) } else { Term::Gen(n, e) })
        }
        Some(b) => Err(lx.err(format!("unexpected `{}`", b as char))),
        None => Err(lx.err("expected a factor, found end of input")),
    }
}

/// Parses one certificate line. Unsorted or repeated factors are normalized.
pub fn parse(text: &str) -> Result<ParsedCert, Error> {
    let mut lx = Lexer::new(text);
    let target = parse_target(&mut lx)?;
    lx.expect(b'=')?;
    let mut gens: Vec<Factor> = Vec::new();
    let mut invs: Vec<Factor> = Vec::new();
    let mut two: Option<i64> = None;
    loop {
        match parse_term(&mut lx)? {
            Term::Gen(n, e) => gens.push((n, e)),
            Term::Inv(n, e) => invs.push((n, e)),
            Term::Two(k) => *two.get_or_insert(0) += k,
        }
        match lx.peek() {
            Some(b'*') => lx.pos += 1,
            None => break,
            Some(_) => return Err(lx.err("expected `*` or end of input")),
        }
    }
    let cert = if !invs.is_empty() {
        if !gens.is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                msg: "cannot mix g(·) and ginv(·) factors".into(),
            });
        }
        let k = two.unwrap_or(0);
        if k < 0 {
            return Err(Error::Syntax {
                pos: 0,
                msg: "inverse certificates take a nonnegative power of 2".into(),
            });
        }
        Certificate::Inverse(InverseCert::new(invs, k as u64)?)
    } else if let Some(k) = two {
        let wooley = if gens.is_empty() {
            None
        } else {
            Some(WooleyCert::new(gens)?)
        };
        Certificate::Wild(WildCert::new(wooley, k)?)
    } else {
        Certificate::Wooley(WooleyCert::new(gens)?)
    };
    Ok(ParsedCert { target, cert })
}

fn push_factors(out: &mut Vec<String>, name: &str, factors: &[Factor]) {
    for (n, e) in factors {
        if *e == 1 {
            out.push(format!("{name}({n})"));
        } else {
            out.push(format!("{name}({n})^{e}"));
        }
    }
}

/// Renders `target = factor * factor * …` with factors in increasing index
/// order.
pub fn serialize(target: &Rat, cert: &Certificate) -> String {
    let mut parts = Vec::new();
    match cert {
        Certificate::Wooley(c) => push_factors(&mut parts, "g", c.factors()),
        Certificate::Wild(c) => {
            parts.push(format!("2^{}", c.two_exponent()));
            if let Some(w) = c.wooley() {
                push_factors(&mut parts, "g", w.factors());
            }
        }
        Certificate::Inverse(c) => {
            if c.two_exponent() > 0 {
                parts.push(format!("2^{}", c.two_exponent()));
            }
            push_factors(&mut parts, "ginv", c.inv_factors());
        }
    }
    format!("{} = {}", target.to_human(), parts.join(" * "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::cert_value;

    fn int(v: u64) -> Rat {
        Rat::from_integer(BigUint::from(v))
    }

    #[test]
    fn example_twenty() {
        let p = parse("20 = g(3)^2 * g(5) * g(8) * g(27) * g(32) * g(41)").unwrap();
        assert_eq!(p.target, Some(int(20)));
        assert_eq!(cert_value(&p.cert), int(20));
        match &p.cert {
            Certificate::Wooley(c) => assert_eq!(c.factor_count(), 7),
            other => panic!("wrong kind {other:?}"),
        }
    }

    #[test]
    fn single_generator() {
        let p = parse("2 = g(0)").unwrap();
        assert_eq!(
            p.cert,
            Certificate::Wooley(WooleyCert::from_indices([0u32]).unwrap())
        );
    }

    #[test]
    fn zero_exponent_rejected() {
        match parse("x = g(3)^0") {
            Err(Error::ZeroExponent { index, .. }) => assert_eq!(index, "3"),
            other => panic!("expected zero exponent error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("20 = g(3) + g(5)") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("20 = g(3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("= g(3)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("20 = h(3)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("20 = 3^2"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn duplicates_normalized() {
        let a = parse("44 = g(3) * g(132) * g(3) * g(8) * g(11) * g(71) * g(99) * g(107) * g(123)")
            .unwrap();
        let b = parse("44 = g(3)^2 * g(8) * g(11) * g(71) * g(99) * g(107) * g(123) * g(132)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wild_and_inverse_forms() {
        let w = parse("5 = 2^-2 * g(3)^2 * g(5) * g(8) * g(27) * g(32) * g(41)").unwrap();
        assert!(matches!(w.cert, Certificate::Wild(_)));
        assert_eq!(cert_value(&w.cert), int(5));
        let i = parse("5 = 2^3 * ginv(2)").unwrap();
        assert!(matches!(i.cert, Certificate::Inverse(_)));
        assert_eq!(cert_value(&i.cert), int(5));
        assert_eq!(serialize(&int(5), &i.cert), "5 = 2^3 * ginv(2)");
        assert!(parse("5 = ginv(2) * g(3)").is_err());
        assert!(parse("5 = 2^-1 * ginv(2)").is_err());
    }

    #[test]
    fn rational_target() {
        let p = parse("2144/185 = g(29) * g(44) * g(69) * g(78) * g(92) * g(104)").unwrap();
        assert_eq!(p.target.unwrap(), cert_value(&p.cert));
    }
}
