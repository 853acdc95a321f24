//! JSON form of a certificate. All integers are decimal strings.
//!
//! ```json
//! {"target": {"num": "20", "den": "1"}, "kind": "wooley",
//!  "factors": [{"n": "3", "e": "2"}, ...], "two_exponent": "0"}
//! ```

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{Certificate, Factor, InverseCert, WildCert, WooleyCert};
use crate::error::Error;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub n: String,
    pub e: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertJson {
    pub target: RatJson,
    pub kind: String,
    pub factors: Vec<FactorJson>,
    pub two_exponent: String,
}

impl CertJson {
    pub fn new(target: &Rat, cert: &Certificate) -> Self {
        let (factors, two): (&[Factor], String) = match cert {
            Certificate::Wooley(c) => (c.factors(), "0".into()),
            Certificate::Wild(c) => (
                c.wooley().map(WooleyCert::factors).unwrap_or(&[]),
                c.two_exponent().to_string(),
            ),
            Certificate::Inverse(c) => (c.inv_factors(), c.two_exponent().to_string()),
        };
        CertJson {
            target: RatJson {
                num: target.num().to_string(),
                den: target.den().to_string(),
            },
            kind: cert.kind().as_str().to_string(),
            factors: factors
                .iter()
                .map(|(n, e)| FactorJson {
                    n: n.to_string(),
                    e: e.to_string(),
                })
                .collect(),
            two_exponent: two,
        }
    }

    /// Rebuilds the target and certificate, normalizing the factor list.
    pub fn decode(&self) -> Result<(Rat, Certificate), Error> {
        let big = |s: &str, what: &str| -> Result<BigUint, Error> {
            s.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::Json(format!("{what}: `{s}` is not a nonnegative integer")))
        };
        let target = Rat::new(big(&self.target.num, "target.num")?, big(&self.target.den, "target.den")?)?;
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let e: u64 = f
                .e
                .trim()
                .parse()
                .map_err(|_| Error::Json(format!("exponent `{}` is not a u64", f.e)))?;
            factors.push((big(&f.n, "factor index")?, e));
        }
        let two: i64 = self
            .two_exponent
            .trim()
            .parse()
            .map_err(|_| Error::Json(format!("two_exponent `{}` is not an integer", self.two_exponent)))?;
        let cert = match self.kind.as_str() {
            "wooley" => {
                if two != 0 {
                    return Err(Error::Json("a wooley certificate has two_exponent 0".into()));
                }
                Certificate::Wooley(WooleyCert::new(factors)?)
            }
            "wild" => {
                let w = if factors.is_empty() {
                    None
                } else {
                    Some(WooleyCert::new(factors)?)
                };
                Certificate::Wild(WildCert::new(w, two)?)
            }
            "inverse" => {
                let k = u64::try_from(two)
                    .map_err(|_| Error::Json("inverse two_exponent must be nonnegative".into()))?;
                Certificate::Inverse(InverseCert::new(factors, k)?)
            }
            other => return Err(Error::Json(format!("unknown kind `{other}`"))),
        };
        Ok((target, cert))
    }
}

/// Serializes `cert` together with its claimed target.
pub fn to_json(target: &Rat, cert: &Certificate) -> String {
    serde_json::to_string(&CertJson::new(target, cert)).expect("plain strings serialize")
}

pub fn from_json(text: &str) -> Result<(Rat, Certificate), Error> {
    let j: CertJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    j.decode()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::parse;

    #[test]
    fn round_trip_all_kinds() {
        for line in [
            "20 = g(3)^2 * g(5) * g(8) * g(27) * g(32) * g(41)",
            "5 = 2^-2 * g(3)^2 * g(5) * g(8) * g(27) * g(32) * g(41)",
            "6 = 2^4 * ginv(1) * ginv(2)",
            "1/2 = 2^-1",
        ] {
            let p = parse(line).unwrap();
            let target = p.target.unwrap();
            let s = to_json(&target, &p.cert);
            let (t2, c2) = from_json(&s).unwrap();
            assert_eq!(t2, target);
            assert_eq!(c2, p.cert);
        }
    }

    #[test]
    fn schema_shape() {
        let p = parse("2 = g(0)").unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&p.target.unwrap(), &p.cert)).unwrap();
        assert_eq!(v["target"]["num"], "2");
        assert_eq!(v["target"]["den"], "1");
        assert_eq!(v["kind"], "wooley");
        assert_eq!(v["factors"][0]["n"], "0");
        assert_eq!(v["factors"][0]["e"], "1");
        assert_eq!(v["two_exponent"], "0");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_json("{}").is_err());
        let bad = r#"{"target":{"num":"2","den":"1"},"kind":"wooley","factors":[{"n":"0","e":"0"}],"two_exponent":"0"}"#;
        assert!(matches!(from_json(bad), Err(Error::ZeroExponent { .. })));
        let bad_kind = r#"{"target":{"num":"2","den":"1"},"kind":"x","factors":[],"two_exponent":"0"}"#;
        assert!(from_json(bad_kind).is_err());
    }
}
