//! Serialization helpers shared by the public data types.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; rationals are always written as `"n/d"` strings
//! (or `"n"` when integral).

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

use crate::Rational;

pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn serialize_bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&BigIntRepr(x))?;
    }
    seq.end()
}

struct BigIntRepr<'a>(&'a BigInt);

impl serde::Serialize for BigIntRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(self.0, s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntOrString {
    Int(i64),
    Str(String),
}

pub fn deserialize_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    match IntOrString::deserialize(d)? {
        IntOrString::Int(v) => Ok(BigInt::from(v)),
        IntOrString::Str(s) => s.trim().parse().map_err(serde::de::Error::custom),
    }
}

pub fn deserialize_bigint_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw: Vec<IntOrString> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|v| match v {
            IntOrString::Int(v) => Ok(BigInt::from(v)),
            IntOrString::Str(s) => s.trim().parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

/// Formats a rational as `n/d`, or `n` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n`, `n/d` or a plain decimal-free integer into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}
