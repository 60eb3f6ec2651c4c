//! Exact rational scalars and the extended nonnegative reals used for distances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{bail, Error, Result};

/// Arbitrary-precision rational number.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-3/2"` or `"0.25"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if d.is_zero() {
            bail!(Parse, "{s:?}: zero denominator");
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        // Decimal literals are read exactly, never through a float.
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let n = BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n = BigInt::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Q::from_integer(n))
}

pub fn format_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// A nonnegative rational or infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Q),
    Infinite,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Q::zero())
    }

    pub fn int(n: i64) -> Self {
        ExtRational::Finite(qi(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExtRational::Finite(q(n, d))
    }

    /// Rejects negative values.
    pub fn finite(v: Q) -> Result<Self> {
        if v.is_negative() {
            bail!(Invalid, "negative distance {}", format_q(&v));
        }
        Ok(ExtRational::Finite(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(v) if v.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Q> {
        match self {
            ExtRational::Finite(v) => Some(v),
            ExtRational::Infinite => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Add for &ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinite,
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: ExtRational) -> ExtRational {
        &self + &rhs
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinite) => Ordering::Less,
            (ExtRational::Infinite, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinite, ExtRational::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(v) => f.write_str(&format_q(v)),
            ExtRational::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(ExtRational::Infinite),
            other => ExtRational::finite(parse_q(other)?),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter that writes a rational as its `"p/q"` string.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub fn sum<'a>(it: impl IntoIterator<Item = &'a Q>) -> Q {
    it.into_iter().fold(Q::zero(), |acc, v| acc + v)
}

pub fn is_one(v: &Q) -> bool {
    v.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_decimal_and_integer() {
        assert_eq!(parse_q("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_q("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn ext_rational_arithmetic() {
        let inf = ExtRational::Infinite;
        let one = ExtRational::int(1);
        assert_eq!(&one + &inf, ExtRational::Infinite);
        assert!(one < inf);
        assert_eq!(one.clone().min(inf), one);
        assert_eq!("inf".parse::<ExtRational>().unwrap(), ExtRational::Infinite);
        assert_eq!("3/6".parse::<ExtRational>().unwrap(), ExtRational::ratio(1, 2));
        assert!("-1".parse::<ExtRational>().is_err());
        assert_eq!(ExtRational::ratio(3, 2).to_string(), "3/2");
    }
}
