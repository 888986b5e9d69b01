//! Exact rational scalars used throughout the crate.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number with machine-word numerator and denominator.
pub type Rational = Ratio<i64>;

/// Largest absolute numerator or denominator accepted from user input.
///
/// Keeps sums of up to thirteen entries on a common denominator well inside `i64`.
pub const MAX_COMPONENT: i64 = 1 << 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseValueError {
    #[error("empty value")]
    Empty,
    #[error("`{0}` is not an integer or p/q rational")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` exceeds the supported magnitude (|p|, |q| <= 2^30)")]
    TooLarge(String),
}

/// Parse `p`, `-p`, `p/q` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseValueError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseValueError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| ParseValueError::Malformed(s.to_string()))?;
    let d: i64 = den
        .parse()
        .map_err(|_| ParseValueError::Malformed(s.to_string()))?;
    if d == 0 {
        return Err(ParseValueError::ZeroDenominator(s.to_string()));
    }
    if n.abs() > MAX_COMPONENT || d.abs() > MAX_COMPONENT {
        return Err(ParseValueError::TooLarge(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of the min-plus semiring: a finite exact rational.
///
/// Tropical addition is `min`, tropical multiplication is ordinary `+`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TropValue(pub Rational);

impl TropValue {
    pub const ZERO: TropValue = TropValue(Ratio::new_raw(0, 1));

    pub fn new(r: Rational) -> Self {
        TropValue(r)
    }

    pub fn int(v: i64) -> Self {
        TropValue(Rational::from_integer(v))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        TropValue(Rational::new(n, d))
    }

    pub fn rational(&self) -> Rational {
        self.0
    }

    /// Tropical sum.
    pub fn oplus(self, other: Self) -> Self {
        self.min(other)
    }

    /// Tropical product.
    pub fn otimes(self, other: Self) -> Self {
        TropValue(self.0 + other.0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Display for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for TropValue {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(TropValue)
    }
}

impl From<i64> for TropValue {
    fn from(v: i64) -> Self {
        TropValue::int(v)
    }
}

impl From<Rational> for TropValue {
    fn from(r: Rational) -> Self {
        TropValue(r)
    }
}

impl std::ops::Add for TropValue {
    type Output = TropValue;
    fn add(self, rhs: Self) -> Self {
        TropValue(self.0 + rhs.0)
    }
}

impl std::ops::Sub for TropValue {
    type Output = TropValue;
    fn sub(self, rhs: Self) -> Self {
        TropValue(self.0 - rhs.0)
    }
}

impl std::ops::Neg for TropValue {
    type Output = TropValue;
    fn neg(self) -> Self {
        TropValue(-self.0)
    }
}

impl Serialize for TropValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for TropValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        deserialize_rational(d).map(TropValue)
    }
}

/// Accepts either a JSON integer or a `"p/q"` string.
pub fn deserialize_rational<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(v) => {
            if v.abs() > MAX_COMPONENT {
                Err(serde::de::Error::custom(ParseValueError::TooLarge(
                    v.to_string(),
                )))
            } else {
                Ok(Rational::from_integer(v))
            }
        }
        Raw::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom),
    }
}

/// Serde adapter for bare `Rational` fields.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        deserialize_rational(d)
    }
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values.into_iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), Rational::new(-3, 2));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseValueError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("x"),
            Err(ParseValueError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("99999999999"),
            Err(ParseValueError::TooLarge(_))
        ));
    }

    #[test]
    fn semiring_operations() {
        let a = TropValue::int(2);
        let b = TropValue::frac(1, 2);
        assert_eq!(a.oplus(b), b);
        assert_eq!(a.otimes(b), TropValue::frac(5, 2));
        assert_eq!(format!("{}", TropValue::frac(-3, 6)), "-1/2");
    }
}
