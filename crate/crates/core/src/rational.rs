//! Exact rational values and their string encoding (`"p/q"` or an integer).

use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = Ratio<i64>;

pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err("empty rational".to_string());
    }
    let value = Rational::from_str(trimmed).map_err(|_| format!("malformed rational {text:?}"))?;
    Ok(value)
}

pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// Serde adapter storing a rational as a string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
