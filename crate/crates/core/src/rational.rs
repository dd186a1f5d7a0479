//! Exact rational helpers shared by the statistics, scoring and reporting code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_u64(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses a plain decimal such as `0.95`, `1` or `.5` exactly.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut numer = BigInt::zero();
    for c in int_part.chars().chain(frac_part.chars()) {
        numer = numer * 10 + BigInt::from(c.to_digit(10)?);
    }
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Renders `value` rounded half away from zero to `places` decimals.
pub fn to_decimal_string(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let rest = scaled - Rational::from_integer(floor.clone());
    let rounded = if rest * BigInt::from(2) >= Rational::one() { floor + 1 } else { floor };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !(int_part.is_zero() && frac_part.is_zero()) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serialized form of a rational: the exact fraction plus a 6-decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactDecimal {
    pub exact: String,
    pub decimal: String,
}

impl From<&Rational> for ExactDecimal {
    fn from(value: &Rational) -> Self {
        ExactDecimal { exact: value.to_string(), decimal: to_decimal_string(value, 6) }
    }
}

/// `serialize_with` adapter writing a [`Rational`] as [`ExactDecimal`].
pub fn serialize_exact<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    ExactDecimal::from(value).serialize(serializer)
}

pub fn serialize_exact_opt<S: Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    value.as_ref().map(ExactDecimal::from).serialize(serializer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_decimal("0.9"), Some(ratio(9, 10)));
        assert_eq!(parse_decimal("0.95"), Some(ratio(19, 20)));
        assert_eq!(parse_decimal("1"), Some(ratio(1, 1)));
        assert_eq!(parse_decimal(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_decimal("-0.25"), Some(ratio(-1, 4)));
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1e3"), None);
    }

    #[test]
    fn renders_rounded_decimals() {
        assert_eq!(to_decimal_string(&ratio(2, 3), 6), "0.666667");
        assert_eq!(to_decimal_string(&ratio(1, 1), 6), "1.000000");
        assert_eq!(to_decimal_string(&ratio(0, 1), 3), "0.000");
        assert_eq!(to_decimal_string(&ratio(-1, 3), 2), "-0.33");
        assert_eq!(to_decimal_string(&ratio(1, 8), 2), "0.13");
    }
}
