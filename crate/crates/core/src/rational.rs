//! Exact rational numbers used for APL budgets and model coefficients.
//!
//! Targets such as `2.41`, `4/3` or `0.1` are parsed without going through
//! floating point so that feasibility comparisons stay exact.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = Ratio<i128>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("number `{0}` is out of range")]
    Overflow(String),
}

/// Parses `p/q`, a plain integer, or a decimal such as `-12.375` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim(), text)?;
        let den = parse_decimal(den.trim(), text)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(num / den);
    }
    parse_decimal(text, text)
}

fn parse_decimal(part: &str, whole: &str) -> Result<Rational, ParseRationalError> {
    let invalid = || ParseRationalError::Invalid(whole.to_string());
    let overflow = || ParseRationalError::Overflow(whole.to_string());
    let (negative, digits) = match part.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, part.strip_prefix('+').unwrap_or(part)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(invalid());
    }
    let mut numer: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i128::from(c as u8 - b'0')))
            .ok_or_else(overflow)?;
    }
    let denom = 10i128
        .checked_pow(u32::try_from(frac_part.len()).map_err(|_| overflow())?)
        .ok_or_else(overflow)?;
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact decimal expansion when the denominator has only factors 2 and 5.
pub fn terminating_decimal(value: &Rational) -> Option<String> {
    let mut den = *value.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(value.numer().to_string());
    }
    let scale = 10i128.checked_pow(places)?;
    let scaled = value.numer().checked_mul(scale / value.denom())?;
    let negative = scaled < 0;
    let digits = scaled.unsigned_abs().to_string();
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    Some(if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    })
}

/// `p/q` form, or just `p` for integers.
pub fn format_fraction(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
