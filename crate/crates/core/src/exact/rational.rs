//! Exact rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps every value
//! normalized (positive denominator, coprime parts). This module adds the few
//! conversions the rest of the crate needs: strict parsing of `p/q` literals,
//! exact decimal parsing for tolerances, powers, and rational square-root
//! enclosures.

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("`{0}` is not an integer or p/q rational")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` is not a decimal number")]
    NotDecimal(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an integer literal or a `p/q` fraction. Floating-point syntax is
/// rejected so exact suites never see a rounded parameter.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid_int = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) || !valid_int(den, false) {
        return Err(ParseRationalError::Malformed(t.to_string()));
    }
    let n = BigInt::from_str(num).map_err(|_| ParseRationalError::Malformed(t.to_string()))?;
    let d = BigInt::from_str(den).map_err(|_| ParseRationalError::Malformed(t.to_string()))?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(t.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Parses a decimal literal such as `1e-9` or `0.125` into its exact rational
/// value. Also accepts everything [`parse_rational`] accepts.
pub fn parse_decimal(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    if let Ok(r) = parse_rational(t) {
        return Ok(r);
    }
    let err = || ParseRationalError::NotDecimal(t.to_string());
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| err())?);
    let scale = exponent - frac.len() as i32;
    value *= pow(&int(10), scale);
    Ok(if neg { -value } else { value })
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn pow(base: &Rational, exp: i32) -> Rational {
    let mut result = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio of two huge integers: scale down by bit length first.
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = (nb.max(db) - 1000).max(0) as usize;
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Rational enclosure `[lo, hi]` of `sqrt(value)` with `hi - lo = 2^-bits`.
/// `value` must be nonnegative.
pub fn sqrt_enclosure(value: &Rational, bits: u32) -> (Rational, Rational) {
    debug_assert!(!value.is_negative());
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (value.numer() * &scale) / value.denom();
    let root = scaled.sqrt();
    let den = BigInt::one() << bits as usize;
    let lo = Rational::new(root.clone(), den.clone());
    let hi = Rational::new(root + 1, den);
    (lo, hi)
}

pub fn sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
