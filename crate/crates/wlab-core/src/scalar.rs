//! Scalar fields for forms: exact rationals and IEEE doubles.
//!
//! A form is homogeneous in its scalar kind. Converting exact data to
//! floating point is always an explicit call ([`Scalar::to_f64`] or
//! `KForm::to_float`); there is no implicit promotion.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Which scalar field a form lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Float,
}

impl Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => f.write_str("rational"),
            ScalarKind::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn abs(&self) -> Self;

    /// Parse a literal: integers, `p/q`, and decimals (with optional exponent).
    /// Rationals parse decimals exactly.
    fn parse_literal(text: &str) -> Result<Self>;

    /// Canonical text used by the expression printer.
    fn to_literal(&self) -> String;

    fn is_negative(&self) -> bool;

    /// Wire representation inside the JSON form format.
    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Result<Self>;

    fn half(&self) -> Self {
        self.clone() * Self::from_ratio(1, 2)
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 handles huge numerators/denominators correctly.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn to_literal(&self) -> String {
        rational_to_string(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rational_to_string(self))
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) if n.is_i64() => Ok(Self::from_i64(n.as_i64().unwrap())),
            other => Err(Error::Json(format!(
                "rational coefficient must be a \"p/q\" string, got {other}"
            ))),
        }
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / *self)
        }
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        if let Some((p, q)) = text.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| bad_literal(text))?;
            let q: f64 = q.trim().parse().map_err(|_| bad_literal(text))?;
            if q == 0.0 {
                return Err(bad_literal(text));
            }
            return Ok(p / q);
        }
        text.trim().parse().map_err(|_| bad_literal(text))
    }

    fn to_literal(&self) -> String {
        // Display for f64 is the shortest string that round-trips.
        format!("{self}")
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Json(format!("float coefficient must be a number, got {v}")))
    }
}

fn bad_literal(text: &str) -> Error {
    Error::Parse {
        offset: 0,
        message: format!("invalid numeric literal `{text}`"),
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q`, or an exact decimal such as `-1.25e-3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad_literal(text))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad_literal(text))?;
        if q.is_zero() {
            return Err(bad_literal(text));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = BigInt::from_str(t) {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(t).ok_or_else(|| bad_literal(text))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Exact factorial.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
