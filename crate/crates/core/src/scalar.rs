//! Numeric abstraction shared by the exact and floating-point code paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Probability/cost arithmetic.
///
/// Implemented for `f64` (optimisation loops) and for exact rationals, where
/// equality tests are exact.
pub trait Scalar: Clone + PartialOrd + Num + Debug + Send + Sync {
    /// Whether two values agree: exactly for rationals, within `1e-12` for floats.
    fn approx_eq(&self, other: &Self) -> bool;

    fn to_f64(&self) -> f64;

    /// JSON form: rationals as `"num/den"` strings, floats as 12-significant-digit numbers.
    fn to_json(&self) -> Value;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_probability(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl Scalar for f64 {
    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        float_json(*self)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for BigRational {
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn to_json(&self) -> Value {
        Value::String(rational_string(self))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for Ratio<i64> {
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

/// `"num/den"`, always with an explicit denominator.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"`, a bare integer, or a finite decimal such as `0.75`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::input(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits == "-" || digits == "+" { format!("{digits}0") } else { digits };
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Best-effort conversion that survives numerators and denominators far
/// beyond the `f64` range.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb.max(db) - 1000;
    let scale = |v: &BigInt| -> f64 {
        if shift > 0 {
            (v >> shift as usize).to_f64().unwrap_or(0.0)
        } else {
            v.to_f64().unwrap_or(0.0)
        }
    };
    scale(q.numer()) / scale(q.denom())
}

/// Rounds to 12 significant digits, the precision of every emitted float.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// The exact rational in `[0, 1]` closest to how a user would read `x`:
/// the shortest decimal representation of the float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::input(format!("non-finite value {x}")));
    }
    parse_rational(&format!("{x}"))
}
