//! Exact rational arithmetic helpers shared across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number used for every cost, capacity, and flow amount.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion from a finite `f64` (every finite float is a rational).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Nearest `f64` for reporting; exact when the value originated from a float.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Compact exact rendering: integers as `n`, everything else as `n/d`.
pub fn display(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n`, `n/d`, or a decimal literal into an exact rational.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    // Decimal literal: a.b with exact base-10 scaling.
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_val: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac_val: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(frac_val, scale);
        let whole = Rational::from_integer(int_val.abs());
        let abs = whole + frac;
        return Some(if negative { -abs } else { abs });
    }
    None
}
