//! Exact rational helpers shared by every module.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(num: i64) -> Q {
    Q::from_integer(BigInt::from(num))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Formats as `p/q` in lowest terms, or as a bare integer when the
/// denominator is one.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.25`.
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        let whole = BigInt::from_str(int_digits).ok()?;
        let frac = BigInt::from_str(frac_part).ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let magnitude = Q::new(whole * &scale + frac, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(text).ok().map(Q::from_integer)
}

/// Decimal rendering rounded half-to-even at `places` digits. Display only.
pub fn decimal_half_even(value: &Q, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.abs() * Q::from_integer(scale.clone());
    let (floor, rem) = scaled.numer().div_rem(scaled.denom());
    let twice_rem: BigInt = rem * BigInt::from(2);
    let rounded = match twice_rem.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    };
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
