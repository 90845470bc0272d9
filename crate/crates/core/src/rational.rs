//! Exact rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`: arbitrary precision, always
//! stored reduced with a positive denominator, so derived equality and
//! hashing agree on the reduced form. Its `Display` prints `p/q`, or `p` for
//! integers, which is the textual form used everywhere in this crate.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Builds `num/den`. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p`, `p/q` or `-p/q`; the result is reduced.
pub fn parse(text: &str) -> Option<Rational> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed != text {
        return None;
    }
    Rational::from_str(text).ok()
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

pub fn square(value: &Rational) -> Rational {
    value * value
}
