//! Exact rational values: parsing and rendering.
//!
//! All numeric data in the engine is an exact `BigRational`; floats never
//! appear. Text forms accepted are integers (`2002`), decimals (`19.99`)
//! and explicit fractions (`p/q`), each with an optional leading minus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `2002`, `-3`, `19.99` or `p/q`. Returns `None` on malformed input.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((num, den)) = body.split_once('/') {
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Rat::new(num, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int: BigInt = int.parse().ok()?;
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        Rat::new(int * &scale + frac, scale)
    } else {
        let int: BigInt = body.parse().ok()?;
        Rat::from_integer(int)
    };
    Some(if neg { -value } else { value })
}

/// Renders exactly: integer when the denominator is one, `p/q` otherwise.
pub fn render_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact midpoint, used when building grid universes.
pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat_int(2)
}

pub fn is_positive(value: &Rat) -> bool {
    value.is_positive()
}
