//! Exact rational scalars and their text form.
//!
//! Every measure, norm, and bound in this crate is a [`Rat`] (arbitrary
//! precision rational). Reports serialize rationals as `"p/q"` strings with
//! the denominator omitted when it is 1; floats never appear anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Renders a rational in reduced `"p/q"` form, omitting a denominator of 1.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::BadRational(s.to_string());
    let mut parts = s.trim().splitn(2, '/');
    let numer: Int = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let denom: Int = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => Int::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(numer, denom))
}

pub fn rat_from_ints(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(Int::from(p))
}

/// `n!` as an exact rational, used in the subdivision norm factor.
pub fn factorial(n: usize) -> Rat {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i as u64);
    }
    Rat::from_integer(acc)
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

/// Serde adapter: rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::{parse_rat, rat_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}
