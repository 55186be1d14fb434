//! Exact rational scalars used everywhere a value from a game or a matching
//! appears. All arithmetic is arbitrary precision; nothing in the exact layer
//! ever rounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `num/den`, denominator always explicit (`3` -> `3/1`).
/// This is the on-disk form for correlation and witness files.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// True iff `r` lies in `[0, 1]`.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Nearest double; for comparing exact values against numeric tolerances.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("finite rational")
}
