//! Exact rational numbers and their textual form.
//!
//! Every payoff, probability and LP coefficient in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in reduced form with a
//! positive denominator. There is no floating-point path anywhere; all
//! comparisons are exact.
//!
//! The textual surface syntax is `"p/q"`, `"-p/q"` or a plain integer string
//! such as `"3"`. Serialization always emits the reduced canonical form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction. `BigRational` guarantees the stored
/// invariants: gcd(|numerator|, denominator) = 1 and denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair. Panics on a zero
/// denominator, so it is meant for literals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse the `"p/q"` / `"-p/q"` / `"n"` surface syntax.
///
/// The numerator may carry a single leading minus sign; the denominator must
/// be a positive integer. Unreduced inputs such as `"2/4"` are accepted and
/// normalized; `"1/0"`, embedded whitespace and empty parts are errors.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |reason: &str| Error::InvalidRational {
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num_str, true).ok_or_else(|| err("numerator is not an integer"))?;
    let den = match den_str {
        Some(d) => {
            parse_int(d, false).ok_or_else(|| err("denominator is not a positive integer"))?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("denominator is zero"));
    }
    if den.is_negative() {
        return Err(err("denominator must be positive"));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v: BigInt = digits.parse().ok()?;
    Some(if s.starts_with('-') { -v } else { v })
}

/// Canonical textual form: `"p/q"` for non-integers, `"n"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-0").unwrap(), int(0));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["1/0", "1/-2", "", "/2", "1/", "a", "1.5", " 1", "1 ", "--1", "+1", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&rat(1, 2)), "1/2");
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn round_trips() {
        for s in ["0", "1", "-1", "1/2", "-22/7", "1000000000000000000000/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }
}
