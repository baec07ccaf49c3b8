//! Exact rational scalars.
//!
//! Thin helpers around [`num::BigRational`]: parsing of `p/q` strings and a
//! canonical compact rendering. All coefficient arithmetic in this crate
//! goes through this type; nothing is ever rounded.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::str::FromStr;

/// The scalar field: arbitrary-precision rationals.
pub type Q = BigRational;

/// Build a rational from an integer.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Build a rational from a numerator/denominator pair.
///
/// # Panics
/// Panics if `den == 0`.
pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parse an exact rational from a `p` or `p/q` string.
///
/// Accepts optional leading `-` on the numerator; whitespace is not allowed.
///
/// ```
/// use crepant_core::rational::{parse_q, q_frac};
/// assert_eq!(parse_q("-3/2").unwrap(), q_frac(-3, 2));
/// assert_eq!(parse_q("7").unwrap(), q_frac(7, 1));
/// ```
pub fn parse_q(s: &str) -> Result<Q, String> {
    let parse_int = |t: &str| -> Result<BigInt, String> {
        BigInt::from_str(t).map_err(|e| format!("invalid integer `{t}`: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Q::new(parse_int(num)?, d))
        }
    }
}

/// Render a rational as `p` or `p/q` in lowest terms.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Render a rational as a leading coefficient of a symbolic term: `1`
/// becomes the empty string, `-1` becomes `-`, anything else gets a `*`
/// separator appended.
pub fn format_coeff_prefix(x: &Q) -> String {
    if x.is_one() {
        String::new()
    } else if (-x.clone()).is_one() {
        "-".to_string()
    } else {
        format!("{}*", format_q(x))
    }
}

/// Exact binomial coefficient `C(n, k)` as a rational.
pub fn binomial(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats_round_trip() {
        for s in ["0", "1", "-1", "3/2", "-7/5", "12345678901234567890/7"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a").is_err());
        assert!(parse_q("1 / 2").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn normalises_on_parse() {
        assert_eq!(parse_q("4/6").unwrap(), q_frac(2, 3));
        assert_eq!(format_q(&parse_q("-4/6").unwrap()), "-2/3");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), q_int(15));
        assert_eq!(binomial(4, 0), q_int(1));
        assert_eq!(binomial(3, 5), q_int(0));
        assert_eq!(binomial(10, 5), q_int(252));
    }
}
