//! Working precision, certified enclosures and exact literal parsing.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Default MPFR working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Extra bits carried by derived evaluations (transforms, accumulations).
pub const GUARD_BITS: u32 = 32;

/// Relative slack, in bits below the working precision, granted to values
/// that are only available with round-to-nearest.
pub const ENCLOSURE_SLACK_BITS: u32 = 24;

/// A closed interval `[lo, hi]` known to contain a real value.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: Float,
    pub hi: Float,
}

impl Enclosure {
    pub fn exact(value: Float) -> Self {
        Enclosure {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    /// Widens a round-to-nearest value by a relative radius of
    /// `2^-(prec - ENCLOSURE_SLACK_BITS)`.
    pub fn around(value: Float) -> Self {
        let prec = value.prec();
        if value.is_zero() {
            return Enclosure::exact(value);
        }
        let shift = prec.saturating_sub(ENCLOSURE_SLACK_BITS).max(1);
        let radius = Float::with_val(prec, value.abs_ref()) >> shift;
        let lo = Float::with_val_round(prec, &value - &radius, Round::Down).0;
        let hi = Float::with_val_round(prec, &value + &radius, Round::Up).0;
        Enclosure { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Float {
        let prec = self.lo.prec().max(self.hi.prec());
        Float::with_val(prec, &self.lo + &self.hi) / 2u32
    }

    /// Scales both endpoints by a positive integer with outward rounding.
    pub fn scale(&self, factor: u32) -> Enclosure {
        let prec = self.lo.prec();
        Enclosure {
            lo: Float::with_val_round(prec, &self.lo * factor, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi * factor, Round::Up).0,
        }
    }

    /// Divides both endpoints by a positive integer with outward rounding.
    pub fn div(&self, divisor: u32) -> Enclosure {
        let prec = self.lo.prec();
        Enclosure {
            lo: Float::with_val_round(prec, &self.lo / divisor, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi / divisor, Round::Up).0,
        }
    }

    /// Position of the exact integer `n` relative to the enclosed value:
    /// `Some(Greater)` when `n` certainly exceeds it, `Some(Less)` when `n` is
    /// certainly smaller, `Some(Equal)` for an exact tie, `None` otherwise.
    pub fn locate_integer(&self, n: &Integer) -> Option<Ordering> {
        if *n > self.hi {
            Some(Ordering::Greater)
        } else if *n < self.lo {
            Some(Ordering::Less)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Same as [`Enclosure::locate_integer`] for an exact rational.
    pub fn locate_rational(&self, r: &Rational) -> Option<Ordering> {
        if *r > self.hi {
            Some(Ordering::Greater)
        } else if *r < self.lo {
            Some(Ordering::Less)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

pub fn float_from_rational(value: &Rational, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, value, round).0
}

pub fn float_from_integer(value: &Integer, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, value, round).0
}

/// Natural logarithm of a positive integer with directed rounding.
pub fn ln_integer(value: &Integer, prec: u32, round: Round) -> Float {
    let mut x = float_from_integer(value, prec, round);
    x.ln_round(round);
    x
}

/// `log2` of a positive integer as an `f64`, valid far beyond `f64` range.
pub fn log2_integer(value: &Integer) -> f64 {
    let (mantissa, exp) = value.to_f64_exp();
    mantissa.log2() + f64::from(exp)
}

/// `log2` of a positive MPFR value as an `f64`.
pub fn log2_float(value: &Float) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mantissa, exp) = value.to_f64_exp();
    mantissa.abs().log2() + f64::from(exp)
}

/// Parses an exact decimal or fractional literal: `-12`, `0.125`, `3e-4`,
/// `1.5E+2`, `22/7`.
pub fn parse_exact(input: &str) -> Result<Rational> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::parse("number", input, "empty literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_exact_decimal(num.trim(), input)?;
        let den = parse_exact_decimal(den.trim(), input)?;
        if den == 0 {
            return Err(Error::parse("number", input, "zero denominator"));
        }
        return Ok(num / den);
    }
    parse_exact_decimal(s, input)
}

/// Largest decimal exponent accepted by [`parse_exact`]; keeps hostile
/// literals such as `1e999999999` from allocating huge integers.
pub const MAX_DECIMAL_EXPONENT: i64 = 10_000;

fn parse_exact_decimal(s: &str, original: &str) -> Result<Rational> {
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_str = &body[pos + 1..];
            let exp: i64 = exp_str
                .parse()
                .map_err(|_| Error::parse("number", original, "malformed exponent"))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::parse("number", original, "no digits"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse("number", original, "unexpected character"));
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0" } else { digits.as_str() };
    let frac_len = i64::try_from(frac_part.len())
        .map_err(|_| Error::parse("number", original, "literal too long"))?;
    let scale = exponent - frac_len;
    if scale.abs() > MAX_DECIMAL_EXPONENT + frac_len {
        return Err(Error::parse("number", original, "exponent out of range"));
    }
    let mut value = Rational::from(
        Integer::from_str_radix(digits, 10)
            .map_err(|_| Error::parse("number", original, "malformed digits"))?,
    );
    let power = Integer::from(10u32).pow(scale.unsigned_abs() as u32);
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Number of fractional decimal digits written in a literal, used to derive
/// the implied half-ulp error radius of decimal inputs.
pub fn decimal_places(input: &str) -> Option<u32> {
    let s = input.trim();
    if s.contains(['e', 'E', '/']) {
        return None;
    }
    let frac = s.split_once('.').map(|(_, f)| f).unwrap_or("");
    u32::try_from(frac.len()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_exact("0.125").unwrap(), Rational::from((1, 8)));
        assert_eq!(parse_exact("-3e-2").unwrap(), Rational::from((-3, 100)));
        assert_eq!(parse_exact("22/7").unwrap(), Rational::from((22, 7)));
        assert_eq!(parse_exact("1.5E+2").unwrap(), Rational::from(150));
        assert_eq!(parse_exact(".5").unwrap(), Rational::from((1, 2)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1e", "--1", "1.2.3", "1e99999999", "."] {
            assert!(parse_exact(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn enclosure_locates_integers() {
        let e = Enclosure::exact(Float::with_val(64, 3));
        assert_eq!(e.locate_integer(&Integer::from(3)), Some(Ordering::Equal));
        assert_eq!(e.locate_integer(&Integer::from(4)), Some(Ordering::Greater));
        let wide = Enclosure::around(Float::with_val(64, 3));
        assert_eq!(wide.locate_integer(&Integer::from(3)), None);
        assert_eq!(wide.locate_integer(&Integer::from(2)), Some(Ordering::Less));
    }

    #[test]
    fn log2_of_huge_integer() {
        let big = Integer::from(1) << 5000u32;
        assert!((log2_integer(&big) - 5000.0).abs() < 1e-9);
    }
}
