//! Exact rational plumbing.
//!
//! Every probability, posterior and threshold in the crate is a
//! [`Rational`]. Parameters arrive as decimal strings and are converted
//! without passing through binary floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds `num/den` from machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses a decimal literal such as `"0.3"`, `"-1.25"`, `"1e-3"` or a
/// fraction `"3/10"` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse(format!("empty number `{text}`")));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{text}`")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{text}`")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{text}`")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(Error::Parse(format!("no digits in `{text}`")));
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal number: `{text}`")));
    }
    let all_digits = format!("{whole}{frac}");
    let mut num: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().expect("digits checked above")
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Renders `value` with exactly `places` digits after the decimal point,
/// rounding half away from zero.
pub fn to_decimal_string(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value * Rational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r.abs() * 2;
    let mut q = q;
    if twice >= *scaled.denom() {
        if scaled.is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    let negative = q.sign() == Sign::Minus;
    let digits = q.abs().to_string();
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// `num/den` form, as used in CSV fraction columns.
pub fn to_fraction_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Converts a finite `f64` to the exact rational it denotes.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Ratio `P(Z=1|·) / P(Z=0|·)`; infinite when the disease is certain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LikelihoodRatio {
    Finite(Rational),
    Infinite,
}

impl LikelihoodRatio {
    /// Forms `num/den` from two non-negative masses. `den == 0` with
    /// `num > 0` is the infinite ratio; both zero is a caller bug.
    pub fn from_masses(num: Rational, den: Rational) -> Result<Self> {
        if den.is_zero() {
            if num.is_zero() {
                return Err(Error::NullEvent("both likelihood masses are zero".into()));
            }
            return Ok(LikelihoodRatio::Infinite);
        }
        Ok(LikelihoodRatio::Finite(num / den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LikelihoodRatio::Infinite)
    }

    /// Posterior `r / (1 + r)`, and `1` for the infinite ratio.
    pub fn posterior(&self) -> Rational {
        match self {
            LikelihoodRatio::Finite(r) => r / (Rational::one() + r),
            LikelihoodRatio::Infinite => Rational::one(),
        }
    }

    /// Diagnosis rule: positive iff posterior >= 1/2, i.e. ratio >= 1.
    pub fn at_least_one(&self) -> bool {
        match self {
            LikelihoodRatio::Finite(r) => *r >= Rational::one(),
            LikelihoodRatio::Infinite => true,
        }
    }

    pub fn cmp_one(&self) -> Ordering {
        match self {
            LikelihoodRatio::Finite(r) => r.cmp(&Rational::one()),
            LikelihoodRatio::Infinite => Ordering::Greater,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LikelihoodRatio::Finite(r) => Some(r),
            LikelihoodRatio::Infinite => None,
        }
    }
}

impl fmt::Display for LikelihoodRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LikelihoodRatio::Finite(r) => write!(f, "{r}"),
            LikelihoodRatio::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_decimal("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse_decimal("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_decimal("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_decimal("2.5E2").unwrap(), int(250));
        assert_eq!(parse_decimal(".5").unwrap(), half());
        assert_eq!(parse_decimal("3/10").unwrap(), ratio(3, 10));
        assert_eq!(parse_decimal(" 1 ").unwrap(), int(1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "0.3.1", "1/0", "-", "1e", "0x10"] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn renders_rounded_decimals() {
        assert_eq!(to_decimal_string(&ratio(63, 71), 12), "0.887323943662");
        assert_eq!(to_decimal_string(&ratio(111, 110), 12), "1.009090909091");
        assert_eq!(to_decimal_string(&ratio(1, 2), 0), "1");
        assert_eq!(to_decimal_string(&ratio(-1, 3), 4), "-0.3333");
        assert_eq!(to_decimal_string(&ratio(-2, 3), 2), "-0.67");
        assert_eq!(to_decimal_string(&int(0), 3), "0.000");
        assert_eq!(to_decimal_string(&ratio(1, 1000), 2), "0.00");
    }

    #[test]
    fn infinite_ratio_is_certain_disease() {
        let r = LikelihoodRatio::from_masses(int(1), int(0)).unwrap();
        assert!(r.is_infinite());
        assert_eq!(r.posterior(), int(1));
        assert!(r.at_least_one());
        assert!(LikelihoodRatio::from_masses(int(0), int(0)).is_err());
        let one = LikelihoodRatio::from_masses(int(2), int(2)).unwrap();
        assert!(one.at_least_one());
        assert_eq!(one.posterior(), half());
    }

    proptest! {
        #[test]
        fn decimal_rendering_is_nearest(num in -10_000i64..10_000, den in 1i64..5_000, places in 0usize..14) {
            let v = ratio(num, den);
            let shown = parse_decimal(&to_decimal_string(&v, places)).unwrap();
            let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), places));
            prop_assert!((shown - &v).abs() * int(2) <= ulp);
        }

        #[test]
        fn fraction_strings_round_trip(num in -10_000i64..10_000, den in 1i64..5_000) {
            let v = ratio(num, den);
            prop_assert_eq!(parse_decimal(&to_fraction_string(&v)).unwrap(), v);
        }
    }
}
