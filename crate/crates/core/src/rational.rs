//! Helpers for exact rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn from_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_biguint_ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num.clone()),
        BigInt::from_biguint(Sign::Plus, den.clone()),
    )
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `floor(n * alpha)` for a nonnegative rational `alpha`.
pub fn floor_mul(n: u64, alpha: &BigRational) -> Result<u64> {
    let v = (alpha * BigInt::from(n)).floor().to_integer();
    v.to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("floor({n} * {alpha}) out of range")))
}

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r.abs() * &scale;
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer();
    let (int_part, frac_part) = rounded.div_mod_floor(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = digits
    )
}

/// Parses `a/b`, a decimal literal such as `1.41421356`, or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_s, frac_s) = body.split_once('.').unwrap_or((body, ""));
    if int_s.is_empty() && frac_s.is_empty() {
        return Err(bad());
    }
    if !int_s
        .chars()
        .chain(frac_s.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_s}{frac_s}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = BigInt::from(10u32).pow(frac_s.len() as u32);
    let v = BigRational::new(num, den);
    Ok(if neg { -v } else { v })
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidArgument(format!("non-finite number {x}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&from_ratio(1, 3), 12), "0.333333333333");
        assert_eq!(decimal_string(&from_ratio(2, 3), 12), "0.666666666667");
        assert_eq!(decimal_string(&from_ratio(55, 100), 4), "0.5500");
        assert_eq!(decimal_string(&-from_ratio(1, 8), 2), "-0.13");
        assert_eq!(decimal_string(&from_u64(3), 0), "3");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), from_ratio(3, 2));
        assert_eq!(
            parse_rational("1.41421356").unwrap(),
            from_ratio(141421356, 100000000)
        );
        assert_eq!(parse_rational("7").unwrap(), from_u64(7));
        assert_eq!(parse_rational("-0.5").unwrap(), -from_ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn floors() {
        let alpha = parse_rational("1.41421356").unwrap();
        assert_eq!(floor_mul(5, &alpha).unwrap(), 7);
        assert_eq!(floor_mul(0, &alpha).unwrap(), 0);
    }
}
