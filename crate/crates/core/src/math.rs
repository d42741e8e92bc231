//! Exact integer and rational helpers shared by the enumeration code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// All probability masses and localities are carried as reduced big rationals.
pub type Rational = BigRational;

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `C(n, k)` as a machine integer, for sizes that are enumerated.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Falling factorial `a (a-1) ... (a-len+1)`; zero once a factor hits zero.
pub fn falling(a: u64, len: u64) -> BigInt {
    if len > a {
        return BigInt::zero();
    }
    (0..len).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i))
}

pub fn pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    BigRational::new(num.into(), den.into())
}

/// `"num/den"`; integers are still written with a denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"a/b"`, an integer, or a finite decimal such as `"0.1"`; all exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("not an exact rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn floor_to_int(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    debug_assert!(!rem.is_negative());
    q
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(6, 3), Some(20));
        assert_eq!(binomial_u64(4, 5), Some(0));
        assert_eq!(binomial(10, 5), BigInt::from(252));
        assert_eq!(binomial_u64(200, 100), None);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(3, 2), BigInt::from(6));
        assert_eq!(falling(3, 3), BigInt::from(6));
        assert_eq!(falling(3, 4), BigInt::zero());
        assert_eq!(falling(7, 0), BigInt::one());
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("16/31").unwrap(), ratio(16, 31));
        assert_eq!(parse_rational("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert_eq!(format_rational(&ratio(2, 14)), "1/7");
        assert_eq!(format_rational(&ratio(1, 1)), "1/1");
    }
}
