//! Helpers for exact rationals: text form and rationalization of floats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Parses `"a"` or `"a/b"` (optional sign, arbitrary size).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `"a"` for integers, `"a/b"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Greatest common divisor of the numerators of integer-valued rationals.
pub fn integer_content<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, r| acc.gcd(&r.numer().abs()))
}

/// Continued-fraction convergents of `x` with denominator at most `max_den`.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let h = a * h1 + h0;
        let k = a * k1 + k0;
        if k > max_den as i128 {
            break;
        }
        out.push((h, k));
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = y - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

/// Smallest-denominator convergent of `x` within `tol`, denominator bounded
/// by `max_den`.
pub fn best_rational(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    convergents(x, max_den)
        .into_iter()
        .find(|&(h, k)| (x - h as f64 / k as f64).abs() <= tol)
        .map(|(h, k)| Rational::new(h.into(), k.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational(" 7 ").unwrap(), from_int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Rational::new(4.into(), (-6).into())), "-2/3");
        assert_eq!(format_rational(&from_int(-5)), "-5");
    }

    #[test]
    fn convergents_recover_simple_fractions() {
        assert_eq!(best_rational(17.0 / 12.0, 1_000_000, 1e-12), Some(Rational::new(17.into(), 12.into())));
        assert_eq!(best_rational(-0.5, 10, 1e-12), Some(Rational::new((-1).into(), 2.into())));
        let pi = best_rational(std::f64::consts::PI, 1000, 1e-6).unwrap();
        assert_eq!(pi, Rational::new(355.into(), 113.into()));
        assert_eq!(best_rational(std::f64::consts::PI, 100, 1e-9), None);
    }
}
