use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::rational::{common_denominator, integer_content};
use super::Poly;
use crate::error::{Error, Result};
use crate::{QPoly, Rational};

/// Reduced quotient of rational polynomials. The denominator has integer
/// coefficients with content one and a positive leading coefficient, so
/// equal functions have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: QPoly::one(),
            });
        }
        let g = Poly::gcd(&num, &den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let l = Rational::from_integer(common_denominator(den.coeffs()));
        let scaled = den.scale(&l);
        let mut c = l / Rational::from_integer(integer_content(scaled.coeffs()));
        if den.lead().expect("non-zero").is_negative() {
            c = -c;
        }
        Ok(RatFunc {
            num: num.scale(&c),
            den: den.scale(&c),
        })
    }

    pub fn from_poly(p: QPoly) -> Self {
        Self::new(p, QPoly::one()).expect("non-zero denominator")
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn into_parts(self) -> (QPoly, QPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num − deg den`; `None` for the zero function.
    pub fn degree_excess(&self) -> Option<isize> {
        let n = self.num.degree()? as isize;
        Some(n - self.den.degree().unwrap_or(0) as isize)
    }

    /// `deg num < deg den`.
    pub fn is_proper(&self) -> bool {
        self.degree_excess().map_or(true, |d| d < 0)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("non-zero denominator")
    }

    /// `lim z→∞ z^k·f` for `k = deg den − deg num`, i.e. the leading
    /// coefficient ratio.
    pub fn leading_ratio(&self) -> Option<Rational> {
        Some(self.num.lead()?.clone() / self.den.lead()?.clone())
    }

    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }
}

fn combine(a: &RatFunc, b: &RatFunc, sign: i32) -> RatFunc {
    let left = &a.num * &b.den;
    let right = &b.num * &a.den;
    let num = if sign > 0 { left + right } else { left - right };
    RatFunc::new(num, &a.den * &b.den).expect("non-zero denominator")
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        combine(self, rhs, 1)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        combine(self, rhs, -1)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("non-zero denominator")
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -self.clone()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
