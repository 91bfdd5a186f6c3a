//! Exact univariate polynomials and rational functions.

mod json;
mod matrix;
mod ratfunc;
pub mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::Rational;

pub use matrix::det_polymatrix;
pub use ratfunc::RatFunc;

/// Dense polynomial with coefficients in ascending order. The coefficient
/// vector never ends in a zero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Default for Poly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c·zⁿ`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `zⁿ` (zero beyond the degree).
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `self · zⁿ`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation in another ring, converting each coefficient with
    /// `lift`.
    pub fn eval_with<U>(&self, x: &U, lift: impl Fn(&T) -> U) -> U
    where
        U: Clone + Zero + Add<Output = U> + Mul<Output = U>,
    {
        self.coeffs
            .iter()
            .rev()
            .fold(U::zero(), |acc, c| acc * x.clone() + lift(c))
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let coeffs = self
            .coeffs
            .iter()
            .skip(1)
            .map(|c| {
                k = k.clone() + T::one();
                c.clone() * k.clone()
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Long division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.lead().expect("non-zero").clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::NotShapeFraction("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other
            .divmod(self)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
    }

    /// Scales to leading coefficient one.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor by Euclid's algorithm.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.divmod(&y)?;
            x = y;
            // Keeping the remainder monic bounds coefficient growth.
            y = r.monic();
        }
        Ok(x.monic())
    }
}

impl Poly<Rational> {
    /// Builds a polynomial from integer coefficients in ascending order.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(|c| c.to_f64().unwrap_or(f64::NAN))
    }

    /// Evaluation at a complex point in double precision.
    pub fn eval_complex(&self, x: Complex<f64>) -> Complex<f64> {
        self.eval_with(&x, |c| Complex::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.eval(x)
    }

    /// `(1 - z²)`.
    pub fn one_minus_z2() -> Self {
        Self::from_ints(&[1, 0, -1])
    }
}

impl<T: Coeff> Poly<Complex<T>> {
    /// Embeds a real-coefficient polynomial.
    pub fn from_real(p: &Poly<T>) -> Self {
        p.map(|c| Complex::new(c.clone(), T::zero()))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<T: Coeff> $trait<&Poly<T>> for &Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: &Poly<T>) -> Poly<T> {
                $body(self, rhs)
            }
        }
        impl<T: Coeff> $trait<Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                $body(&self, &rhs)
            }
        }
        impl<T: Coeff> $trait<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: &Poly<T>) -> Poly<T> {
                $body(&self, rhs)
            }
        }
        impl<T: Coeff> $trait<Poly<T>> for &Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                $body(self, &rhs)
            }
        }
    };
}

fn add_impl<T: Coeff>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| a.coeff(i) + b.coeff(i)).collect())
}

fn sub_impl<T: Coeff>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| a.coeff(i) - b.coeff(i)).collect())
}

fn mul_impl<T: Coeff>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![T::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    Poly::new(out)
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);
binop!(Mul, mul, mul_impl);

impl<T: Coeff> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -self.clone()
    }
}

impl<T: Coeff> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag == Rational::from_integer(1.into());
            let coeff = rational::format_rational(&mag);
            let coeff = if mag.is_integer() { coeff } else { format!("({coeff})") };
            match n {
                0 => write!(f, "{coeff}")?,
                1 if unit => write!(f, "z")?,
                1 => write!(f, "{coeff}z")?,
                _ if unit => write!(f, "z^{n}")?,
                _ => write!(f, "{coeff}z^{n}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn long_division_examples() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[0, -1]);
        let (qt, r) = a.divmod(&b).unwrap();
        assert_eq!(qt, Poly::from_ints(&[0, -1]));
        assert_eq!(r, Poly::from_ints(&[-1]));

        assert_eq!(&a * &Poly::one(), a);

        let num = Poly::from_ints(&[0, -26, 0, 62, 0, -36]);
        let den = Poly::from_ints(&[6, 0, -17, 0, 12]);
        let (qt, r) = num.divmod(&den).unwrap();
        assert_eq!(qt, Poly::from_ints(&[0, -3]));
        assert_eq!(r, Poly::from_ints(&[0, -8, 0, 11]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            Poly::from_ints(&[1, 1]).divmod(&Poly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn gcd_examples() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        assert_eq!(Poly::gcd(&a, &b).unwrap(), b);
        let c = Poly::from_ints(&[2, 4]);
        assert_eq!(
            Poly::gcd(&c, &Poly::zero()).unwrap(),
            Poly::new(vec![q(1, 2), q(1, 1)])
        );
        assert!(matches!(
            Poly::<Rational>::gcd(&Poly::zero(), &Poly::zero()),
            Err(Error::GcdOfZeros)
        ));
        // 4z(1-z²)(9z⁴-9z²+2) and 36z⁶-60z⁴+29z²-4 are coprime.
        let num = Poly::from_ints(&[0, 4])
            * Poly::from_ints(&[1, 0, -1])
            * Poly::from_ints(&[2, 0, -9, 0, 9]);
        let den = Poly::from_ints(&[-4, 0, 29, 0, -60, 0, 36]);
        assert_eq!(Poly::gcd(&num, &den).unwrap(), Poly::one());
    }

    #[test]
    fn evaluation_examples() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(p.eval(&q(1, 1)), q(0, 1));
        assert_eq!(p.eval(&q(0, 1)), q(-1, 1));
        let num = Poly::from_ints(&[0, -26, 0, 62, 0, -36]);
        // -36/32 + 62/8 - 13 by direct substitution
        assert_eq!(num.eval_exact(&q(1, 2)), q(-51, 8));
        let z = num.eval_complex(Complex::new(0.5, 0.0));
        assert!((z.re + 6.375).abs() < 1e-14 && z.im == 0.0);
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::from_ints(&[0, -26, 0, 62, 0, -36]);
        assert_eq!(p.to_string(), "-36z^5 + 62z^3 - 26z");
        let h = Poly::new(vec![q(1, 2), q(-1, 1)]);
        assert_eq!(h.to_string(), "-z + (1/2)");
    }

    #[test]
    fn float_polynomials_share_the_implementation() {
        let p: Poly<f64> = Poly::new(vec![-1.0, 0.0, 1.0]);
        let (qt, r) = p.divmod(&Poly::new(vec![-1.0, 1.0])).unwrap();
        assert_eq!(qt.coeffs(), &[1.0, 1.0]);
        assert!(r.is_zero());
        assert_eq!(p.derivative().coeffs(), &[0.0, 2.0]);
    }

    fn small_poly() -> impl Strategy<Value = Poly<Rational>> {
        prop::collection::vec((-6i64..=6, 1i64..=4), 0..6)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn divmod_round_trip(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (qt, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&qt * &b) + &r, a);
            prop_assert!(r.degree().map_or(true, |dr| dr < b.degree().unwrap()));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
            let g = Poly::gcd(&(&a * &c), &(&b * &c)).unwrap();
            prop_assert!(g.divides(&(&a * &c)));
            prop_assert!(g.divides(&(&b * &c)));
            prop_assert!(c.monic().divides(&g));
        }
    }
}
