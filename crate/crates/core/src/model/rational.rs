//! Exact rational scalars.
//!
//! Couplings, energies and signatures are all exact rationals so that the
//! equality tests deciding coherence preservation never depend on a float
//! tolerance. Conversion to `f64` happens once, at the phase-evaluation
//! boundary in the evolution module.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Build `num/den`, reduced. Fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_big(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NonFiniteEntry(format!("{num}/0")));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    /// Parse a decimal numeral exactly: `"0.25"` becomes 1/4, `"-3"` becomes
    /// -3/1. Only `[+-]?digits[.digits]` is accepted.
    pub fn parse_decimal(text: &str) -> Result<Self> {
        let bad = || Error::NonFiniteEntry(format!("cannot parse {text:?} as a decimal numeral"));
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty()
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || (body.contains('.') && frac_part.is_empty())
        {
            return Err(bad());
        }
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Self::from_big(BigInt::from(sign) * num, den)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Nearest `f64`. Exact values far outside the double range saturate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Self divided by two; used for the 1/2 prefactor of the spectrum.
    pub fn halved(&self) -> Self {
        Rational(&self.0 / BigInt::from(2))
    }

    pub fn doubled(&self) -> Self {
        Rational(&self.0 * BigInt::from(2))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}
