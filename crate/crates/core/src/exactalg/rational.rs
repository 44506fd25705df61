//! Arbitrary-precision rationals in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

/// An exact rational number `num/den` with `gcd(|num|, den) = 1` and `den > 0`.
///
/// Zero is always `0/1`. Serializes as the string `"num/den"` (or `"num"` when
/// the denominator is one).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, AlgebraError> {
        let den = den.into();
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Exact square root when both numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational(BigRational::new(n, d)))
        } else {
            None
        }
    }

    /// Nearest double; used only by the numeric oracle and summaries.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Bits in numerator plus denominator; a rough size measure.
    pub fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    /// The simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
    pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
        let (lo, hi) = if lo <= hi { (lo.clone(), hi.clone()) } else { (hi.clone(), lo.clone()) };
        if lo.signum() <= 0 && hi.signum() >= 0 {
            return Rational::zero();
        }
        if hi.is_negative() {
            return -Self::simplest_between(&-hi, &-lo);
        }
        simplest_positive(lo.0, hi.0)
    }
}

// Continued-fraction descent for 0 < lo <= hi.
fn simplest_positive(lo: BigRational, hi: BigRational) -> Rational {
    let fl = lo.floor();
    if fl == lo {
        return Rational(fl);
    }
    if fl < hi.floor() || hi == fl.clone() + BigRational::one() && hi.is_integer() {
        return Rational(fl + BigRational::one());
    }
    // Same integer part: recurse on reciprocals of fractional parts.
    let a = fl.clone();
    let inner = simplest_positive((hi - &a).recip(), (lo - &a).recip());
    Rational(a + inner.0.recip())
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
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = AlgebraError;

    /// Accepts `"n"` or `"n/d"`; decimals and exponents are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::ParseRational(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let valid = |x: &str| {
            let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(n) || d.is_some_and(|d| !valid(d)) {
            return Err(bad());
        }
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigInt = match d {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        Rational::new(num, den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division panics on a zero divisor like the integer types; use `checked_div`
// where the divisor is data-dependent.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    #[inline]
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    #[inline]
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    #[inline]
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign for Rational {
    #[inline]
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    #[inline]
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Plain Euclid on machine integers, kept apart from the bigint path.
    fn euclid(mut a: i64, mut b: i64) -> i64 {
        a = a.abs();
        b = b.abs();
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        let r = Rational::new(2, -4).unwrap();
        assert_eq!(r.to_string(), "-1/2");
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = Rational::new(0, 5).unwrap();
        assert_eq!(z.to_string(), "0");
        assert_eq!(z.denom(), &BigInt::one());
    }

    #[test]
    fn reduces_against_euclid_oracle() {
        let (n, d) = (109395i64, 761090i64);
        let g = euclid(n, d);
        assert_eq!(g, 935);
        let r = Rational::new(n, d).unwrap();
        assert_eq!(r.numer(), &BigInt::from(n / g));
        assert_eq!(r.denom(), &BigInt::from(d / g));
        assert_eq!(r.to_string(), "117/814");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(Rational::new(3, 0), Err(AlgebraError::ZeroDenominator));
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn parsing_rejects_decimals() {
        assert_eq!("-11/15".parse::<Rational>().unwrap(), Rational::frac(-11, 15));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7));
        for bad in ["0.5", "1e3", "", "/2", "1/", "a/b", "1/-"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn simplest_rational_in_interval() {
        let s = Rational::simplest_between(&Rational::frac(3, 10), &Rational::frac(4, 10));
        assert_eq!(s, Rational::frac(1, 3));
        let s = Rational::simplest_between(&Rational::frac(-7, 2), &Rational::frac(-10, 3));
        assert_eq!(s, Rational::frac(-7, 2));
        let s = Rational::simplest_between(&Rational::frac(5, 2), &Rational::frac(5, 2));
        assert_eq!(s, Rational::frac(5, 2));
        let s = Rational::simplest_between(&Rational::frac(-1, 3), &Rational::frac(1, 7));
        assert!(s.is_zero());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Rational::frac(9, 4).sqrt_exact(), Some(Rational::frac(3, 2)));
        assert_eq!(Rational::frac(2, 1).sqrt_exact(), None);
        assert_eq!(Rational::frac(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn serde_uses_strings() {
        let r = Rational::frac(-11, 15);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-11/15\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
