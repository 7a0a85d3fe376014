//! Exact rational costs.
//!
//! Every turning cost in the crate is an arbitrary-precision rational kept
//! in lowest terms with a positive denominator. The textual form is always
//! `p/q`, including integers (`0/1`, `3/1`).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("malformed rational literal `{0}` (expected p/q)")]
    Malformed(String),
    #[error("rational literal `{0}` has a non-positive denominator")]
    BadDenominator(String),
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Numerator after scaling by `scale`, when the product is an integer
    /// that fits in an `i128`.
    pub fn scaled_integer(&self, scale: &BigInt) -> Option<i128> {
        let scaled = self.0.clone() * BigRational::from_integer(scale.clone());
        if !scaled.is_integer() {
            return None;
        }
        scaled.to_integer().to_i128()
    }

    pub fn from_scaled(numer: i128, scale: &BigInt) -> Self {
        Rational(BigRational::new(BigInt::from(numer), scale.clone()))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalParseError;

    /// Accepts `p/q` with `q > 0`, or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || RationalParseError::Malformed(s.to_string());
        let (numer, denom) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let valid = |t: &str, signed: bool| {
            let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(numer, true) || !valid(denom, false) {
            return Err(malformed());
        }
        let numer: BigInt = numer.parse().map_err(|_| malformed())?;
        let denom: BigInt = denom.parse().map_err(|_| malformed())?;
        if !denom.is_positive() {
            return Err(RationalParseError::BadDenominator(s.to_string()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Rational> for Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 + &rhs.0)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
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

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_always_has_denominator() {
        assert_eq!(Rational::zero().to_string(), "0/1");
        assert_eq!(Rational::from_integer(3).to_string(), "3/1");
        assert_eq!(Rational::new(2, 4).to_string(), "1/2");
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn parse_literals() {
        assert_eq!("5/6".parse::<Rational>().unwrap(), Rational::new(5, 6));
        assert_eq!("4/8".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_integer(7));
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(RationalParseError::BadDenominator(_))
        ));
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("+1/2".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn scaling_round_trip() {
        let r = Rational::new(5, 6);
        let scale = BigInt::from(12);
        assert_eq!(r.scaled_integer(&scale), Some(10));
        assert_eq!(Rational::from_scaled(10, &scale), r);
        assert_eq!(r.scaled_integer(&BigInt::from(5)), None);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in small(), b in small(), c in small()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a + (b + c));
        }

        #[test]
        fn always_lowest_terms(n in -1000i64..1000, d in 1i64..1000) {
            let r = Rational::new(n, d);
            let g = num_integer::gcd(r.numer().clone(), r.denom().clone());
            prop_assert!(g == BigInt::from(1) || r.is_zero());
            prop_assert!(r.denom() > &BigInt::from(0));
            let reparsed: Rational = r.to_string().parse().unwrap();
            prop_assert_eq!(reparsed, r);
        }
    }
}
