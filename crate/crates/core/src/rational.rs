//! Exact rational scalars.
//!
//! Every distance, epsilon, delta and zeta in this crate is a [`Rational`];
//! there is no floating point anywhere. The convergence predicates compare
//! against thresholds with strict inequalities, so rounding of any kind would
//! make the threshold elimination unsound.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// An exact rational number in canonical reduced form, denominator positive.
///
/// Serialized as the string `"p/q"`, or `"n"` for integers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rational(Ratio<i64>);

impl Rational {
    /// Build `numer/denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    /// Always strictly positive.
    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `"p/q"` or `"n"`, with `q > 0`.
impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer: i64 = num_str
            .trim()
            .parse()
            .map_err(|_| format!("bad rational numerator in {s:?}"))?;
        let denom: i64 = den_str
            .trim()
            .parse()
            .map_err(|_| format!("bad rational denominator in {s:?}"))?;
        if denom <= 0 {
            return Err(format!("rational denominator must be positive in {s:?}"));
        }
        Ok(Rational::new(numer, denom))
    }
}

impl TryFrom<String> for Rational {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

/// Rational extended with a single `+inf`, ordered above every finite value.
///
/// Used for the empty-set conventions of the excess and inf/sup functionals:
/// an infimum over the empty set is `Infinity`, a supremum over the empty set
/// is `Finite(0)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinity,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// Strict comparison against a finite threshold; `Infinity` is never below.
    pub fn below(&self, eps: &Rational) -> bool {
        match self {
            Extended::Finite(v) => v < eps,
            Extended::Infinity => false,
        }
    }

    /// Non-strict variant of [`Extended::below`].
    pub fn at_most(&self, eps: &Rational) -> bool {
        match self {
            Extended::Finite(v) => v <= eps,
            Extended::Infinity => false,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numer(), -3);
        assert_eq!(r.denom(), 2);
        assert_eq!(r, Rational::new(-3, 2));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-2", "1/2", "-7/3", "10/4"] {
            let r: Rational = s.parse().unwrap();
            let back: Rational = r.to_string().parse().unwrap();
            assert_eq!(r, back);
        }
        assert_eq!("10/4".parse::<Rational>().unwrap().to_string(), "5/2");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
    }

    #[test]
    fn total_order_and_arithmetic() {
        let half = Rational::new(1, 2);
        let third = Rational::new(1, 3);
        assert!(third < half);
        assert_eq!(half + third, Rational::new(5, 6));
        assert_eq!(half * third, Rational::new(1, 6));
        assert_eq!(half - half, Rational::zero());
        assert_eq!(Rational::one() / half, Rational::from_int(2));
    }

    #[test]
    fn extended_ordering() {
        let one = Extended::Finite(Rational::one());
        assert!(one < Extended::Infinity);
        assert!(one.below(&Rational::from_int(2)));
        assert!(!one.below(&Rational::one()));
        assert!(one.at_most(&Rational::one()));
        assert!(!Extended::Infinity.below(&Rational::from_int(1000)));
    }
}
