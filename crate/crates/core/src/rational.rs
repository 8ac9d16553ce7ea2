//! Exact rational numbers.
//!
//! Every grading, time parameter and function value in this crate is a
//! [`Rational`]. The wrapper exists so that the textual form (`"a/b"` or
//! `"a"`) is fixed in one place and so that serde always goes through strings.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i128>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));
    pub const TWO: Rational = Rational(Ratio::new_raw(2, 1));

    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Ratio::from_integer(n as i128))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer, if it is one and fits in `i64`.
    pub fn to_integer(&self) -> Option<i64> {
        if self.is_integer() {
            i64::try_from(self.numer()).ok()
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn half(&self) -> Self {
        *self / Rational::TWO
    }

    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rational) -> Self {
        (*self + *other).half()
    }

    /// Base-10 rendering truncated to `digits` fractional digits, computed
    /// with integer arithmetic only. Used for plotting output.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let n = self.numer();
        let d = self.denom();
        let neg = n < 0;
        let n = n.unsigned_abs();
        let d = d as u128;
        let (int, mut rem) = n.div_rem(&d);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int.to_string());
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                rem *= 10;
                let (q, r) = rem.div_rem(&d);
                out.push(char::from(b'0' + q as u8));
                rem = r;
            }
        }
        out
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
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let parse = |x: &str| -> Result<i128, ParseRationalError> {
            let x = x.trim();
            if x.is_empty() || x.starts_with('+') {
                return Err(err());
            }
            x.parse::<i128>().map_err(|_| err())
        };
        match s.split_once('/') {
            None => Ok(Rational(Ratio::from_integer(parse(s)?))),
            Some((n, d)) => {
                let n = parse(n)?;
                let d = parse(d)?;
                if d == 0 {
                    return Err(err());
                }
                Ok(Rational(Ratio::new(n, d)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_int(n as i64)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<i64> for Rational {
            type Output = Rational;
            fn $m(self, rhs: i64) -> Rational {
                Rational(self.0.$m(Ratio::from_integer(rhs as i128)))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + b)
    }
}

/// Shorthand used throughout the crate and its tests: `q(2, 3)` is 2/3.
pub fn q(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(q(4, 6).to_string(), "2/3");
        assert_eq!(q(-14, 3).to_string(), "-14/3");
        assert_eq!(q(6, 3).to_string(), "2");
        assert_eq!("2/-3".parse::<Rational>().unwrap(), q(-2, 3));
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::from_int(-7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("+1".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_uses_strings() {
        let s = serde_json::to_string(&q(-14, 3)).unwrap();
        assert_eq!(s, "\"-14/3\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q(-14, 3));
        assert!(serde_json::from_str::<Rational>("3").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(2, 3).to_decimal_string(4), "0.6666");
        assert_eq!(q(-7, 2).to_decimal_string(2), "-3.50");
        assert_eq!(q(-1, 3).to_decimal_string(3), "-0.333");
        assert_eq!(Rational::from_int(5).to_decimal_string(0), "5");
    }
}
