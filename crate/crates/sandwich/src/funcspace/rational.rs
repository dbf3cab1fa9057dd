use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar, kept in lowest terms with a positive denominator.
///
/// Every comparison and arithmetic operation in the crate goes through this
/// type; there is no floating point anywhere in the core.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// `num/den`. Panics if `den == 0`; use [`Rat::from_str`] for fallible
    /// construction from text.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational denominator must be nonzero");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `2^exp`, for the dyadic tolerances and schedules used throughout.
    pub fn pow2(exp: i32) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let mag = two.pow(exp.unsigned_abs() as i32);
        if exp >= 0 {
            Rat(mag)
        } else {
            Rat(mag.recip())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exact division; `None` when `other` is zero.
    pub fn checked_div(&self, other: &Rat) -> Option<Rat> {
        if other.is_zero() {
            None
        } else {
            Some(Rat(&self.0 / &other.0))
        }
    }

    pub fn recip(&self) -> Option<Rat> {
        Rat::one().checked_div(self)
    }

    /// When `self == 1/2^n` for some `n >= 1` returns `n`.
    pub fn as_half_power(&self) -> Option<u32> {
        if !self.0.numer().is_one() {
            return None;
        }
        let mut den = self.0.denom().clone();
        let two = BigInt::from(2);
        let mut n = 0u32;
        while (&den % &two).is_zero() {
            den /= &two;
            n += 1;
        }
        if den.is_one() && n >= 1 {
            Some(n)
        } else {
            None
        }
    }

    /// Lossy conversion for plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        self.checked_div(&rhs).expect("division by zero rational")
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero rational")
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = |msg: &str| Error::Parameter(format!("cannot parse rational {s:?}: {msg}"));
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num_str).map_err(|e| bad(&e.to_string()))?;
        let den = match den_str {
            Some(d) => BigInt::from_str(d).map_err(|e| bad(&e.to_string()))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Ok(Rat::int(n)),
            Repr::Text(s) => Rat::from_str(&s).map_err(|e| D::Error::custom(e.to_string())),
        }
    }
}

/// Shorthand used pervasively in tests and examples.
#[macro_export]
macro_rules! rat {
    ($n:literal / $d:literal) => {
        $crate::funcspace::Rat::new($n, $d)
    };
    ($n:literal) => {
        $crate::funcspace::Rat::int($n)
    };
    ($n:expr, $d:expr) => {
        $crate::funcspace::Rat::new($n, $d)
    };
    ($n:expr) => {
        $crate::funcspace::Rat::int($n)
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(-2, -4).to_string(), "1/2");
        assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
        assert_eq!(Rat::int(7).to_string(), "7");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1/3", "-5/7", "0", "42", "-42", "1000000000000000000000/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = Rat::new(1, 3);
        let sum = &third + &third + third.clone();
        assert_eq!(sum, Rat::one());
        assert_eq!(Rat::new(1, 2) * Rat::new(2, 3), Rat::new(1, 3));
        assert_eq!(Rat::new(1, 2) - Rat::new(1, 3), Rat::new(1, 6));
        assert_eq!(Rat::new(1, 2) / Rat::new(3, 2), Rat::new(1, 3));
    }

    #[test]
    fn half_powers() {
        assert_eq!(Rat::new(1, 2).as_half_power(), Some(1));
        assert_eq!(Rat::new(1, 1024).as_half_power(), Some(10));
        assert_eq!(Rat::one().as_half_power(), None);
        assert_eq!(Rat::new(1, 3).as_half_power(), None);
        assert_eq!(Rat::new(3, 8).as_half_power(), None);
        assert_eq!(Rat::pow2(-6), Rat::new(1, 64));
        assert_eq!(Rat::pow2(5), Rat::int(32));
    }

    #[test]
    fn serde_accepts_strings_and_integers() {
        let r: Rat = serde_json::from_str("\"3/4\"").unwrap();
        assert_eq!(r, Rat::new(3, 4));
        let r: Rat = serde_json::from_str("-2").unwrap();
        assert_eq!(r, Rat::int(-2));
        assert_eq!(serde_json::to_string(&Rat::new(3, 4)).unwrap(), "\"3/4\"");
    }
}
