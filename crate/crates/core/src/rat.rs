//! Exact rational scalars.
//!
//! Every quantity in this crate is a `Rat`: a reduced fraction with a
//! positive denominator. There is no floating point anywhere on a result
//! path; decimal input strings are parsed as exact fractions (`"0.6"` is
//! `3/5`).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::Error;

/// An exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` with q != 0; the sign moves to the numerator and the fraction
    /// is reduced.
    pub fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
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
        Rat(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Lossy conversion used only for drawing (SVG export).
    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer();
        let d = self.0.denom();
        // Good enough for picture coordinates at desk scale.
        let nf = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
        let df = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
        nf / df
    }

    /// Parses `"p"`, `"p/q"` or an exact decimal such as `"-1.25"`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Input(format!("cannot parse `{s}` as an exact rational"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Input(format!("zero denominator in `{s}`")));
            }
            return Ok(Rat(BigRational::new(p, q)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: BigInt = if int == "-" || int.is_empty() {
                BigInt::zero()
            } else {
                int.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = frac.parse().map_err(|_| bad())?;
            let scale = num::pow::pow(BigInt::from(10), frac.len());
            let mut val = BigRational::from_integer(int.clone()).abs()
                + BigRational::new(digits, scale);
            if neg || int.is_negative() {
                val = -val;
            }
            return Ok(Rat(val));
        }
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat(BigRational::from_integer(p)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Rat::parse(s)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
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

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string like \"3/5\", \"0.6\" or \"7\"")
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rat, E> {
                i64::try_from(v)
                    .map(Rat::from_int)
                    .map_err(|_| E::custom("integer out of range"))
            }
            fn visit_f64<E: serde::de::Error>(self, _: f64) -> Result<Rat, E> {
                Err(E::custom(
                    "floating point values are not exact; quote decimals as strings",
                ))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rat, E> {
                Rat::parse(v).map_err(|e| E::custom(e.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

/// Sum of an empty slice is zero.
pub fn sum(values: &[Rat]) -> Rat {
    values.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        Rat::parse(s).unwrap()
    }

    #[test]
    fn parse_canonical_forms() {
        assert_eq!(r("0.6"), Rat::frac(3, 5));
        assert_eq!(r("24/5"), Rat::frac(24, 5));
        assert_eq!(r("-1.25"), Rat::frac(-5, 4));
        assert_eq!(r("-3/-6"), Rat::frac(1, 2));
        assert_eq!(r("7"), Rat::from_int(7));
        assert_eq!(r("0"), Rat::zero());
    }

    #[test]
    fn parse_rejects_junk() {
        for s in ["", "1/0", "a", "1.2.3", "1/", "2e3", "."] {
            assert!(Rat::parse(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(r("6/10").to_string(), "3/5");
        assert_eq!(r("-6/10").to_string(), "-3/5");
        assert_eq!(r("10/5").to_string(), "2");
        assert_eq!((r("1/3") + r("1/6")).to_string(), "1/2");
    }

    #[test]
    fn exact_arithmetic() {
        assert_eq!(r("1/3") + r("2/3"), Rat::one());
        assert_eq!(r("2/3") - r("1/6"), r("1/2"));
        assert_eq!(r("3/5") * r("5/3"), Rat::one());
        assert_eq!(r("3/5") / r("3/5"), Rat::one());
        assert!(r("1/3") < r("2/5"));
    }

    #[test]
    fn serde_round_trip() {
        let v: Rat = serde_json::from_str("\"24/5\"").unwrap();
        assert_eq!(v, Rat::frac(24, 5));
        let v: Rat = serde_json::from_str("3").unwrap();
        assert_eq!(v, Rat::from_int(3));
        assert!(serde_json::from_str::<Rat>("0.5").is_err());
        assert_eq!(serde_json::to_string(&Rat::frac(3, 5)).unwrap(), "\"3/5\"");
        assert_eq!(serde_json::to_string(&Rat::from_int(4)).unwrap(), "\"4\"");
    }
}
