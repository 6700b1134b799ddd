use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ratio(BigRational);

impl Ratio {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Ratio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Ratio(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
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

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Ratio {
    fn from(r: BigRational) -> Self {
        Ratio(r)
    }
}

impl From<i64> for Ratio {
    fn from(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Ratio {
            type Output = Ratio;
            fn $m(self, rhs: Ratio) -> Ratio {
                Ratio((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Ratio> for &'a Ratio {
            type Output = Ratio;
            fn $m(self, rhs: &'a Ratio) -> Ratio {
                Ratio((&self.0).$m(&rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-self.0)
    }
}

impl Sum for Ratio {
    fn sum<I: Iterator<Item = Ratio>>(iter: I) -> Self {
        iter.fold(Ratio::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Ratio> for Ratio {
    fn sum<I: Iterator<Item = &'a Ratio>>(iter: I) -> Self {
        iter.fold(Ratio::zero(), |a, b| &a + b)
    }
}

impl Product for Ratio {
    fn product<I: Iterator<Item = Ratio>>(iter: I) -> Self {
        iter.fold(Ratio::one(), |a, b| a * b)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Ratio {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || crate::error::Error::Parse(format!("bad rational {s:?}"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Ratio::new(n, d))
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = Ratio::new(2682, 4200);
        assert_eq!(r, Ratio::new(447, 700));
        assert_eq!(r.to_string(), "447/700");
        let n = Ratio::new(3, -6);
        assert_eq!(*n.denom(), BigInt::from(2));
        assert_eq!(*n.numer(), BigInt::from(-1));
        assert_eq!("10/4".parse::<Ratio>().unwrap(), Ratio::new(5, 2));
        assert!("1/0".parse::<Ratio>().is_err());
    }
}
