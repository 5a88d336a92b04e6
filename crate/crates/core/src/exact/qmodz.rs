use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ntheory::mod_inverse;
use crate::error::{Error, Result};

/// A rational point of the circle R/Z in lowest terms, `0 <= num < den`.
///
/// Zero is `0/1`. Ordering is by the representative in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QmodZ {
    num: BigInt,
    den: BigInt,
}

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    /// Reduces `num/den` modulo 1.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::OutOfRange("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: BigInt, den: BigInt) -> Self {
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let num = num.mod_floor(&den);
        let g = num.gcd(&den);
        if num.is_zero() {
            return Self::zero();
        }
        QmodZ {
            num: num / &g,
            den: den / g,
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::reduce(r.numer().clone(), r.denom().clone())
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, other: &QmodZ) -> QmodZ {
        Self::reduce(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn neg(&self) -> QmodZ {
        Self::reduce(-&self.num, self.den.clone())
    }

    pub fn sub(&self, other: &QmodZ) -> QmodZ {
        self.add(&other.neg())
    }

    /// `k * x mod 1`.
    pub fn mul_int(&self, k: &BigInt) -> QmodZ {
        Self::reduce(&self.num * k, self.den.clone())
    }

    /// `k^{-1} * x mod 1`, with `k^{-1}` the inverse of `k` modulo `den(x)`.
    pub fn mul_inverse(&self, k: &BigInt) -> Result<QmodZ> {
        let inv = mod_inverse(k, &self.den).ok_or_else(|| Error::NonInvertible {
            value: k.to_string(),
            modulus: self.den.to_string(),
        })?;
        Ok(self.mul_int(&inv))
    }
}

impl Default for QmodZ {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for QmodZ {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den)
            .cmp(&(&other.num * &self.den))
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl PartialOrd for QmodZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for QmodZ {
    type Err = Error;

    /// Accepts `a/b` or a bare integer; the value is reduced modulo 1.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid circle rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        QmodZ::new(n, d).map_err(|_| bad())
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used in tests and examples: `q(1, 5)` is `1/5`.
pub fn q(num: i64, den: i64) -> QmodZ {
    QmodZ::new(num, den).expect("nonzero denominator")
}
