use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `num / (p^a q^b)` of Z[1/pq]; the pair `(p, q)` comes from context.
///
/// The canonical form takes the least `b` for which some `a` works, then the
/// least such `a`. It satisfies `a = 0 or p ∤ num` and `b = 0 or q ∤ num`, and
/// unlike those two conditions alone it is unique when `p` and `q` share prime
/// factors (e.g. `1/12 = 1/(2·6) = 3/6^2` for `(p, q) = (2, 6)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PqRational {
    num: BigInt,
    a: u32,
    b: u32,
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `p^m q^n` as an exact rational; exponents may be negative.
pub fn pq_power(p: u64, q: u64, m: i64, n: i64) -> BigRational {
    let pm = num_traits::pow(big(p), m.unsigned_abs() as usize);
    let qn = num_traits::pow(big(q), n.unsigned_abs() as usize);
    let (mut top, mut bot) = (BigInt::one(), BigInt::one());
    if m >= 0 { top *= pm } else { bot *= pm }
    if n >= 0 { top *= qn } else { bot *= qn }
    BigRational::new(top, bot)
}

/// Strip every prime factor shared with `f` from `x`.
fn strip(mut x: BigInt, f: &BigInt) -> BigInt {
    loop {
        let g = x.gcd(f);
        if g.is_one() {
            return x;
        }
        x /= g;
    }
}

/// Least `k` with `x | f^k`, assuming every prime of `x` divides `f`.
fn steps_to_one(mut x: BigInt, f: &BigInt) -> u32 {
    let mut k = 0;
    while !x.is_one() {
        x /= x.gcd(f);
        k += 1;
    }
    k
}

impl PqRational {
    pub fn zero() -> Self {
        PqRational {
            num: BigInt::zero(),
            a: 0,
            b: 0,
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        PqRational {
            num: n.into(),
            a: 0,
            b: 0,
        }
    }

    /// Canonicalizes an arbitrary triple `num / (p^a q^b)`.
    pub fn new(num: impl Into<BigInt>, a: u32, b: u32, p: u64, q: u64) -> Self {
        let value = BigRational::new(
            num.into(),
            num_traits::pow(big(p), a as usize) * num_traits::pow(big(q), b as usize),
        );
        Self::from_rational(&value, p, q).expect("p^a q^b denominators are pq-smooth")
    }

    /// Fails with `NotPqRational` if the reduced denominator has a prime not
    /// dividing `pq`.
    pub fn from_rational(value: &BigRational, p: u64, q: u64) -> Result<Self> {
        let (bp, bq) = (big(p), big(q));
        let d = value.denom().clone();
        if !strip(strip(d.clone(), &bp), &bq).is_one() {
            return Err(Error::NotPqRational(value.to_string()));
        }
        let b = steps_to_one(strip(d.clone(), &bp), &bq);
        let qb = num_traits::pow(bq, b as usize);
        let a = steps_to_one(d.clone() / d.gcd(&qb), &bp);
        let scale = num_traits::pow(bp, a as usize) * qb;
        Ok(PqRational {
            num: value.numer() * (scale / d),
            a,
            b,
        })
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `p^a q^b`.
    pub fn denominator(&self, p: u64, q: u64) -> BigInt {
        num_traits::pow(big(p), self.a as usize) * num_traits::pow(big(q), self.b as usize)
    }

    pub fn to_rational(&self, p: u64, q: u64) -> BigRational {
        BigRational::new(self.num.clone(), self.denominator(p, q))
    }

    pub fn add(&self, other: &Self, p: u64, q: u64) -> Self {
        let sum = self.to_rational(p, q) + other.to_rational(p, q);
        Self::from_rational(&sum, p, q).expect("Z[1/pq] is closed under addition")
    }

    pub fn neg(&self) -> Self {
        PqRational {
            num: -&self.num,
            a: self.a,
            b: self.b,
        }
    }

    /// Multiplication by `p^m q^n`.
    pub fn scale(&self, m: i64, n: i64, p: u64, q: u64) -> Self {
        if self.is_zero() || (m == 0 && n == 0) {
            return self.clone();
        }
        let v = self.to_rational(p, q) * pq_power(p, q, m, n);
        Self::from_rational(&v, p, q).expect("Z[1/pq] is closed under p^{±1}, q^{±1}")
    }

    pub fn mul_int(&self, k: &BigInt, p: u64, q: u64) -> Self {
        let v = self.to_rational(p, q) * BigRational::from_integer(k.clone());
        Self::from_rational(&v, p, q).expect("closed under integer multiples")
    }

    /// Wire form; canonicality is not checked here.
    pub fn to_repr(&self) -> PqRationalRepr {
        PqRationalRepr {
            num: self.num.to_string(),
            a: self.a,
            b: self.b,
        }
    }

    pub fn from_repr(r: &PqRationalRepr, p: u64, q: u64) -> Result<Self> {
        let num: BigInt = r
            .num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid integer {:?}", r.num)))?;
        Ok(Self::new(num, r.a, r.b, p, q))
    }
}

impl fmt::Display for PqRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.num)?;
        match (self.a, self.b) {
            (0, 0) => Ok(()),
            (a, 0) => write!(f, "/p^{a}"),
            (0, b) => write!(f, "/q^{b}"),
            (a, b) => write!(f, "/(p^{a} q^{b})"),
        }
    }
}

/// `{"num": "<integer>", "a": int, "b": int}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqRationalRepr {
    pub num: String,
    pub a: u32,
    pub b: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_examples() {
        let x = PqRational::from_rational(&rat(-1, 2), 2, 3).unwrap();
        assert_eq!((x.num().clone(), x.a(), x.b()), (BigInt::from(-1), 1, 0));

        let x = PqRational::new(12, 2, 1, 2, 3);
        assert_eq!(x, PqRational::integer(1));

        let x = PqRational::from_rational(&rat(5, 36), 2, 3).unwrap();
        assert_eq!((x.a(), x.b()), (2, 2));

        assert!(matches!(
            PqRational::from_rational(&rat(1, 5), 2, 3),
            Err(Error::NotPqRational(_))
        ));
    }

    #[test]
    fn shared_primes_stay_unique() {
        // 1/12 = 1/(2·6) = 3/6^2 for (p, q) = (2, 6)
        let a = PqRational::new(1, 1, 1, 2, 6);
        let b = PqRational::new(3, 0, 2, 2, 6);
        assert_eq!(a, b);
        assert!(a.a() == 0 || !a.num().is_multiple_of(&2.into()));
        assert!(a.b() == 0 || !a.num().is_multiple_of(&6.into()));
        // dependent pair (2, 4)
        assert_eq!(PqRational::new(1, 2, 0, 2, 4), PqRational::new(1, 0, 1, 2, 4));
    }

    #[test]
    fn scaling() {
        let one = PqRational::integer(1);
        assert_eq!(one.scale(1, 0, 2, 3), PqRational::integer(2));
        assert_eq!(one.scale(-1, -1, 2, 3), PqRational::new(1, 1, 1, 2, 3));
        assert_eq!(one.scale(-1, -1, 2, 3).scale(1, 1, 2, 3), one);
    }

    fn arb(p: u64, q: u64) -> impl Strategy<Value = PqRational> {
        (-60i64..60, 0u32..4, 0u32..4).prop_map(move |(n, a, b)| PqRational::new(n, a, b, p, q))
    }

    proptest! {
        #[test]
        fn invariants_hold(x in arb(2, 3), y in arb(6, 10), z in arb(4, 6)) {
            for (v, p, q) in [(&x, 2u64, 3u64), (&y, 6, 10), (&z, 4, 6)] {
                let bp = BigInt::from(p);
                let bq = BigInt::from(q);
                prop_assert!(v.a() == 0 || !v.num().is_multiple_of(&bp));
                prop_assert!(v.b() == 0 || !v.num().is_multiple_of(&bq));
                let back = PqRational::from_rational(&v.to_rational(p, q), p, q).unwrap();
                prop_assert_eq!(&back, v);
            }
        }

        #[test]
        fn addition_matches_rationals(x in arb(2, 3), y in arb(2, 3)) {
            let s = x.add(&y, 2, 3);
            prop_assert_eq!(s.to_rational(2, 3), x.to_rational(2, 3) + y.to_rational(2, 3));
        }
    }
}
