//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! An element is stored at a fixed level `N` as its coordinates in the power
//! basis `1, ζ_N, …, ζ_N^{φ(N)-1}`, i.e. as a polynomial of degree `< φ(N)`
//! reduced modulo `Φ_N`. There is no descent to the conductor: `-1` is
//! `[-1]` at level 1 and `[-1, 0]` at level 3. Binary operations on different
//! levels first lift both operands to the lcm of the levels, and equality is
//! equality of field elements, so those two values compare equal.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::cyclotomic_polynomial;
use super::qmodz::QmodZ;
use crate::error::{Error, Result};

/// Power-basis coordinates of `x^k mod Φ_N` for every `0 <= k < N`, stored
/// sparsely.
struct ReductionTable {
    phi: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl ReductionTable {
    fn build(level: usize) -> Self {
        let modulus = cyclotomic_polynomial(level);
        let phi = modulus.degree().expect("Φ_N is nonzero");
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        let mut rows = Vec::with_capacity(level);
        for _ in 0..level {
            rows.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j, c.clone()))
                    .collect(),
            );
            let top = cur.pop().expect("phi >= 1");
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in cur.iter_mut().zip(modulus.coeffs()) {
                    *c -= &top * m;
                }
            }
        }
        ReductionTable { phi, rows }
    }
}

static TABLES: OnceLock<Mutex<HashMap<usize, Arc<ReductionTable>>>> = OnceLock::new();

fn table(level: usize) -> Arc<ReductionTable> {
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().unwrap().get(&level) {
        return t.clone();
    }
    let t = Arc::new(ReductionTable::build(level));
    tables.lock().unwrap().entry(level).or_insert(t).clone()
}

/// Euler's phi of a level, read off the degree of `Φ_N`.
pub fn field_degree(level: usize) -> usize {
    table(level).phi
}

/// Floating-point image under `ζ_N ↦ e^{2πi/N}`. Approximate only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: usize,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// A rational number, at level 1.
    pub fn from_rational(r: BigRational) -> Self {
        Cyclotomic {
            level: 1,
            coeffs: vec![r],
        }
    }

    /// Builds an element from raw power-basis coordinates at `level`.
    pub fn from_coeffs(level: usize, coeffs: Vec<BigRational>) -> Result<Self> {
        if level == 0 {
            return Err(Error::OutOfRange("cyclotomic level must be positive".into()));
        }
        let phi = field_degree(level);
        if coeffs.len() != phi {
            return Err(Error::OutOfRange(format!(
                "level {level} needs {phi} coordinates, got {}",
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { level, coeffs })
    }

    /// `Σ c · ζ_N^e` over the given (exponent, coefficient) pairs; exponents
    /// are read modulo `N`.
    pub fn from_exponent_sum<I>(level: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigRational)>,
    {
        assert!(level > 0, "cyclotomic level must be positive");
        let mut buckets: Vec<BigRational> = vec![BigRational::zero(); level];
        for (e, c) in terms {
            buckets[e % level] += c;
        }
        let t = table(level);
        let mut coeffs = vec![BigRational::zero(); t.phi];
        for (e, c) in buckets.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, m) in &t.rows[e] {
                if m.is_one() {
                    coeffs[*j] += &c;
                } else {
                    coeffs[*j] += &c * BigRational::from_integer(m.clone());
                }
            }
        }
        Cyclotomic { level, coeffs }
    }

    /// `ζ_{den}^{num}` at level `den(t)`.
    pub fn root_of_unity(t: &QmodZ) -> Result<Self> {
        let level = t
            .den()
            .to_usize()
            .ok_or_else(|| Error::OutOfRange(format!("level {} too large", t.den())))?;
        let e = t.num().to_usize().expect("num < den");
        Ok(Self::from_exponent_sum(level, [(e, BigRational::one())]))
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Re-expresses the element at a multiple of its level.
    pub fn lift(&self, level: usize) -> Result<Self> {
        if level == 0 || !level.is_multiple_of(self.level) {
            return Err(Error::OutOfRange(format!(
                "cannot lift level {} to {level}",
                self.level
            )));
        }
        if level == self.level {
            return Ok(self.clone());
        }
        let step = level / self.level;
        Ok(Self::from_exponent_sum(
            level,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i * step, c.clone())),
        ))
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.level.lcm(&other.level);
        (
            self.lift(l).expect("divides lcm"),
            other.lift(l).expect("divides lcm"),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.level;
        Self::from_exponent_sum(
            n,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| ((n - i) % n, c.clone())),
        )
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one().lift(self.level).expect("1 divides all");
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn approx(&self) -> Approx {
        let n = self.level as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = TAU * i as f64 / n;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        Approx { re, im }
    }

    pub fn to_repr(&self) -> CyclotomicRepr {
        CyclotomicRepr {
            level: self.level,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
            approx: Some(self.approx()),
        }
    }

    pub fn from_repr(r: &CyclotomicRepr) -> Result<Self> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigRational>()
                    .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(r.level, coeffs)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, other: &Cyclotomic) -> Cyclotomic {
        if self.level != other.level {
            let (a, b) = self.common(other);
            return &a + &b;
        }
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, other: &Cyclotomic) -> Cyclotomic {
        self + &(-other)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, other: &Cyclotomic) -> Cyclotomic {
        if self.level != other.level {
            let (a, b) = self.common(other);
            return &a * &b;
        }
        let mut terms = Vec::new();
        for (i, x) in self.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in other.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                terms.push((i + j, x * y));
            }
        }
        Cyclotomic::from_exponent_sum(self.level, terms)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, other: Cyclotomic) -> Cyclotomic {
                (&self).$m(&other)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.level)?,
                _ => write!(f, "({c})·ζ{}^{i}", self.level)?,
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `{"level": N, "coeffs": ["a/b", …], "approx": {"re": …, "im": …}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclotomicRepr {
    pub level: usize,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<Approx>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CyclotomicRepr::deserialize(d)?;
        Cyclotomic::from_repr(&r).map_err(serde::de::Error::custom)
    }
}
