//! The Z²-action on the solenoid X = lim(T, z ↦ z^{pq}) and its finite orbits.
//!
//! A point of X with finite orbit is determined by its zeroth coordinate,
//! which is a rational `a/r` with `gcd(r, pq) = 1`; the remaining coordinates
//! are the unique lifts `x_{n+1} = (pq)^{-1} x_n` inside the orbit. Group
//! elements `(m, n)` act by `β_{(m,n)} = T_p^{-m} T_q^{-n}`, i.e. by
//! multiplication with `p^{-m} q^{-n}` modulo `r`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ntheory::{mod_inverse, pow_mod_signed};
use crate::exact::{
    factorize, is_multiplicatively_independent, multiplicative_order, pq_power, QmodZ,
};

/// The pair `(p, q)`, with multiplicative independence decided once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemParams {
    p: u64,
    q: u64,
    mult_indep: bool,
}

impl SystemParams {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        let mult_indep = is_multiplicatively_independent(p, q)?;
        Ok(SystemParams { p, q, mult_indep })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn pq(&self) -> BigInt {
        BigInt::from(self.p) * BigInt::from(self.q)
    }

    /// Whether the hypotheses of the almost-minimality results hold.
    pub fn mult_indep(&self) -> bool {
        self.mult_indep
    }

    pub fn is_coprime(&self, r: &BigInt) -> bool {
        r.gcd(&self.pq()).is_one()
    }
}

/// A finite-orbit point of X, identified with its zeroth coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SolenoidPoint {
    coord: QmodZ,
}

impl SolenoidPoint {
    pub fn new(params: &SystemParams, coord: QmodZ) -> Result<Self> {
        if !params.is_coprime(coord.den()) {
            return Err(Error::NotCoprime {
                den: coord.den().to_string(),
                pq: params.pq().to_string(),
            });
        }
        Ok(SolenoidPoint { coord })
    }

    pub fn coord(&self) -> &QmodZ {
        &self.coord
    }

    pub fn den(&self) -> &BigInt {
        self.coord.den()
    }
}

/// `L_r = {(m, n) : p^m q^n ≡ 1 mod r}` as the rows of `[[a, b], [0, c]]`
/// with `a, c > 0` and `0 <= b < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerLattice {
    a: i64,
    b: i64,
    c: i64,
}

impl StabilizerLattice {
    pub fn full() -> Self {
        StabilizerLattice { a: 1, b: 0, c: 1 }
    }

    /// Validates the Hermite normal form conditions.
    pub fn from_hnf(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || c <= 0 || b < 0 || b >= c {
            return Err(Error::OutOfRange(format!(
                "[[{a}, {b}], [0, {c}]] is not in Hermite normal form"
            )));
        }
        Ok(StabilizerLattice { a, b, c })
    }

    /// Hermite normal form of the lattice spanned by two vectors.
    pub fn from_generators(u: (i64, i64), v: (i64, i64)) -> Result<Self> {
        let (u0, u1, v0, v1) = (
            BigInt::from(u.0),
            BigInt::from(u.1),
            BigInt::from(v.0),
            BigInt::from(v.1),
        );
        let det = (&u0 * &v1 - &u1 * &v0).abs();
        if det.is_zero() {
            return Err(Error::OutOfRange("generators are linearly dependent".into()));
        }
        // a = gcd of first coordinates; the second row is (0, det / a)
        let e = u0.extended_gcd(&v0);
        let a = e.gcd.clone();
        let b = &e.x * &u1 + &e.y * &v1;
        let c = &det / &a;
        let b = b.mod_floor(&c);
        let conv = |x: BigInt| {
            x.to_i64()
                .ok_or_else(|| Error::OutOfRange(format!("lattice entry {x} exceeds i64")))
        };
        Self::from_hnf(conv(a)?, conv(b)?, conv(c)?)
    }

    pub fn basis(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [0, self.c]]
    }

    /// `[Z² : L] = a·c`.
    pub fn index(&self) -> u64 {
        (self.a as u64) * (self.c as u64)
    }

    /// Number of independent basis rows; always 2 for a finite-index lattice.
    pub fn rank(&self) -> usize {
        [self.a, self.c].iter().filter(|&&d| d > 0).count()
    }

    /// Coordinates `(c₁, c₂)` with `(m, n) = c₁·(a, b) + c₂·(0, c)`.
    pub fn coordinates(&self, m: i64, n: i64) -> Option<(i64, i64)> {
        if m % self.a != 0 {
            return None;
        }
        let c1 = m / self.a;
        let rest = n as i128 - c1 as i128 * self.b as i128;
        if rest % self.c as i128 != 0 {
            return None;
        }
        Some((c1, (rest / self.c as i128) as i64))
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        self.coordinates(m, n).is_some()
    }

    pub fn to_repr(&self) -> StabilizerRepr {
        StabilizerRepr {
            basis: self.basis(),
            index: self.index(),
        }
    }

    pub fn from_repr(r: &StabilizerRepr) -> Result<Self> {
        if r.basis[1][0] != 0 {
            return Err(Error::OutOfRange("stabilizer basis must be upper triangular".into()));
        }
        let s = Self::from_hnf(r.basis[0][0], r.basis[0][1], r.basis[1][1])?;
        if s.index() != r.index {
            return Err(Error::OutOfRange(format!(
                "index {} does not match basis (expected {})",
                r.index,
                s.index()
            )));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerRepr {
    pub basis: [[i64; 2]; 2],
    pub index: u64,
}

/// A finite orbit of the Z²-action together with its stabilizer lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitData {
    params: SystemParams,
    denominator: BigInt,
    points: Vec<SolenoidPoint>,
    stabilizer: StabilizerLattice,
}

impl OrbitData {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Orbit points in increasing order.
    pub fn points(&self) -> &[SolenoidPoint] {
        &self.points
    }

    pub fn stabilizer(&self) -> &StabilizerLattice {
        &self.stabilizer
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The least point, used as the base point of the orbit.
    pub fn base_point(&self) -> &SolenoidPoint {
        &self.points[0]
    }

    /// Sort key `(r, least numerator)`.
    pub fn key(&self) -> (BigInt, BigInt) {
        (self.denominator.clone(), self.points[0].coord().num().clone())
    }

    pub fn contains(&self, x: &QmodZ) -> bool {
        self.points.binary_search_by(|p| p.coord().cmp(x)).is_ok()
    }

    pub fn coords(&self) -> BTreeSet<QmodZ> {
        self.points.iter().map(|p| p.coord().clone()).collect()
    }

    pub fn to_repr(&self) -> OrbitDataRepr {
        OrbitDataRepr {
            p: self.params.p,
            q: self.params.q,
            r: self.denominator.clone(),
            orbit: self.points.iter().map(|p| p.coord().clone()).collect(),
            stabilizer: self.stabilizer.to_repr(),
        }
    }

    /// Recomputes the orbit from its first listed point and rejects any
    /// mismatch with the supplied data.
    pub fn from_repr(r: &OrbitDataRepr) -> Result<Self> {
        let params = SystemParams::new(r.p, r.q)?;
        let first = r
            .orbit
            .first()
            .ok_or_else(|| Error::Parse("orbit must be nonempty".into()))?;
        let orbit = orbit_of(&params, &SolenoidPoint::new(&params, first.clone())?)?;
        let listed: Vec<QmodZ> = r.orbit.clone();
        let actual: Vec<QmodZ> = orbit.points.iter().map(|p| p.coord().clone()).collect();
        if orbit.denominator != r.r || listed != actual {
            return Err(Error::Parse(format!(
                "orbit data for r = {} does not match the orbit of {first}",
                r.r
            )));
        }
        if StabilizerLattice::from_repr(&r.stabilizer)? != orbit.stabilizer {
            return Err(Error::Parse("stabilizer does not match the orbit".into()));
        }
        Ok(orbit)
    }
}

/// `{"p":, "q":, "r":, "orbit": ["a/r", …], "stabilizer": {"basis": …, "index": k}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDataRepr {
    pub p: u64,
    pub q: u64,
    #[serde(with = "crate::wire::bigint")]
    pub r: BigInt,
    pub orbit: Vec<QmodZ>,
    pub stabilizer: StabilizerRepr,
}

impl Serialize for OrbitData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = OrbitDataRepr::deserialize(d)?;
        OrbitData::from_repr(&r).map_err(serde::de::Error::custom)
    }
}

fn residue(x: &QmodZ, unit: &BigInt) -> QmodZ {
    x.mul_int(unit)
}

/// `β_{(m,n)}(x) = p^{-m} q^{-n} · x`.
pub fn beta_apply(params: &SystemParams, g: (i64, i64), x: &SolenoidPoint) -> SolenoidPoint {
    let r = x.den();
    let p = BigInt::from(params.p);
    let q = BigInt::from(params.q);
    let pm = pow_mod_signed(&p, -g.0, r).expect("den coprime to p");
    let qn = pow_mod_signed(&q, -g.1, r).expect("den coprime to q");
    SolenoidPoint {
        coord: residue(x.coord(), &(pm * qn)),
    }
}

/// Stabilizer lattice `{(m, n) : p^m q^n ≡ 1 mod r}` in Hermite normal form.
///
/// `(0, ord_r(q))` spans the part with `m = 0`; the least `m > 0` with
/// `p^m ∈ ⟨q⟩` supplies the other row.
pub fn stabilizer_lattice(params: &SystemParams, r: &BigInt) -> Result<StabilizerLattice> {
    if !r.is_positive() {
        return Err(Error::OutOfRange(format!("denominator must be positive, got {r}")));
    }
    if !params.is_coprime(r) {
        return Err(Error::NotCoprime {
            den: r.to_string(),
            pq: params.pq().to_string(),
        });
    }
    if r.is_one() {
        return Ok(StabilizerLattice::full());
    }
    let too_big = |what: &str| Error::OutOfRange(format!("{what} exceeds i64 for r = {r}"));
    let ru = r.to_biguint().expect("positive");
    let d_q = multiplicative_order(&BigInt::from(params.q), &ru)?;
    let d_q = d_q.to_i64().ok_or_else(|| too_big("ord(q)"))?;

    let q = BigInt::from(params.q);
    let mut q_powers: HashMap<BigInt, i64> = HashMap::with_capacity(d_q as usize);
    let mut cur = BigInt::one();
    for j in 0..d_q {
        q_powers.insert(cur.clone(), j);
        cur = (cur * &q) % r;
    }

    let p_inv = mod_inverse(&BigInt::from(params.p), r).expect("coprime");
    let mut cur = BigInt::one();
    let mut m = 0i64;
    let n_m = loop {
        m += 1;
        cur = (cur * &p_inv) % r;
        if let Some(&j) = q_powers.get(&cur) {
            break j;
        }
    };
    StabilizerLattice::from_hnf(m, n_m, d_q)
}

fn orbit_residues(params: &SystemParams, a: &BigInt, r: &BigInt) -> Vec<BigInt> {
    let p = BigInt::from(params.p) % r;
    let q = BigInt::from(params.q) % r;
    let p_inv = mod_inverse(&p, r).expect("coprime");
    let q_inv = mod_inverse(&q, r).expect("coprime");
    let gens = [p, q, p_inv, q_inv];
    let mut seen: BTreeSet<BigInt> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back(a.clone());
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = (&x * g) % r;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn make_orbit(
    params: &SystemParams,
    r: &BigInt,
    residues: Vec<BigInt>,
    stabilizer: StabilizerLattice,
) -> OrbitData {
    let points = residues
        .into_iter()
        .map(|a| SolenoidPoint {
            coord: QmodZ::new(a, r.clone()).expect("r > 0"),
        })
        .collect();
    OrbitData {
        params: *params,
        denominator: r.clone(),
        points,
        stabilizer,
    }
}

/// The full β-orbit of `x` (closure under multiplication by `p^{±1}`,
/// `q^{±1}` modulo `den(x)`), listed in increasing order.
pub fn orbit_of(params: &SystemParams, x: &SolenoidPoint) -> Result<OrbitData> {
    let r = x.den().clone();
    let stabilizer = stabilizer_lattice(params, &r)?;
    let residues = orbit_residues(params, x.coord().num(), &r);
    Ok(make_orbit(params, &r, residues, stabilizer))
}

/// All orbits of `⟨p, q⟩` on the residues `a/r` in lowest terms.
pub fn orbits_with_denominator(params: &SystemParams, r: &BigInt) -> Result<Vec<OrbitData>> {
    let stabilizer = stabilizer_lattice(params, r)?;
    if r.is_one() {
        return Ok(vec![make_orbit(params, r, vec![BigInt::zero()], stabilizer)]);
    }
    let ru = r
        .to_u64()
        .ok_or_else(|| Error::OutOfRange(format!("cannot enumerate residues modulo {r}")))?;
    let mut covered: BTreeSet<BigInt> = BTreeSet::new();
    let mut out = Vec::new();
    for a in 1..ru {
        if a.gcd(&ru) != 1 {
            continue;
        }
        let a = BigInt::from(a);
        if covered.contains(&a) {
            continue;
        }
        let residues = orbit_residues(params, &a, r);
        covered.extend(residues.iter().cloned());
        out.push(make_orbit(params, r, residues, stabilizer));
    }
    Ok(out)
}

/// One entry per finite minimal invariant set with denominator `<= max_den`,
/// sorted by `(r, least numerator)`; `{0}` is the `r = 1` entry.
///
/// Denominators are processed in parallel on the current rayon pool.
pub fn enumerate_minimal_sets(params: &SystemParams, max_den: u64) -> Result<Vec<OrbitData>> {
    if max_den < 1 {
        return Err(Error::OutOfRange("max_denominator must be >= 1".into()));
    }
    let pq = params.p as u128 * params.q as u128;
    let dens: Vec<u64> = (1..=max_den)
        .filter(|&r| (r as u128).gcd(&pq) == 1)
        .collect();
    let per_den: Vec<Vec<OrbitData>> = dens
        .par_iter()
        .map(|&r| orbits_with_denominator(params, &BigInt::from(r)))
        .collect::<Result<_>>()?;
    Ok(per_den.into_iter().flatten().collect())
}

/// Whether multiplication by `p` and by `q` each map `set` onto itself.
pub fn is_invariant_set<'a, I>(params: &SystemParams, set: I) -> bool
where
    I: IntoIterator<Item = &'a QmodZ>,
{
    let set: BTreeSet<QmodZ> = set.into_iter().cloned().collect();
    [params.p, params.q].iter().all(|&k| {
        let k = BigInt::from(k);
        let image: BTreeSet<QmodZ> = set.iter().map(|x| x.mul_int(&k)).collect();
        image == set
    })
}

/// Size of `Fix_g` and its points (all of them, or those with reduced
/// denominator at most the bound).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoints {
    pub count: BigInt,
    pub points: Vec<QmodZ>,
}

/// `Fix_{(m,n)} = {a / count : 0 <= a < count}` where `count` is the part of
/// the numerator of `p^m q^n - 1` coprime to `pq`.
pub fn fixed_points(
    params: &SystemParams,
    g: (i64, i64),
    max_den: Option<&BigInt>,
) -> Result<FixedPoints> {
    if g == (0, 0) {
        return Err(Error::IdentityElement(
            "Fix of the identity is all of X".into(),
        ));
    }
    let v = pq_power(params.p, params.q, g.0, g.1) - BigRational::one();
    if v.is_zero() {
        return Err(Error::DependentParams {
            p: params.p,
            q: params.q,
        });
    }
    let pq = params.pq();
    let mut count = v.numer().abs();
    loop {
        let d = count.gcd(&pq);
        if d.is_one() {
            break;
        }
        count /= d;
    }

    let mut divisors = vec![BigUint::one()];
    for (prime, e) in factorize(&count.to_biguint().expect("positive"))?.factors() {
        let mut next = Vec::with_capacity(divisors.len() * (*e as usize + 1));
        for d in &divisors {
            let mut pk = d.clone();
            for _ in 0..=*e {
                next.push(pk.clone());
                pk *= prime;
            }
        }
        divisors = next;
    }
    let mut points = Vec::new();
    for d in divisors {
        let d = BigInt::from(d);
        if max_den.is_some_and(|bound| &d > bound) {
            continue;
        }
        let du = d
            .to_u64()
            .ok_or_else(|| Error::OutOfRange(format!("cannot list {d} fixed points")))?;
        for a in 0..du {
            if a.gcd(&du) == 1 {
                points.push(QmodZ::new(a, d.clone())?);
            }
        }
    }
    points.sort();
    Ok(FixedPoints { count, points })
}

/// `(x₀, …, x_k)` with `x₀ = coord(x)` and `x_{n+1} = (pq)^{-1} x_n`.
pub fn lift_sequence(params: &SystemParams, x: &SolenoidPoint, depth: usize) -> Vec<QmodZ> {
    let inv = mod_inverse(&params.pq(), x.den()).expect("den coprime to pq");
    let mut out = Vec::with_capacity(depth + 1);
    let mut cur = x.coord().clone();
    out.push(cur.clone());
    for _ in 0..depth {
        cur = cur.mul_int(&inv);
        out.push(cur.clone());
    }
    out
}

/// Truncated coordinates of every point of the closed invariant subset of X
/// lying over a finite orbit, one sequence per point.
pub fn solenoid_lift(orbit: &OrbitData, depth: usize) -> Vec<Vec<QmodZ>> {
    orbit
        .points()
        .iter()
        .map(|x| lift_sequence(orbit.params(), x, depth))
        .collect()
}
