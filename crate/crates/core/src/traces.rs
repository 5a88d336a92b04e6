//! Tracial states on the group algebra: the finite-orbit traces `τ_{x,χ}`
//! with rational characters of the stabilizer, the canonical trace, and the
//! (non-extreme) traces of uniform measures on finite orbits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{OrbitData, SolenoidPoint, StabilizerLattice, SystemParams};
use crate::error::{Error, Result};
use crate::exact::ntheory::mod_inverse;
use crate::exact::{Approx, Cyclotomic, PqRational, QmodZ};
use crate::groupalg::{GroupAlgebraElement, GroupElement};

/// A rational character of a stabilizer lattice, given by its values
/// `e^{2πi t₁}`, `e^{2πi t₂}` on the HNF basis rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    lattice: StabilizerLattice,
    t1: QmodZ,
    t2: QmodZ,
}

impl Character {
    pub fn new(lattice: StabilizerLattice, t1: QmodZ, t2: QmodZ) -> Self {
        Character { lattice, t1, t2 }
    }

    pub fn trivial(lattice: StabilizerLattice) -> Self {
        Self::new(lattice, QmodZ::zero(), QmodZ::zero())
    }

    pub fn lattice(&self) -> &StabilizerLattice {
        &self.lattice
    }

    pub fn t1(&self) -> &QmodZ {
        &self.t1
    }

    pub fn t2(&self) -> &QmodZ {
        &self.t2
    }

    /// `t` with `χ(m, n) = e^{2πi t}`, or `None` off the lattice.
    pub fn value(&self, m: i64, n: i64) -> Option<QmodZ> {
        let (c1, c2) = self.lattice.coordinates(m, n)?;
        Some(
            self.t1
                .mul_int(&BigInt::from(c1))
                .add(&self.t2.mul_int(&BigInt::from(c2))),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiRepr {
    pub t1: QmodZ,
    pub t2: QmodZ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceSpec {
    FiniteOrbit { orbit: OrbitData, chi: Character },
    Canonical,
    OrbitMeasure { orbit: OrbitData },
}

impl TraceSpec {
    pub fn finite_orbit(orbit: OrbitData, t1: QmodZ, t2: QmodZ) -> Self {
        let chi = Character::new(*orbit.stabilizer(), t1, t2);
        TraceSpec::FiniteOrbit { orbit, chi }
    }

    pub fn orbit(&self) -> Option<&OrbitData> {
        match self {
            TraceSpec::FiniteOrbit { orbit, .. } | TraceSpec::OrbitMeasure { orbit } => Some(orbit),
            TraceSpec::Canonical => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TraceSpec::FiniteOrbit { .. } => "finite_orbit",
            TraceSpec::Canonical => "canonical",
            TraceSpec::OrbitMeasure { .. } => "orbit_measure",
        }
    }

    /// Whether this trace is an extreme point of the trace simplex. Uniform
    /// orbit measures average the finite-orbit traces over all characters.
    pub fn is_extreme(&self) -> bool {
        !matches!(self, TraceSpec::OrbitMeasure { .. })
    }

    /// Only the canonical trace is faithful; every orbit-based spec kills
    /// `a*a` for `a` = [`nonfaithful_witness`].
    pub fn is_faithful(&self) -> bool {
        matches!(self, TraceSpec::Canonical)
    }

    fn to_repr(&self) -> TraceSpecRepr {
        match self {
            TraceSpec::FiniteOrbit { orbit, chi } => TraceSpecRepr::FiniteOrbit {
                orbit: orbit.clone(),
                chi: ChiRepr {
                    t1: chi.t1.clone(),
                    t2: chi.t2.clone(),
                },
            },
            TraceSpec::Canonical => TraceSpecRepr::Canonical,
            TraceSpec::OrbitMeasure { orbit } => TraceSpecRepr::OrbitMeasure {
                orbit: orbit.clone(),
            },
        }
    }

    fn from_repr(r: TraceSpecRepr) -> Self {
        match r {
            TraceSpecRepr::FiniteOrbit { orbit, chi } => Self::finite_orbit(orbit, chi.t1, chi.t2),
            TraceSpecRepr::Canonical => TraceSpec::Canonical,
            TraceSpecRepr::OrbitMeasure { orbit } => TraceSpec::OrbitMeasure { orbit },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TraceSpecRepr {
    FiniteOrbit { orbit: OrbitData, chi: ChiRepr },
    Canonical,
    OrbitMeasure { orbit: OrbitData },
}

impl Serialize for TraceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TraceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TraceSpecRepr::deserialize(d).map(TraceSpec::from_repr)
    }
}

/// `{"exact": Cyclotomic, "approx": {"re", "im"}}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceValue {
    pub exact: Cyclotomic,
    pub approx: Approx,
}

impl From<Cyclotomic> for TraceValue {
    fn from(exact: Cyclotomic) -> Self {
        let approx = exact.approx();
        TraceValue { exact, approx }
    }
}

/// `⟨a/r, k/(p^α q^β)⟩ = a·k·(p^α q^β)⁻¹ / r  mod 1`.
pub fn pairing(params: &SystemParams, z: &SolenoidPoint, y: &PqRational) -> QmodZ {
    let r = z.den();
    let inv = mod_inverse(&y.denominator(params.p(), params.q()), r).expect("den coprime to pq");
    z.coord().mul_int(&(y.num() * inv))
}

fn check_params(orbit: &OrbitData, a: &GroupAlgebraElement) -> Result<()> {
    if orbit.params() != a.params() {
        let show = |s: &SystemParams| format!("(p, q) = ({}, {})", s.p(), s.q());
        return Err(Error::ParamsMismatch(show(orbit.params()), show(a.params())));
    }
    Ok(())
}

fn to_level(n: &BigInt) -> Result<usize> {
    n.to_usize()
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::OutOfRange(format!("cyclotomic level {n} is too large")))
}

/// `Σ_g c_g χ(g) (1/|O|) Σ_{z∈O} e^{2πi⟨z,y⟩}` over the terms `g = (y, m, n)`
/// for which `chi` returns a value; all exponents share one histogram.
fn orbit_sum<F>(orbit: &OrbitData, a: &GroupAlgebraElement, extra_den: &BigInt, chi: F) -> Result<Cyclotomic>
where
    F: Fn(&GroupElement) -> Option<QmodZ>,
{
    let params = orbit.params();
    let r = orbit.denominator();
    let level_big = r.lcm(extra_den);
    let level = to_level(&level_big)?;
    let scale = to_level(&(&level_big / r))?;
    let r_small = to_level(r)?;
    let residues: Vec<usize> = orbit
        .points()
        .iter()
        .map(|z| z.coord().num().to_usize().expect("< r"))
        .collect();
    let size = BigRational::from_integer(BigInt::from(orbit.len()));

    let mut buckets = vec![BigRational::zero(); level];
    let mut counts = vec![0u64; level];
    for (g, c) in a.terms() {
        let Some(t) = chi(g) else { continue };
        let shift = t.num() * (&level_big / t.den());
        let shift = shift.to_usize().expect("< level");
        let inv = mod_inverse(&g.x.denominator(params.p(), params.q()), r).expect("coprime");
        let w = (g.x.num() * inv).mod_floor(r).to_usize().expect("< r");
        counts.iter_mut().for_each(|x| *x = 0);
        for &a in &residues {
            let e = (a * w % r_small) * scale;
            counts[(e + shift) % level] += 1;
        }
        let weight = c / &size;
        for (e, &k) in counts.iter().enumerate() {
            if k != 0 {
                buckets[e] += &weight * BigRational::from_integer(k.into());
            }
        }
    }
    Ok(Cyclotomic::from_exponent_sum(
        level,
        buckets.into_iter().enumerate().filter(|(_, c)| !c.is_zero()),
    ))
}

/// Linear extension of the value on unitaries.
pub fn trace_eval(spec: &TraceSpec, a: &GroupAlgebraElement) -> Result<Cyclotomic> {
    match spec {
        TraceSpec::Canonical => Ok(Cyclotomic::from_rational(
            a.coefficient(&GroupElement::identity()),
        )),
        TraceSpec::FiniteOrbit { orbit, chi } => {
            check_params(orbit, a)?;
            let extra = chi.t1.den().lcm(chi.t2.den());
            orbit_sum(orbit, a, &extra, |g| chi.value(g.m, g.n))
        }
        TraceSpec::OrbitMeasure { orbit } => {
            check_params(orbit, a)?;
            orbit_sum(orbit, a, &BigInt::one(), |g| {
                (g.m == 0 && g.n == 0).then(QmodZ::zero)
            })
        }
    }
}

/// Values `τ(u_{(n,0,0)})` for a range of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSequence {
    values: BTreeMap<i64, Cyclotomic>,
    source: Option<TraceSpec>,
}

impl MomentSequence {
    /// A hand-built sequence; no invariants are checked.
    pub fn from_values<I: IntoIterator<Item = (i64, Cyclotomic)>>(values: I) -> Self {
        MomentSequence {
            values: values.into_iter().collect(),
            source: None,
        }
    }

    pub fn get(&self, n: i64) -> Option<&Cyclotomic> {
        self.values.get(&n)
    }

    pub fn values(&self) -> &BTreeMap<i64, Cyclotomic> {
        &self.values
    }

    pub fn source(&self) -> Option<&TraceSpec> {
        self.source.as_ref()
    }
}

#[derive(Serialize, Deserialize)]
struct MomentRepr {
    n: i64,
    #[serde(flatten)]
    value: TraceValue,
}

/// `{"source": TraceSpec | null, "moments": [{"n", "exact", "approx"}, …]}`
#[derive(Serialize, Deserialize)]
struct MomentSequenceRepr {
    source: Option<TraceSpec>,
    moments: Vec<MomentRepr>,
}

impl Serialize for MomentSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MomentSequenceRepr {
            source: self.source.clone(),
            moments: self
                .values
                .iter()
                .map(|(&n, v)| MomentRepr {
                    n,
                    value: v.clone().into(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MomentSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MomentSequenceRepr::deserialize(d)?;
        Ok(MomentSequence {
            values: r.moments.into_iter().map(|m| (m.n, m.value.exact)).collect(),
            source: r.source,
        })
    }
}

/// `τ(u_{(n,0,0)})` for `|n| <= n_max`.
pub fn moments(spec: &TraceSpec, params: &SystemParams, n_max: u32) -> Result<MomentSequence> {
    let n_max = i64::from(n_max);
    let mut values = BTreeMap::new();
    for n in -n_max..=n_max {
        let u = GroupAlgebraElement::unit(params, GroupElement::translation(n));
        values.insert(n, trace_eval(spec, &u)?);
    }
    Ok(MomentSequence {
        values,
        source: Some(spec.clone()),
    })
}

/// `values(p·n) = values(n) = values(q·n)` wherever both sides are present.
/// Fails with `RangeTooSmall` when no comparison is possible.
pub fn check_pq_invariance(seq: &MomentSequence, params: &SystemParams) -> Result<bool> {
    let mut compared = 0usize;
    for (&n, v) in &seq.values {
        for k in [params.p(), params.q()] {
            let Some(kn) = i64::try_from(k).ok().and_then(|k| k.checked_mul(n)) else {
                continue;
            };
            if kn == n {
                continue;
            }
            if let Some(w) = seq.values.get(&kn) {
                compared += 1;
                if w != v {
                    return Ok(false);
                }
            }
        }
    }
    if compared == 0 {
        return Err(Error::RangeTooSmall(format!(
            "no n with p·n or q·n in range for (p, q) = ({}, {})",
            params.p(),
            params.q()
        )));
    }
    Ok(true)
}

/// Mean of `τ_{x,χ}(a)` over the `k²` characters with `t₁, t₂ ∈ (1/k)Z/Z`.
pub fn average_over_character_level(
    orbit: &OrbitData,
    k: u32,
    a: &GroupAlgebraElement,
) -> Result<Cyclotomic> {
    if k == 0 {
        return Err(Error::OutOfRange("character level k must be >= 1".into()));
    }
    let kk = i64::from(k);
    let mut total = Cyclotomic::zero();
    for i in 0..kk {
        for j in 0..kk {
            let spec = TraceSpec::finite_orbit(orbit.clone(), QmodZ::new(i, kk)?, QmodZ::new(j, kk)?);
            total = total + trace_eval(&spec, a)?;
        }
    }
    Ok(total.scale(&BigRational::new(BigInt::one(), BigInt::from(kk * kk))))
}

/// `u_{(r,0,0)} - u_e`, where `r` is the orbit denominator.
pub fn nonfaithful_witness(orbit: &OrbitData) -> GroupAlgebraElement {
    let params = orbit.params();
    GroupAlgebraElement::unit(params, GroupElement::translation(orbit.denominator().clone()))
        .sub(&GroupAlgebraElement::identity(params))
        .expect("same params")
}
