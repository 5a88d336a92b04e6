//! The primitive ideal space `P = (O × T²) ⊔ {∞}` with its hull-kernel
//! topology: closed sets are `P` itself and finite unions of `{B} × F` with
//! `F ⊆ T²` closed. Here `F` is either all of `T²` or a finite set of
//! rational points.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dynamics::OrbitData;
use crate::exact::QmodZ;

/// A rational point `(t₁, t₂)` of `T²`, in the stabilizer's HNF basis.
pub type CharPoint = (QmodZ, QmodZ);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimPoint {
    Infinity,
    OrbitChar { orbit: OrbitData, chi: CharPoint },
}

impl PrimPoint {
    pub fn orbit_char(orbit: OrbitData, t1: QmodZ, t2: QmodZ) -> Self {
        PrimPoint::OrbitChar {
            orbit,
            chi: (t1, t2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum T2Closed {
    Full,
    FinitePoints(BTreeSet<CharPoint>),
}

impl T2Closed {
    pub fn is_empty(&self) -> bool {
        matches!(self, T2Closed::FinitePoints(s) if s.is_empty())
    }

    pub fn contains(&self, chi: &CharPoint) -> bool {
        match self {
            T2Closed::Full => true,
            T2Closed::FinitePoints(s) => s.contains(chi),
        }
    }

    pub fn union(&self, other: &T2Closed) -> T2Closed {
        match (self, other) {
            (T2Closed::FinitePoints(a), T2Closed::FinitePoints(b)) => {
                T2Closed::FinitePoints(a.union(b).cloned().collect())
            }
            _ => T2Closed::Full,
        }
    }

    pub fn intersection(&self, other: &T2Closed) -> T2Closed {
        match (self, other) {
            (T2Closed::Full, x) | (x, T2Closed::Full) => x.clone(),
            (T2Closed::FinitePoints(a), T2Closed::FinitePoints(b)) => {
                T2Closed::FinitePoints(a.intersection(b).cloned().collect())
            }
        }
    }

    pub fn is_subset(&self, other: &T2Closed) -> bool {
        match (self, other) {
            (_, T2Closed::Full) => true,
            (T2Closed::Full, T2Closed::FinitePoints(_)) => false,
            (T2Closed::FinitePoints(a), T2Closed::FinitePoints(b)) => a.is_subset(b),
        }
    }
}

/// A closed subset of `P`. `FiniteUnion` parts have distinct orbits, nonempty
/// `T²` parts, and are sorted by orbit key; every constructor here keeps that
/// form, so structural equality is equality of sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedSetDesc {
    All,
    FiniteUnion(Vec<(OrbitData, T2Closed)>),
}

impl ClosedSetDesc {
    pub fn empty() -> Self {
        ClosedSetDesc::FiniteUnion(Vec::new())
    }

    /// Groups parts by orbit, merging duplicates and dropping empty parts.
    pub fn union_of<I: IntoIterator<Item = (OrbitData, T2Closed)>>(parts: I) -> Self {
        let mut out: Vec<(OrbitData, T2Closed)> = Vec::new();
        for (orbit, part) in parts {
            if part.is_empty() {
                continue;
            }
            match out.iter_mut().find(|(o, _)| *o == orbit) {
                Some((_, existing)) => *existing = existing.union(&part),
                None => out.push((orbit, part)),
            }
        }
        out.sort_by(|(a, _), (b, _)| {
            (a.params().p(), a.params().q(), a.key()).cmp(&(b.params().p(), b.params().q(), b.key()))
        });
        ClosedSetDesc::FiniteUnion(out)
    }

    pub fn is_all(&self) -> bool {
        matches!(self, ClosedSetDesc::All)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ClosedSetDesc::FiniteUnion(parts) if parts.is_empty())
    }

    pub fn contains(&self, x: &PrimPoint) -> bool {
        match (self, x) {
            (ClosedSetDesc::All, _) => true,
            (ClosedSetDesc::FiniteUnion(_), PrimPoint::Infinity) => false,
            (ClosedSetDesc::FiniteUnion(parts), PrimPoint::OrbitChar { orbit, chi }) => parts
                .iter()
                .any(|(o, part)| o == orbit && part.contains(chi)),
        }
    }

    pub fn is_subset(&self, other: &ClosedSetDesc) -> bool {
        match (self, other) {
            (_, ClosedSetDesc::All) => true,
            (ClosedSetDesc::All, ClosedSetDesc::FiniteUnion(_)) => false,
            (ClosedSetDesc::FiniteUnion(a), ClosedSetDesc::FiniteUnion(b)) => a.iter().all(|(o, part)| {
                b.iter().any(|(o2, part2)| o == o2 && part.is_subset(part2))
            }),
        }
    }
}

/// Closure of a finite set: `P` if `∞` is present, otherwise the points
/// themselves (points of `T²` are closed).
pub fn closure(points: &[PrimPoint]) -> ClosedSetDesc {
    let mut parts = Vec::with_capacity(points.len());
    for x in points {
        match x {
            PrimPoint::Infinity => return ClosedSetDesc::All,
            PrimPoint::OrbitChar { orbit, chi } => parts.push((
                orbit.clone(),
                T2Closed::FinitePoints(BTreeSet::from([chi.clone()])),
            )),
        }
    }
    ClosedSetDesc::union_of(parts)
}

/// Whether `y` lies in the closure of `{x}`.
pub fn specializes(x: &PrimPoint, y: &PrimPoint) -> bool {
    closure(std::slice::from_ref(x)).contains(y)
}

/// Descriptions are closed by construction.
pub fn is_closed(_desc: &ClosedSetDesc) -> bool {
    true
}

pub fn closed_union(a: &ClosedSetDesc, b: &ClosedSetDesc) -> ClosedSetDesc {
    match (a, b) {
        (ClosedSetDesc::All, _) | (_, ClosedSetDesc::All) => ClosedSetDesc::All,
        (ClosedSetDesc::FiniteUnion(x), ClosedSetDesc::FiniteUnion(y)) => {
            ClosedSetDesc::union_of(x.iter().chain(y).cloned())
        }
    }
}

pub fn closed_intersection(a: &ClosedSetDesc, b: &ClosedSetDesc) -> ClosedSetDesc {
    match (a, b) {
        (ClosedSetDesc::All, x) | (x, ClosedSetDesc::All) => x.clone(),
        (ClosedSetDesc::FiniteUnion(x), ClosedSetDesc::FiniteUnion(y)) => {
            ClosedSetDesc::union_of(x.iter().filter_map(|(o, part)| {
                y.iter()
                    .find(|(o2, _)| o == o2)
                    .map(|(_, part2)| (o.clone(), part.intersection(part2)))
            }))
        }
    }
}

/// Tail behaviour of a sequence in `P`; the prefix never affects limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceTail {
    /// Eventually outside every `{B} × T²`.
    Escaping,
    /// Eventually in a single orbit with characters converging to `chi_limit`.
    ConstantOrbit { orbit: OrbitData, chi_limit: CharPoint },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDesc {
    #[serde(default)]
    pub prefix: Vec<PrimPoint>,
    pub tail: SequenceTail,
}

/// Set of limits: everything for an escaping tail, the limit point alone
/// for a tail in a fixed orbit.
pub fn limit_set(seq: &SequenceDesc) -> ClosedSetDesc {
    match &seq.tail {
        SequenceTail::Escaping => ClosedSetDesc::All,
        SequenceTail::ConstantOrbit { orbit, chi_limit } => closure(&[PrimPoint::OrbitChar {
            orbit: orbit.clone(),
            chi: chi_limit.clone(),
        }]),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PrimPointRepr {
    Infinity,
    OrbitChar { orbit: OrbitData, chi: CharPoint },
}

impl Serialize for PrimPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PrimPoint::Infinity => PrimPointRepr::Infinity,
            PrimPoint::OrbitChar { orbit, chi } => PrimPointRepr::OrbitChar {
                orbit: orbit.clone(),
                chi: chi.clone(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match PrimPointRepr::deserialize(d)? {
            PrimPointRepr::Infinity => PrimPoint::Infinity,
            PrimPointRepr::OrbitChar { orbit, chi } => PrimPoint::OrbitChar { orbit, chi },
        })
    }
}

/// `"full"` or a list of `[t1, t2]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum T2Repr {
    Keyword(String),
    Points(Vec<CharPoint>),
}

impl Serialize for T2Closed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            T2Closed::Full => T2Repr::Keyword("full".into()),
            T2Closed::FinitePoints(pts) => T2Repr::Points(pts.iter().cloned().collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for T2Closed {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match T2Repr::deserialize(d)? {
            T2Repr::Keyword(k) if k == "full" => Ok(T2Closed::Full),
            T2Repr::Keyword(k) => Err(serde::de::Error::custom(format!(
                "expected \"full\" or a list of points, got {k:?}"
            ))),
            T2Repr::Points(pts) => Ok(T2Closed::FinitePoints(pts.into_iter().collect())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PartRepr {
    orbit: OrbitData,
    part: T2Closed,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ClosedRepr {
    All,
    Union { parts: Vec<PartRepr> },
}

impl Serialize for ClosedSetDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClosedSetDesc::All => ClosedRepr::All,
            ClosedSetDesc::FiniteUnion(parts) => ClosedRepr::Union {
                parts: parts
                    .iter()
                    .map(|(orbit, part)| PartRepr {
                        orbit: orbit.clone(),
                        part: part.clone(),
                    })
                    .collect(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClosedSetDesc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match ClosedRepr::deserialize(d)? {
            ClosedRepr::All => ClosedSetDesc::All,
            ClosedRepr::Union { parts } => {
                ClosedSetDesc::union_of(parts.into_iter().map(|p| (p.orbit, p.part)))
            }
        })
    }
}
