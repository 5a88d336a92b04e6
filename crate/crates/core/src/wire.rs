//! Serde helpers: big integers travel as JSON numbers when they fit in 64
//! bits and as decimal strings otherwise. Both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrString {
    Unsigned(u64),
    Signed(i64),
    Text(String),
}

fn to_wire(x: &BigInt) -> NumOrString {
    if let Some(u) = x.to_u64() {
        NumOrString::Unsigned(u)
    } else if let Some(i) = x.to_i64() {
        NumOrString::Signed(i)
    } else {
        NumOrString::Text(x.to_string())
    }
}

fn from_wire(w: NumOrString) -> Result<BigInt, String> {
    match w {
        NumOrString::Unsigned(u) => Ok(u.into()),
        NumOrString::Signed(i) => Ok(i.into()),
        NumOrString::Text(s) => s.trim().parse().map_err(|_| format!("invalid integer {s:?}")),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_wire(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_wire(NumOrString::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(to_wire))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<NumOrString>::deserialize(d)?
            .into_iter()
            .map(|w| from_wire(w).map_err(D::Error::custom))
            .collect()
    }
}

/// Borrowed form for serializing slices without cloning.
pub(crate) struct BigIntRef<'a>(pub &'a BigInt);

impl Serialize for BigIntRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_wire(self.0).serialize(s)
    }
}
