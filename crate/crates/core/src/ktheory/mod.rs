//! Finitely generated abelian groups via Smith normal form, and the split
//! Pimsner–Voiculescu assembly for `Z[1/pq] ⋊ Z²`.
//!
//! The crossed product is built in two steps: `A = C*(Z[1/pq] ⋊ Z)` with the
//! generator acting by `pq`, then `A ⋊ Z` for the remaining `p`-direction.
//! The K-theory of `A` is input data: `K₀(A) = Z` with trivial action and
//! `K₁(A) = Z ⊕ Z/(pq-1)` on which the second automorphism acts by
//! `(x, y) ↦ (x, p·y)`.

mod group;
mod matrix;
mod snf;

pub use group::{map_cokernel, map_kernel, mult_map_ker_coker, FgAbGroup, FgAbMap};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `K₀ = coker(id - α₀) ⊕ ker(id - α₁)`, `K₁ = coker(id - α₁) ⊕ ker(id - α₀)`.
///
/// The caller asserts with `split` that both extensions split; nothing else
/// is supported.
pub fn pv_assemble(
    k0: &FgAbGroup,
    k1: &FgAbGroup,
    alpha0: &FgAbMap,
    alpha1: &FgAbMap,
    split: bool,
) -> Result<(FgAbGroup, FgAbGroup)> {
    if !split {
        return Err(Error::Unsupported(
            "only split extensions can be assembled".into(),
        ));
    }
    for (g, a, name) in [(k0, alpha0, "alpha0"), (k1, alpha1, "alpha1")] {
        if a.source() != g || a.target() != g {
            return Err(Error::IncompatibleMap(format!(
                "{name} must be an endomorphism of {g}"
            )));
        }
    }
    let d0 = FgAbMap::identity(k0).sub(alpha0)?;
    let d1 = FgAbMap::identity(k1).sub(alpha1)?;
    let big_k0 = map_cokernel(&d0).direct_sum(&map_kernel(&d1));
    let big_k1 = map_cokernel(&d1).direct_sum(&map_kernel(&d0));
    Ok((big_k0, big_k1))
}

/// Assembled K-groups next to the closed form `Z² ⊕ Z/gcd(p-1, q-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTheoryReport {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "K0")]
    pub k0: FgAbGroup,
    #[serde(rename = "K1")]
    pub k1: FgAbGroup,
    pub closed_form: ClosedForm,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub gcd: u64,
    pub group: FgAbGroup,
}

/// Runs the assembly; the closed form is computed separately and compared.
pub fn k_theory_of_group(p: u64, q: u64) -> Result<KTheoryReport> {
    if p < 2 || q < 2 {
        return Err(Error::OutOfRange(format!("need p, q >= 2, got ({p}, {q})")));
    }
    let pq = p
        .checked_mul(q)
        .ok_or_else(|| Error::OutOfRange(format!("p·q overflows for ({p}, {q})")))?;
    let k0_a = FgAbGroup::free(1);
    let k1_a = FgAbGroup::from_orders(1, [BigInt::from(pq - 1)])?;
    let alpha0 = FgAbMap::identity(&k0_a);
    let p_big = BigInt::from(p);
    let mut m = IntMatrix::identity(k1_a.num_generators());
    if k1_a.num_generators() == 2 {
        m[(1, 1)] = p_big;
    }
    let alpha1 = FgAbMap::new(k1_a.clone(), k1_a.clone(), m)?;
    let (k0, k1) = pv_assemble(&k0_a, &k1_a, &alpha0, &alpha1, true)?;

    let g = (p - 1).gcd(&(q - 1));
    let group = FgAbGroup::from_orders(2, [BigInt::from(g)])?;
    let matches = k0 == group && k1 == group;
    Ok(KTheoryReport {
        p,
        q,
        k0,
        k1,
        closed_form: ClosedForm { gcd: g, group },
        matches,
    })
}
