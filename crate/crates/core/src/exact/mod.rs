//! Arithmetic kernel: circle rationals, Z[1/pq], cyclotomic fields and the
//! number theory underneath them. All integers are arbitrary precision.

pub mod cyclotomic;
pub mod ntheory;
pub mod poly;
pub mod pqrational;
pub mod qmodz;

pub use cyclotomic::{Approx, Cyclotomic, CyclotomicRepr};
pub use ntheory::{
    dependence_witness, factorize, is_multiplicatively_independent, mod_inverse,
    multiplicative_order, Factorization,
};
pub use poly::{cyclotomic_polynomial, IntPoly};
pub use pqrational::{pq_power, PqRational, PqRationalRepr};
pub use qmodz::QmodZ;

use num_bigint::BigInt;

/// `k · x mod 1`.
pub fn qmodz_mul_int(x: &QmodZ, k: &BigInt) -> QmodZ {
    x.mul_int(k)
}

/// `k^{-1} · x mod 1`; fails unless `gcd(k, den(x)) = 1`.
pub fn qmodz_mul_inverse(x: &QmodZ, k: &BigInt) -> crate::Result<QmodZ> {
    x.mul_inverse(k)
}

/// `ζ_{den(t)}^{num(t)}`.
pub fn root_of_unity(t: &QmodZ) -> crate::Result<Cyclotomic> {
    Cyclotomic::root_of_unity(t)
}
