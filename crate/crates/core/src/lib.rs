//! Exact computations for the ×p,×q system on the circle and the group
//! Z[1/pq] ⋊ Z².
//!
//! * [`exact`]: circle rationals, Z[1/pq], cyclotomic numbers, number theory.
//! * [`dynamics`]: finite orbits of the Z²-action on the solenoid, their
//!   stabilizer lattices, fixed points and inverse-limit lifts.
//! * [`groupalg`]: the group Z[1/pq] ⋊ Z² and its rational group algebra.
//! * [`traces`]: the extreme tracial states attached to finite orbits, the
//!   canonical trace, orbit-measure traces and moment sequences.
//! * [`ktheory`]: Smith normal form, finitely generated abelian groups and the
//!   split Pimsner–Voiculescu assembly of K₀ and K₁.
//! * [`primspace`]: closed sets and limits in the primitive ideal space
//!   (O × T²) ⊔ {∞}.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod groupalg;
pub mod ktheory;
pub mod primspace;
pub mod traces;
mod wire;

pub use error::{Error, Result};
