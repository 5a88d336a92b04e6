//! Seeded random inputs for the check suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xpq_core::dynamics::{OrbitData, SystemParams};
use xpq_core::exact::{PqRational, QmodZ};
use xpq_core::groupalg::{GroupAlgebraElement, GroupElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for one suite, so adding draws to one
/// suite never shifts another.
pub fn stream(seed: u64, tag: &str) -> ChaCha8Rng {
    let mut rng = rng(seed);
    rng.set_stream(tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    }));
    rng
}

pub fn group_element<R: Rng>(rng: &mut R, params: &SystemParams) -> GroupElement {
    let x = PqRational::new(
        rng.gen_range(-12i64..=12),
        rng.gen_range(0..=2),
        rng.gen_range(0..=2),
        params.p(),
        params.q(),
    );
    GroupElement::new(x, rng.gen_range(-3..=3), rng.gen_range(-3..=3))
}

pub fn nonidentity_element<R: Rng>(rng: &mut R, params: &SystemParams) -> GroupElement {
    loop {
        let g = group_element(rng, params);
        if !g.is_identity() {
            return g;
        }
    }
}

/// A unitary `u_g` whose shift lands in the stabilizer of `orbit` about half
/// the time, with lattice coordinates in `[-6, 6]²`.
pub fn unitary_near_lattice<R: Rng>(rng: &mut R, orbit: &OrbitData) -> GroupElement {
    let mut g = group_element(rng, orbit.params());
    if rng.gen_bool(0.5) {
        let [[a, b], [_, c]] = orbit.stabilizer().basis();
        let (c1, c2) = (rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6));
        g.m = c1 * a;
        g.n = c1 * b + c2 * c;
    }
    g
}

pub fn coefficient<R: Rng>(rng: &mut R) -> BigRational {
    let num = loop {
        let c = rng.gen_range(-5i64..=5);
        if c != 0 {
            break c;
        }
    };
    BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1i64..=3)))
}

/// One to `max_terms` terms with small nonzero rational coefficients.
pub fn algebra_element<R: Rng>(
    rng: &mut R,
    params: &SystemParams,
    max_terms: usize,
) -> GroupAlgebraElement {
    let len = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..len)
        .map(|_| (group_element(rng, params), coefficient(rng)))
        .collect();
    GroupAlgebraElement::from_terms(params, terms)
}

/// Character parameter from `{0, 1/2, 1/3, 1/4, 2/3, 3/4}`.
pub fn character_coord<R: Rng>(rng: &mut R) -> QmodZ {
    const GRID: [(i64, i64); 6] = [(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (3, 4)];
    let (a, b) = GRID[rng.gen_range(0..GRID.len())];
    QmodZ::new(a, b).expect("nonzero denominator")
}
