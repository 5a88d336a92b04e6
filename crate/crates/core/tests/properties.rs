//! Seeded large-sample checks of the structural invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xpq_core::dynamics::{enumerate_minimal_sets, fixed_points, orbits_with_denominator, SystemParams};
use xpq_core::exact::{Cyclotomic, PqRational, QmodZ};
use xpq_core::groupalg::{algebra_mul, algebra_star, group_inv, group_mul, GroupAlgebraElement, GroupElement};
use xpq_core::ktheory::{smith_normal_form, IntMatrix};
use xpq_core::traces::{check_pq_invariance, moments, trace_eval, TraceSpec};

fn s23() -> SystemParams {
    SystemParams::new(2, 3).unwrap()
}

fn element(rng: &mut ChaCha8Rng, s: &SystemParams) -> GroupElement {
    let x = PqRational::new(rng.gen_range(-20i64..=20), rng.gen_range(0..=3), rng.gen_range(0..=3), s.p(), s.q());
    GroupElement::new(x, rng.gen_range(-4..=4), rng.gen_range(-4..=4))
}

fn algebra(rng: &mut ChaCha8Rng, s: &SystemParams) -> GroupAlgebraElement {
    let n = rng.gen_range(1..=3);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let c = BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
            (element(rng, s), c)
        })
        .collect();
    GroupAlgebraElement::from_terms(s, terms)
}

#[test]
fn group_axioms_on_ten_thousand_triples() {
    let s = s23();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let e = GroupElement::identity();
    for _ in 0..10_000 {
        let (g, h, k) = (element(&mut rng, &s), element(&mut rng, &s), element(&mut rng, &s));
        assert_eq!(
            group_mul(&s, &group_mul(&s, &g, &h), &k),
            group_mul(&s, &g, &group_mul(&s, &h, &k))
        );
        assert_eq!(group_mul(&s, &g, &e), g);
        assert_eq!(group_mul(&s, &e, &g), g);
        assert_eq!(group_mul(&s, &g, &group_inv(&s, &g)), e);
        assert_eq!(group_mul(&s, &group_inv(&s, &g), &g), e);
    }
}

#[test]
fn snf_on_a_thousand_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<BigInt>> = (0..r)
            .map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect())
            .collect();
        let a = IntMatrix::from_rows(rows).unwrap();
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d);
        assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0] == BigInt::from(0) && w[1] == BigInt::from(0));
        }
    }
}

#[test]
fn trace_property_on_a_thousand_pairs_per_kind() {
    let s = s23();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let orbits: Vec<_> = [5u64, 7, 11, 13]
        .iter()
        .flat_map(|&r| orbits_with_denominator(&s, &BigInt::from(r)).unwrap())
        .collect();
    for kind in 0..3 {
        for i in 0..1000 {
            let orbit = orbits[i % orbits.len()].clone();
            let spec = match kind {
                0 => TraceSpec::finite_orbit(orbit, QmodZ::new(i as i64 % 3, 3).unwrap(), QmodZ::new(i as i64 % 4, 4).unwrap()),
                1 => TraceSpec::Canonical,
                _ => TraceSpec::OrbitMeasure { orbit },
            };
            let (a, b) = (algebra(&mut rng, &s), algebra(&mut rng, &s));
            let ab = trace_eval(&spec, &algebra_mul(&a, &b).unwrap()).unwrap();
            let ba = trace_eval(&spec, &algebra_mul(&b, &a).unwrap()).unwrap();
            assert_eq!(ab, ba, "{}", spec.kind());
            assert_eq!(trace_eval(&spec, &algebra_star(&a)).unwrap(), trace_eval(&spec, &a).unwrap().conj());
        }
    }
}

#[test]
fn moments_do_not_see_the_character() {
    let s = s23();
    for orbit in enumerate_minimal_sets(&s, 40).unwrap() {
        let measure = moments(&TraceSpec::OrbitMeasure { orbit: orbit.clone() }, &s, 30).unwrap();
        assert!(check_pq_invariance(&measure, &s).unwrap());
        for (t1, t2) in [(0, 0), (1, 2), (2, 5)] {
            let spec = TraceSpec::finite_orbit(orbit.clone(), QmodZ::new(t1, 7).unwrap(), QmodZ::new(t2, 7).unwrap());
            let seq = moments(&spec, &s, 30).unwrap();
            assert_eq!(seq.values(), measure.values(), "r = {}", orbit.denominator());
        }
    }
    let canonical = moments(&TraceSpec::Canonical, &s, 10).unwrap();
    assert_eq!(canonical.get(0), Some(&Cyclotomic::one()));
    assert!(canonical.values().iter().filter(|(&n, _)| n != 0).all(|(_, v)| v.is_zero()));
}

#[test]
fn fixed_sets_are_finite_for_independent_pairs() {
    for (p, q) in [(2u64, 3u64), (3, 5), (2, 5), (6, 10), (4, 6)] {
        let s = SystemParams::new(p, q).unwrap();
        assert!(s.mult_indep());
        for m in -6i64..=6 {
            for n in -6i64..=6 {
                if (m, n) == (0, 0) {
                    continue;
                }
                let fp = fixed_points(&s, (m, n), Some(&BigInt::from(2000))).unwrap();
                assert!(fp.count >= BigInt::from(1));
                assert!(fp.points.iter().all(|x| fp.count.is_multiple_of(x.den())));
            }
        }
    }
    // dependent pairs have shifts acting trivially
    let dep = SystemParams::new(4, 8).unwrap();
    assert!(fixed_points(&dep, (3, -2), None).is_err());
}
