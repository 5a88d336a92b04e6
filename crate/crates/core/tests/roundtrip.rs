use xpq_core::dynamics::{enumerate_minimal_sets, OrbitData, SystemParams};
use xpq_core::exact::{Cyclotomic, PqRational, QmodZ};
use xpq_core::groupalg::{GroupAlgebraElement, GroupElement};
use xpq_core::ktheory::{k_theory_of_group, FgAbGroup, KTheoryReport};
use xpq_core::primspace::{closure, ClosedSetDesc, PrimPoint, SequenceDesc, SequenceTail, T2Closed};
use xpq_core::traces::{moments, MomentSequence, TraceSpec};

fn roundtrip<T>(value: &T) -> T
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    let json = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    back
}

#[test]
fn every_wire_type_roundtrips() {
    let s = SystemParams::new(2, 3).unwrap();
    let orbits = enumerate_minimal_sets(&s, 60).unwrap();
    for o in &orbits {
        assert_eq!(&roundtrip(o), o);
    }
    let q = |a, b| QmodZ::new(a, b).unwrap();
    assert_eq!(roundtrip(&q(3, 7)), q(3, 7));

    let spec = TraceSpec::finite_orbit(orbits[3].clone(), q(1, 3), q(1, 2));
    assert_eq!(roundtrip(&spec), spec);
    assert_eq!(roundtrip(&TraceSpec::Canonical), TraceSpec::Canonical);

    let seq = moments(&spec, &s, 4).unwrap();
    assert_eq!(roundtrip::<MomentSequence>(&seq), seq);

    let a = GroupAlgebraElement::from_terms(
        &s,
        [
            (GroupElement::new(PqRational::new(5, 2, 1, 2, 3), -1, 2), num_rational::BigRational::new(3.into(), 4.into())),
            (GroupElement::shift(1, 1), num_rational::BigRational::from_integer((-2).into())),
        ],
    );
    let json = serde_json::to_string(&a).unwrap();
    assert_eq!(GroupAlgebraElement::from_json(&json, &s).unwrap(), a);

    let c = Cyclotomic::root_of_unity(&q(2, 9)).unwrap();
    assert_eq!(roundtrip(&c), c);

    let report: KTheoryReport = roundtrip(&k_theory_of_group(7, 13).unwrap());
    assert_eq!(report.k0, FgAbGroup::from_orders(2, [6.into()]).unwrap());

    let closed = ClosedSetDesc::union_of([
        (orbits[2].clone(), T2Closed::Full),
        (orbits[1].clone(), T2Closed::FinitePoints([(q(1, 2), q(0, 1))].into_iter().collect())),
    ]);
    assert_eq!(roundtrip(&closed), closed);
    assert_eq!(roundtrip(&ClosedSetDesc::All), ClosedSetDesc::All);
    assert_eq!(roundtrip(&closure(&[])), ClosedSetDesc::empty());

    let seq = SequenceDesc {
        prefix: vec![PrimPoint::Infinity, PrimPoint::orbit_char(orbits[1].clone(), q(0, 1), q(1, 4))],
        tail: SequenceTail::Escaping,
    };
    assert_eq!(roundtrip(&seq), seq);
}

#[test]
fn tampered_orbits_are_rejected() {
    let good = r#"{"p":2,"q":3,"r":5,"orbit":["1/5","2/5","3/5","4/5"],"stabilizer":{"basis":[[1,1],[0,4]],"index":4}}"#;
    assert!(serde_json::from_str::<OrbitData>(good).is_ok());
    for bad in [
        r#"{"p":2,"q":3,"r":5,"orbit":["1/5","2/5"],"stabilizer":{"basis":[[1,1],[0,4]],"index":4}}"#,
        r#"{"p":2,"q":3,"r":5,"orbit":["1/5","2/5","3/5","4/5"],"stabilizer":{"basis":[[1,0],[0,4]],"index":4}}"#,
        r#"{"p":2,"q":3,"r":4,"orbit":["1/4","3/4"],"stabilizer":{"basis":[[1,0],[0,2]],"index":2}}"#,
    ] {
        assert!(serde_json::from_str::<OrbitData>(bad).is_err(), "{bad}");
    }
}
