//! The group `G = Z[1/pq] ⋊ Z²`, where `(m, n)` acts by multiplication with
//! `p^m q^n`, and its rational group algebra.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::SystemParams;
use crate::error::{Error, Result};
use crate::exact::{pq_power, PqRational, PqRationalRepr};

/// `(x, m, n) ∈ Z[1/pq] ⋊ Z²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub x: PqRational,
    pub m: i64,
    pub n: i64,
}

impl GroupElement {
    pub fn new(x: PqRational, m: i64, n: i64) -> Self {
        GroupElement { x, m, n }
    }

    pub fn identity() -> Self {
        GroupElement::new(PqRational::zero(), 0, 0)
    }

    /// `(k, 0, 0)` for an integer `k`.
    pub fn translation(k: impl Into<BigInt>) -> Self {
        GroupElement::new(PqRational::integer(k), 0, 0)
    }

    /// `(0, m, n)`.
    pub fn shift(m: i64, n: i64) -> Self {
        GroupElement::new(PqRational::zero(), m, n)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.m == 0 && self.n == 0
    }

    pub fn to_repr(&self) -> GroupElementRepr {
        GroupElementRepr {
            x: self.x.to_repr(),
            m: self.m,
            n: self.n,
        }
    }

    pub fn from_repr(r: &GroupElementRepr, params: &SystemParams) -> Result<Self> {
        Ok(GroupElement {
            x: PqRational::from_repr(&r.x, params.p(), params.q())?,
            m: r.m,
            n: r.n,
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.m, self.n)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

/// `{"x": PqRational, "m": int, "n": int}`. Needs `(p, q)` to canonicalize `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElementRepr {
    pub x: PqRationalRepr,
    pub m: i64,
    pub n: i64,
}

fn add_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Z² exponent overflow")
}

/// `(x₁, m₁, n₁)(x₂, m₂, n₂) = (x₁ + p^{m₁} q^{n₁} x₂, m₁ + m₂, n₁ + n₂)`.
pub fn group_mul(params: &SystemParams, g: &GroupElement, h: &GroupElement) -> GroupElement {
    let (p, q) = (params.p(), params.q());
    GroupElement {
        x: g.x.add(&h.x.scale(g.m, g.n, p, q), p, q),
        m: add_exp(g.m, h.m),
        n: add_exp(g.n, h.n),
    }
}

/// `(x, m, n)⁻¹ = (-p^{-m} q^{-n} x, -m, -n)`.
pub fn group_inv(params: &SystemParams, g: &GroupElement) -> GroupElement {
    let (m, n) = (
        g.m.checked_neg().expect("Z² exponent overflow"),
        g.n.checked_neg().expect("Z² exponent overflow"),
    );
    GroupElement {
        x: g.x.scale(m, n, params.p(), params.q()).neg(),
        m,
        n,
    }
}

/// `h g h⁻¹`.
pub fn conjugate(params: &SystemParams, h: &GroupElement, g: &GroupElement) -> GroupElement {
    group_mul(params, &group_mul(params, h, g), &group_inv(params, h))
}

/// `count` pairwise distinct conjugates of `g ≠ e`.
///
/// For `x ≠ 0` the conjugators are `(0, k, 0)`, giving `(p^k x, m, n)`; for
/// `x = 0` they are `(k, 0, 0)`, giving `((1 - p^m q^n) k, m, n)`.
pub fn icc_witness(
    params: &SystemParams,
    g: &GroupElement,
    count: usize,
) -> Result<Vec<GroupElement>> {
    if g.is_identity() {
        return Err(Error::IdentityElement(
            "the identity has a one-element conjugacy class".into(),
        ));
    }
    if g.x.is_zero() && pq_power(params.p(), params.q(), g.m, g.n).is_one() {
        return Err(Error::DependentParams {
            p: params.p(),
            q: params.q(),
        });
    }
    let conjugator = |k: usize| {
        let k = i64::try_from(k).expect("count fits in i64");
        if g.x.is_zero() {
            GroupElement::translation(k)
        } else {
            GroupElement::shift(k, 0)
        }
    };
    Ok((1..=count)
        .map(|k| conjugate(params, &conjugator(k), g))
        .collect())
}

/// A finite formal sum `Σ c_g u_g` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    params: SystemParams,
    terms: BTreeMap<GroupElement, BigRational>,
}

fn params_mismatch(a: &SystemParams, b: &SystemParams) -> Error {
    Error::ParamsMismatch(
        format!("(p, q) = ({}, {})", a.p(), a.q()),
        format!("(p, q) = ({}, {})", b.p(), b.q()),
    )
}

impl GroupAlgebraElement {
    pub fn zero(params: &SystemParams) -> Self {
        GroupAlgebraElement {
            params: *params,
            terms: BTreeMap::new(),
        }
    }

    /// The unitary `u_g`.
    pub fn unit(params: &SystemParams, g: GroupElement) -> Self {
        Self::from_terms(params, [(g, BigRational::one())])
    }

    pub fn identity(params: &SystemParams) -> Self {
        Self::unit(params, GroupElement::identity())
    }

    /// Sums coefficients of repeated group elements and drops zeros.
    pub fn from_terms<I>(params: &SystemParams, terms: I) -> Self
    where
        I: IntoIterator<Item = (GroupElement, BigRational)>,
    {
        let mut out = Self::zero(params);
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    fn add_term(&mut self, g: GroupElement, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_params(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(params_mismatch(&self.params, &other.params));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_params(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar(&-BigRational::one()))
    }

    pub fn scalar(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.params);
        }
        GroupAlgebraElement {
            params: self.params,
            terms: self.terms.iter().map(|(g, v)| (g.clone(), v * c)).collect(),
        }
    }

    pub fn to_repr(&self) -> GroupAlgebraRepr {
        GroupAlgebraRepr {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| TermRepr {
                    g: g.to_repr(),
                    c: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_repr(r: &GroupAlgebraRepr, params: &SystemParams) -> Result<Self> {
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in &r.terms {
            let c: BigRational = t
                .c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid rational {:?}", t.c)))?;
            terms.push((GroupElement::from_repr(&t.g, params)?, c));
        }
        Ok(Self::from_terms(params, terms))
    }

    pub fn from_json(s: &str, params: &SystemParams) -> Result<Self> {
        let r: GroupAlgebraRepr =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_repr(&r, params)
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) u{g}")?;
        }
        Ok(())
    }
}

impl Serialize for GroupAlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

/// `{"terms": [{"g": GroupElement, "c": "rational"}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAlgebraRepr {
    pub terms: Vec<TermRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub g: GroupElementRepr,
    pub c: String,
}

/// Convolution product.
pub fn algebra_mul(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    a.check_params(b)?;
    let params = a.params;
    let mut out = GroupAlgebraElement::zero(&params);
    for (g, c) in &a.terms {
        for (h, d) in &b.terms {
            out.add_term(group_mul(&params, g, h), c * d);
        }
    }
    Ok(out)
}

/// `Σ c_g u_g ↦ Σ c_g u_{g⁻¹}`; coefficients are rational, so conjugation is trivial.
pub fn algebra_star(a: &GroupAlgebraElement) -> GroupAlgebraElement {
    GroupAlgebraElement {
        params: a.params,
        terms: a
            .terms
            .iter()
            .map(|(g, c)| (group_inv(&a.params, g), c.clone()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn s23() -> SystemParams {
        SystemParams::new(2, 3).unwrap()
    }

    fn ge(num: i64, a: u32, b: u32, m: i64, n: i64, s: &SystemParams) -> GroupElement {
        GroupElement::new(PqRational::new(num, a, b, s.p(), s.q()), m, n)
    }

    fn int(x: i64, m: i64, n: i64) -> GroupElement {
        GroupElement::new(PqRational::integer(x), m, n)
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn multiplication_examples() {
        let s = s23();
        assert_eq!(group_mul(&s, &int(1, 1, 0), &int(1, 0, 0)), int(3, 1, 0));
        let g = ge(5, 1, 2, -3, 4, &s);
        assert_eq!(group_mul(&s, &GroupElement::identity(), &g), g);
        let conj = group_mul(&s, &group_mul(&s, &int(0, 1, 0), &int(1, 0, 0)), &int(0, -1, 0));
        assert_eq!(conj, int(2, 0, 0));
    }

    #[test]
    fn inverse_examples() {
        let s = s23();
        assert_eq!(group_inv(&s, &int(1, 1, 0)), ge(-1, 1, 0, -1, 0, &s));
        assert_eq!(group_inv(&s, &GroupElement::identity()), GroupElement::identity());
        assert_eq!(group_inv(&s, &group_inv(&s, &int(1, 0, 1))), int(1, 0, 1));
    }

    #[test]
    fn icc_examples() {
        let s = s23();
        assert_eq!(
            icc_witness(&s, &int(1, 0, 0), 3).unwrap(),
            vec![int(2, 0, 0), int(4, 0, 0), int(8, 0, 0)]
        );
        assert_eq!(
            icc_witness(&s, &int(0, 1, 0), 2).unwrap(),
            vec![int(-1, 1, 0), int(-2, 1, 0)]
        );
        assert_eq!(
            icc_witness(&s, &int(0, 1, 1), 2).unwrap(),
            vec![int(-5, 1, 1), int(-10, 1, 1)]
        );
        assert!(matches!(
            icc_witness(&s, &GroupElement::identity(), 2),
            Err(Error::IdentityElement(_))
        ));
        let dep = SystemParams::new(4, 8).unwrap();
        assert!(matches!(
            icc_witness(&dep, &int(0, 3, -2), 2),
            Err(Error::DependentParams { .. })
        ));
        // a nonzero translation part still works for dependent pairs
        assert_eq!(icc_witness(&dep, &int(1, 3, -2), 4).unwrap().len(), 4);
    }

    #[test]
    fn algebra_examples() {
        let s = s23();
        let g = ge(1, 1, 0, 2, -1, &s);
        let h = int(3, 0, 1);
        let ug = GroupAlgebraElement::unit(&s, g.clone());
        let uh = GroupAlgebraElement::unit(&s, h.clone());
        assert_eq!(
            algebra_mul(&ug, &uh).unwrap(),
            GroupAlgebraElement::unit(&s, group_mul(&s, &g, &h))
        );
        let e = GroupAlgebraElement::identity(&s);
        let ginv = group_inv(&s, &g);
        let a = ug.sub(&e).unwrap();
        let b = GroupAlgebraElement::unit(&s, ginv.clone()).sub(&e).unwrap();
        let expect = GroupAlgebraElement::from_terms(
            &s,
            [(GroupElement::identity(), rat(2)), (g.clone(), rat(-1)), (ginv.clone(), rat(-1))],
        );
        assert_eq!(algebra_mul(&a, &b).unwrap(), expect);
        assert_eq!(algebra_mul(&a, &e).unwrap(), a);
        let c = GroupAlgebraElement::from_terms(&s, [(GroupElement::identity(), rat(2)), (g, rat(3))]);
        let c_star = GroupAlgebraElement::from_terms(&s, [(GroupElement::identity(), rat(2)), (ginv, rat(3))]);
        assert_eq!(algebra_star(&c), c_star);
        assert_eq!(algebra_star(&algebra_star(&c)), c);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let s = s23();
        let g = int(1, 0, 0);
        let a = GroupAlgebraElement::from_terms(&s, [(g.clone(), rat(1)), (g, rat(-1))]);
        assert!(a.is_zero());
        let u = GroupAlgebraElement::identity(&s);
        assert!(u.sub(&u).unwrap().is_zero());
    }

    #[test]
    fn params_mismatch() {
        let a = GroupAlgebraElement::identity(&s23());
        let b = GroupAlgebraElement::identity(&SystemParams::new(3, 5).unwrap());
        assert!(matches!(algebra_mul(&a, &b), Err(Error::ParamsMismatch(..))));
    }

    #[test]
    fn json_roundtrip() {
        let s = s23();
        let a = GroupAlgebraElement::from_terms(
            &s,
            [
                (ge(-7, 2, 1, 1, -1, &s), BigRational::new(3.into(), 4.into())),
                (GroupElement::identity(), rat(2)),
            ],
        );
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(GroupAlgebraElement::from_json(&json, &s).unwrap(), a);
        let single = serde_json::to_string(&int(3, 1, 0)).unwrap();
        assert_eq!(single, r#"{"x":{"num":"3","a":0,"b":0},"m":1,"n":0}"#);
        assert!(GroupAlgebraElement::from_json(r#"{"terms":[{"g":{"x":{"num":"1","a":0,"b":0},"m":0,"n":0},"c":"x"}]}"#, &s).is_err());
    }

    fn arb_elem() -> impl Strategy<Value = GroupElement> {
        (-20i64..20, 0u32..3, 0u32..3, -3i64..4, -3i64..4)
            .prop_map(|(x, a, b, m, n)| GroupElement::new(PqRational::new(x, a, b, 2, 3), m, n))
    }

    fn arb_alg() -> impl Strategy<Value = GroupAlgebraElement> {
        proptest::collection::vec((arb_elem(), -5i64..6), 0..4).prop_map(|ts| {
            GroupAlgebraElement::from_terms(&s23(), ts.into_iter().map(|(g, c)| (g, rat(c))))
        })
    }

    proptest! {
        #[test]
        fn group_axioms(g in arb_elem(), h in arb_elem(), k in arb_elem()) {
            let s = s23();
            prop_assert_eq!(
                group_mul(&s, &group_mul(&s, &g, &h), &k),
                group_mul(&s, &g, &group_mul(&s, &h, &k))
            );
            prop_assert_eq!(group_mul(&s, &g, &GroupElement::identity()), g.clone());
            prop_assert!(group_mul(&s, &g, &group_inv(&s, &g)).is_identity());
            prop_assert!(group_mul(&s, &group_inv(&s, &g), &g).is_identity());
        }

        #[test]
        fn conjugation_closed_forms(g in arb_elem(), k in 1i64..6) {
            let s = s23();
            let by_shift = conjugate(&s, &GroupElement::shift(k, 0), &g);
            prop_assert_eq!(by_shift, GroupElement::new(g.x.scale(k, 0, 2, 3), g.m, g.n));
            let by_trans = conjugate(&s, &GroupElement::translation(k), &g);
            let factor = BigRational::one() - pq_power(2, 3, g.m, g.n);
            let shifted = g.x.to_rational(2, 3) + factor * rat(k);
            prop_assert_eq!(by_trans.x.to_rational(2, 3), shifted);
            prop_assert_eq!((by_trans.m, by_trans.n), (g.m, g.n));
        }

        #[test]
        fn icc_conjugates_are_distinct(g in arb_elem()) {
            prop_assume!(!g.is_identity());
            let out = icc_witness(&s23(), &g, 20).unwrap();
            let distinct: BTreeSet<_> = out.iter().collect();
            prop_assert_eq!(distinct.len(), 20);
        }

        #[test]
        fn algebra_laws(a in arb_alg(), b in arb_alg(), c in arb_alg()) {
            let ab_c = algebra_mul(&algebra_mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = algebra_mul(&a, &algebra_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = algebra_mul(&a, &b.add(&c).unwrap()).unwrap();
            let rhs = algebra_mul(&a, &b).unwrap().add(&algebra_mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let star_ab = algebra_star(&algebra_mul(&a, &b).unwrap());
            prop_assert_eq!(star_ab, algebra_mul(&algebra_star(&b), &algebra_star(&a)).unwrap());
        }
    }
}
