use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `2 <= d₁ | d₂ | … | d_k`.
///
/// Standard generators list the free summands first, then the cyclic ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbGroup {
    rank: usize,
    #[serde(with = "crate::wire::bigint_vec")]
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`, trivial for `n = 1`.
    pub fn cyclic(n: impl Into<BigInt>) -> Result<Self> {
        Self::from_orders(0, [n.into()])
    }

    /// `Z^rank ⊕ ⊕ Z/n_i` for arbitrary positive orders, brought into
    /// invariant-factor form.
    pub fn from_orders<I: IntoIterator<Item = BigInt>>(rank: usize, orders: I) -> Result<Self> {
        let orders: Vec<BigInt> = orders.into_iter().collect();
        if let Some(bad) = orders.iter().find(|n| !n.is_positive()) {
            return Err(Error::OutOfRange(format!("cyclic order {bad} must be positive")));
        }
        let k = orders.len();
        let snf = smith_normal_form(&IntMatrix::diagonal(k, k, &orders));
        Ok(FgAbGroup {
            rank,
            torsion: snf.diagonal().into_iter().filter(|d| !d.is_one()).collect(),
        })
    }

    /// Validates the divisibility chain instead of normalizing.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if torsion.iter().any(|d| d < &BigInt::from(2)) {
            return Err(Error::OutOfRange("torsion coefficients must be >= 2".into()));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::OutOfRange("torsion coefficients must form a divisibility chain".into()));
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of generator `i`: `None` for free generators.
    pub fn generator_order(&self, i: usize) -> Option<&BigInt> {
        i.checked_sub(self.rank).map(|k| &self.torsion[k])
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Cardinality, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        Self::from_orders(
            self.rank + other.rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
        .expect("orders are >= 2")
    }

    /// Relation matrix: one column `d·e_i` per torsion generator.
    fn relations(&self) -> IntMatrix {
        let n = self.num_generators();
        let mut r = IntMatrix::zeros(n, self.torsion.len());
        for (k, d) in self.torsion.iter().enumerate() {
            r[(self.rank + k, k)] = d.clone();
        }
        r
    }

    /// Quotient `Z^n / im(relations)` read off a Smith normal form.
    fn from_presentation(generators: usize, relations: &IntMatrix) -> FgAbGroup {
        let diag = smith_normal_form(relations).diagonal();
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        FgAbGroup {
            rank: generators - nonzero,
            torsion: diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rank: usize,
            #[serde(with = "crate::wire::bigint_vec")]
            torsion: Vec<BigInt>,
        }
        let raw = Raw::deserialize(d)?;
        FgAbGroup::new(raw.rank, raw.torsion).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A homomorphism given by the images of the standard generators (columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FgAbMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl FgAbMap {
    /// Checks shape and that each torsion generator of order `d` maps to an
    /// element killed by `d`. Entries in torsion rows are reduced.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        let (rows, cols) = (target.num_generators(), source.num_generators());
        if (matrix.rows(), matrix.cols()) != (rows, cols) {
            return Err(Error::IncompatibleMap(format!(
                "matrix is {}x{}, expected {rows}x{cols} for {source} -> {target}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mut matrix = matrix;
        for j in 0..cols {
            for i in 0..rows {
                let entry = matrix[(i, j)].clone();
                let ok = match (source.generator_order(j), target.generator_order(i)) {
                    (_, Some(t)) => {
                        matrix[(i, j)] = entry.mod_floor(t);
                        source.generator_order(j).is_none_or(|d| (d * &entry).is_multiple_of(t))
                    }
                    (Some(_), None) => entry.is_zero(),
                    (None, None) => true,
                };
                if !ok {
                    return Err(Error::IncompatibleMap(format!(
                        "generator {j} of {source} cannot map to column {} in {target}",
                        (0..rows).map(|i| matrix[(i, j)].to_string()).collect::<Vec<_>>().join(",")
                    )));
                }
            }
        }
        Ok(FgAbMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self::new(g.clone(), g.clone(), IntMatrix::identity(g.num_generators())).expect("identity")
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        let m = IntMatrix::zeros(target.num_generators(), source.num_generators());
        Self::new(source.clone(), target.clone(), m).expect("zero map")
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn sub(&self, other: &FgAbMap) -> Result<FgAbMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::IncompatibleMap("maps have different domains".into()));
        }
        Self::new(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix)?)
    }

    /// Image of a coordinate vector in the source, reduced in the target.
    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let col = IntMatrix::from_rows(x.iter().map(|v| vec![v.clone()]).collect())?;
        let col = if x.is_empty() { IntMatrix::zeros(0, 1) } else { col };
        let y = self.matrix.mul(&col)?;
        Ok((0..y.rows())
            .map(|i| match self.target.generator_order(i) {
                Some(d) => y[(i, 0)].mod_floor(d),
                None => y[(i, 0)].clone(),
            })
            .collect())
    }
}

/// `ker f`, via the kernel of `[M | R_t]` projected to the source and
/// taken modulo the source relations.
pub fn map_kernel(f: &FgAbMap) -> FgAbGroup {
    let ns = f.source.num_generators();
    if ns == 0 {
        return FgAbGroup::trivial();
    }
    let combined = f.matrix.hconcat(&f.target.relations()).expect("same row count");
    let snf = smith_normal_form(&combined);
    let rank = snf.rank();
    // columns of V past the rank span ker[M | R_t]; keep the source block
    let lifted = snf.v.submatrix(0, ns, rank, combined.cols());

    // basis of the column span of `lifted`: U⁻¹ columns scaled by d_j
    let span = smith_normal_form(&lifted);
    let k = span.rank();
    let d = span.diagonal();
    let coords = span.u.mul(&f.source.relations()).expect("shapes agree");
    let mut rel = IntMatrix::zeros(k, coords.cols());
    for i in 0..k {
        for j in 0..coords.cols() {
            let (q, r) = coords[(i, j)].div_rem(&d[i]);
            debug_assert!(r.is_zero(), "source relations lie in the kernel");
            rel[(i, j)] = q;
        }
    }
    FgAbGroup::from_presentation(k, &rel)
}

/// `coker f = Z^{n_t} / (im M + im R_t)`.
pub fn map_cokernel(f: &FgAbMap) -> FgAbGroup {
    let combined = f.matrix.hconcat(&f.target.relations()).expect("same row count");
    FgAbGroup::from_presentation(f.target.num_generators(), &combined)
}

/// Kernel and cokernel of `x ↦ m·x` on `Z/n`.
pub fn mult_map_ker_coker(m: u64, n: u64) -> Result<(FgAbGroup, FgAbGroup)> {
    if m == 0 || n == 0 {
        return Err(Error::OutOfRange("m and n must be positive".into()));
    }
    let g = FgAbGroup::cyclic(n)?;
    let k = g.num_generators();
    let mut mat = IntMatrix::zeros(k, k);
    for i in 0..k {
        mat[(i, i)] = BigInt::from(m);
    }
    let f = FgAbMap::new(g.clone(), g, mat)?;
    Ok((map_kernel(&f), map_cokernel(&f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| x.into()).collect()
    }

    fn grp(rank: usize, t: &[i64]) -> FgAbGroup {
        FgAbGroup::from_orders(rank, b(t)).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(grp(0, &[2, 3]), grp(0, &[6]));
        assert_eq!(grp(1, &[4, 6]).torsion(), b(&[2, 12]).as_slice());
        assert_eq!(grp(0, &[1, 1]), FgAbGroup::trivial());
        assert!(FgAbGroup::new(0, b(&[4, 6])).is_err());
        assert!(FgAbGroup::new(0, b(&[1])).is_err());
        assert_eq!(grp(2, &[2]).to_string(), "Z^2 + Z/2");
        assert_eq!(grp(1, &[]).direct_sum(&grp(0, &[3])).direct_sum(&grp(1, &[2])), grp(2, &[6]));
        let json = serde_json::to_string(&grp(2, &[2])).unwrap();
        assert_eq!(json, r#"{"rank":2,"torsion":[2]}"#);
        assert_eq!(serde_json::from_str::<FgAbGroup>(&json).unwrap(), grp(2, &[2]));
        assert!(serde_json::from_str::<FgAbGroup>(r#"{"rank":0,"torsion":[2,3]}"#).is_err());
    }

    #[test]
    fn lemma_examples() {
        let z2 = grp(0, &[2]);
        assert_eq!(mult_map_ker_coker(2, 4).unwrap(), (z2.clone(), z2));
        let triv = FgAbGroup::trivial();
        assert_eq!(mult_map_ker_coker(3, 7).unwrap(), (triv.clone(), triv.clone()));
        assert_eq!(mult_map_ker_coker(5, 1).unwrap(), (triv.clone(), triv));
    }

    #[test]
    fn kernel_cokernel_examples() {
        let z = FgAbGroup::free(1);
        let zero = FgAbMap::zero(&z, &z);
        assert_eq!((map_kernel(&zero), map_cokernel(&zero)), (z.clone(), z.clone()));
        for (p, q, expect) in [(2i64, 3i64, grp(1, &[])), (3, 5, grp(1, &[2]))] {
            let g = grp(1, &[p * q - 1]);
            let m = IntMatrix::from_i64(&[&[0, 0], &[0, p - 1]]);
            let f = FgAbMap::new(g.clone(), g, m).unwrap();
            assert_eq!(map_kernel(&f), expect);
            assert_eq!(map_cokernel(&f), expect);
        }
        // Z --2--> Z: trivial kernel, cokernel Z/2
        let two = FgAbMap::new(z.clone(), z.clone(), IntMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!((map_kernel(&two), map_cokernel(&two)), (FgAbGroup::trivial(), grp(0, &[2])));
        // Z -> Z/4, 1 ↦ 2: kernel 2Z ≅ Z, cokernel Z/2
        let f = FgAbMap::new(z, grp(0, &[4]), IntMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!((map_kernel(&f), map_cokernel(&f)), (FgAbGroup::free(1), grp(0, &[2])));
    }

    #[test]
    fn incompatible_maps_are_rejected() {
        let z = FgAbGroup::free(1);
        let z4 = grp(0, &[4]);
        assert!(matches!(
            FgAbMap::new(z4.clone(), z.clone(), IntMatrix::from_i64(&[&[1]])),
            Err(Error::IncompatibleMap(_))
        ));
        assert!(FgAbMap::new(z4.clone(), grp(0, &[6]), IntMatrix::from_i64(&[&[1]])).is_err());
        assert!(FgAbMap::new(z4.clone(), grp(0, &[6]), IntMatrix::from_i64(&[&[3]])).is_ok());
        assert!(FgAbMap::new(z4, z, IntMatrix::zeros(2, 1)).is_err());
    }

    /// Elements of a finite group as coordinate vectors.
    fn elements(g: &FgAbGroup) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![]];
        for d in g.torsion() {
            let d: i64 = d.try_into().unwrap();
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |x| {
                        let mut w = v.clone();
                        w.push(x.into());
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// A finite abelian group is determined by the sizes of its d-torsion
    /// subgroups, |G[d]| = Π gcd(d, d_i).
    fn torsion_profile_matches(count: impl Fn(i64) -> usize, g: &FgAbGroup, exponent: i64) -> bool {
        (1..=exponent).all(|d| {
            let expect: BigInt = g.torsion().iter().map(|t| t.gcd(&d.into())).product();
            BigInt::from(count(d)) == expect
        })
    }

    fn arb_finite() -> impl Strategy<Value = FgAbGroup> {
        proptest::collection::vec(1i64..9, 0..3).prop_map(|t| grp(0, &t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn brute_force_kernel_and_cokernel(
            src in arb_finite(),
            tgt in arb_finite(),
            seed in proptest::collection::vec(-20i64..20, 9),
        ) {
            let (ns, nt) = (src.num_generators(), tgt.num_generators());
            // scale each entry so the map is well defined: t/gcd(s, t) divides it
            let mut m = IntMatrix::zeros(nt, ns);
            for i in 0..nt {
                for j in 0..ns {
                    let s = src.generator_order(j).unwrap();
                    let t = tgt.generator_order(i).unwrap();
                    m[(i, j)] = (t / s.gcd(t)) * BigInt::from(seed[3 * i + j]);
                }
            }
            let f = FgAbMap::new(src.clone(), tgt.clone(), m).unwrap();
            let images: Vec<Vec<BigInt>> = elements(&src).iter().map(|x| f.apply(x).unwrap()).collect();
            let zero = vec![BigInt::zero(); nt];
            let kernel: Vec<Vec<BigInt>> = elements(&src)
                .into_iter()
                .zip(&images)
                .filter(|(_, y)| **y == zero)
                .map(|(x, _)| x)
                .collect();
            let ker = map_kernel(&f);
            let coker = map_cokernel(&f);
            prop_assert_eq!(BigInt::from(kernel.len()), ker.order().unwrap());
            let image: std::collections::BTreeSet<Vec<BigInt>> = images.into_iter().collect();
            prop_assert_eq!(BigInt::from(image.len()) * coker.order().unwrap(), tgt.order().unwrap());

            let reduce = |x: &[BigInt], g: &FgAbGroup| -> Vec<BigInt> {
                x.iter().enumerate().map(|(i, v)| v.mod_floor(g.generator_order(i).unwrap())).collect()
            };
            let exponent = 64;
            let ker_count = |d: i64| kernel.iter().filter(|x| {
                let dx: Vec<BigInt> = x.iter().map(|v| v * d).collect();
                reduce(&dx, &src).iter().all(Zero::is_zero)
            }).count();
            prop_assert!(torsion_profile_matches(ker_count, &ker, exponent));
            // d-torsion of the cokernel: cosets y + im f with d·y ∈ im f
            let coker_count = |d: i64| {
                let hits = elements(&tgt).iter().filter(|y| {
                    let dy: Vec<BigInt> = y.iter().map(|v| v * d).collect();
                    image.contains(&reduce(&dy, &tgt))
                }).count();
                hits / image.len()
            };
            prop_assert!(torsion_profile_matches(coker_count, &coker, exponent));
        }
    }
}
