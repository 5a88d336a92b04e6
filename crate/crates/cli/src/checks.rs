//! Oracle suites behind `xpq check`. Every suite compares library output
//! with an independent computation (brute force, machine-integer
//! arithmetic, or a closed form) and reports the first disagreement.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use xpq_core::dynamics::{
    enumerate_minimal_sets, fixed_points, orbit_of, orbits_with_denominator, OrbitData,
    SolenoidPoint, SystemParams,
};
use xpq_core::exact::{Cyclotomic, QmodZ};
use xpq_core::groupalg::{algebra_mul, algebra_star, icc_witness, GroupAlgebraElement, GroupElement};
use xpq_core::ktheory::{k_theory_of_group, mult_map_ker_coker, FgAbGroup};
use xpq_core::primspace::{
    closed_intersection, closed_union, closure, limit_set, specializes, ClosedSetDesc, PrimPoint,
    SequenceDesc, SequenceTail,
};
use xpq_core::traces::{
    average_over_character_level, check_pq_invariance, moments, nonfaithful_witness, trace_eval,
    TraceSpec,
};

use crate::gen;

/// Why a suite failed. Domain errors raised mid-suite count as failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure(pub String);

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<xpq_core::Error> for CheckFailure {
    fn from(e: xpq_core::Error) -> Self {
        CheckFailure(format!("unexpected error: {e}"))
    }
}

type Outcome = Result<String, CheckFailure>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(CheckFailure(format!($($fmt)+)));
        }
    };
}

/// Sizes of the randomized suites. Defaults are the acceptance sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    pub trace_pairs: usize,
    pub positivity_samples: usize,
    pub unitaries: usize,
    pub icc_elements: usize,
    pub icc_conjugates: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            trace_pairs: 500,
            positivity_samples: 500,
            unitaries: 200,
            icc_elements: 100,
            icc_conjugates: 50,
        }
    }
}

impl CheckConfig {
    /// Scales every random count by `trials / 500`, at least one each.
    pub fn with_trials(mut self, trials: usize) -> Self {
        let scale = |n: usize| (n * trials / 500).max(1);
        self.trace_pairs = scale(self.trace_pairs);
        self.positivity_samples = scale(self.positivity_samples);
        self.unitaries = scale(self.unitaries);
        self.icc_elements = scale(self.icc_elements);
        self
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Suite {
    pub criterion: u8,
    pub name: &'static str,
    run: fn(&CheckConfig) -> Outcome,
}

impl Suite {
    pub fn run(&self, cfg: &CheckConfig) -> Report {
        let outcome = (self.run)(cfg);
        Report {
            criterion: self.criterion,
            suite: self.name,
            passed: outcome.is_ok(),
            detail: match outcome {
                Ok(d) => d,
                Err(f) => f.0,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub criterion: u8,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub const SUITES: [Suite; 12] = [
    Suite { criterion: 1, name: "ktheory", run: ktheory },
    Suite { criterion: 2, name: "lemma36", run: lemma36 },
    Suite { criterion: 3, name: "stabilizer", run: stabilizer_duality },
    Suite { criterion: 4, name: "fixed-points", run: fixed_point_count },
    Suite { criterion: 5, name: "trace-axioms", run: trace_axioms },
    Suite { criterion: 6, name: "positivity", run: positivity },
    Suite { criterion: 7, name: "nonfaithful", run: nonfaithful },
    Suite { criterion: 8, name: "moments", run: moment_invariance },
    Suite { criterion: 9, name: "barycenter", run: barycenter },
    Suite { criterion: 10, name: "prim", run: prim_laws },
    Suite { criterion: 11, name: "icc", run: icc },
    Suite { criterion: 12, name: "faithful", run: unique_faithful },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES
        .iter()
        .find(|s| s.name == name || s.criterion.to_string() == name)
}

fn s23() -> SystemParams {
    SystemParams::new(2, 3).expect("valid pair")
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cyclic(n: u64) -> Result<FgAbGroup, CheckFailure> {
    Ok(FgAbGroup::from_orders(0, [BigInt::from(n)])?)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let (mut acc, mut b) = (1 % m, base % m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Inverse mod `m` by exhaustive search; `m` is small in every suite.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    (0..m).find(|&x| (a % m) * x % m == 1 % m)
}

/// `p^e mod m` for signed `e`, with `p` invertible mod `m`.
fn pow_mod_signed(base: u64, e: i64, m: u64) -> u64 {
    let x = pow_mod(base, e.unsigned_abs(), m);
    if e >= 0 {
        x
    } else {
        inv_mod(x, m).expect("unit")
    }
}

fn ktheory(_: &CheckConfig) -> Outcome {
    let two = |tors: &[u64]| FgAbGroup::from_orders(2, tors.iter().map(|&t| BigInt::from(t)));
    let r = k_theory_of_group(2, 3)?;
    ensure!(r.k0 == FgAbGroup::free(2) && r.k1 == FgAbGroup::free(2), "(2,3): got K0 = {}, K1 = {}", r.k0, r.k1);
    let r = k_theory_of_group(3, 5)?;
    let z2_2 = two(&[2])?;
    ensure!(r.k0 == z2_2 && r.k1 == z2_2, "(3,5): got K0 = {}, K1 = {}", r.k0, r.k1);
    let mut pairs = 0;
    for p in 2u64..=30 {
        for q in 2u64..=30 {
            let g = gcd_u64(p - 1, q - 1);
            let expected = if g == 1 {
                FgAbGroup::free(2)
            } else {
                FgAbGroup::new(2, vec![BigInt::from(g)])?
            };
            let r = k_theory_of_group(p, q)?;
            ensure!(
                r.k0 == expected && r.k1 == expected && r.matches,
                "({p},{q}): K0 = {}, K1 = {}, expected {expected}",
                r.k0,
                r.k1
            );
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs agree with Z^2 + Z/gcd(p-1,q-1)"))
}

fn lemma36(_: &CheckConfig) -> Outcome {
    let mut cases = 0;
    for n in 1u64..=60 {
        for m in 1..=n {
            let kernel_size = (0..n).filter(|x| m * x % n == 0).count() as u64;
            let image: BTreeSet<u64> = (0..n).map(|x| m * x % n).collect();
            let coker_size = n / image.len() as u64;
            let g = gcd_u64(m, n);
            ensure!(kernel_size == g && coker_size == g, "brute force for m={m}, n={n}");
            // subgroups and quotients of a cyclic group are cyclic
            let (ker, coker) = mult_map_ker_coker(m, n)?;
            ensure!(ker == cyclic(kernel_size)?, "ker for m={m}, n={n}: {ker}");
            ensure!(coker == cyclic(coker_size)?, "coker for m={m}, n={n}: {coker}");
            cases += 1;
        }
    }
    Ok(format!("{cases} (m, n) pairs"))
}

/// Size of the orbit of `1/r` under multiplication by `p` and `q` mod `r`.
fn brute_orbit_size(p: u64, q: u64, r: u64) -> u64 {
    let mut seen = BTreeSet::from([1 % r]);
    let mut frontier = vec![1 % r];
    while let Some(a) = frontier.pop() {
        for k in [p, q] {
            let b = a * k % r;
            if seen.insert(b) {
                frontier.push(b);
            }
        }
    }
    seen.len() as u64
}

fn stabilizer_duality(_: &CheckConfig) -> Outcome {
    let mut checked = 0;
    for (p, q) in [(2u64, 3u64), (3, 5), (2, 5)] {
        let params = SystemParams::new(p, q)?;
        for r in 1u64..=500 {
            if gcd_u64(r, p * q) != 1 {
                continue;
            }
            let x = SolenoidPoint::new(&params, QmodZ::new(1, r)?)?;
            let orbit = orbit_of(&params, &x)?;
            let lattice = orbit.stabilizer();
            let size = brute_orbit_size(p, q, r);
            ensure!(
                lattice.index() == size && orbit.len() as u64 == size,
                "({p},{q}) r={r}: index {} vs orbit size {size}",
                lattice.index()
            );
            for [m, n] in lattice.basis() {
                let v = pow_mod_signed(p, m, r) * pow_mod_signed(q, n, r) % r;
                ensure!(v == 1 % r, "({p},{q}) r={r}: p^{m} q^{n} = {v} mod r");
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} denominators"))
}

fn fixed_point_count(_: &CheckConfig) -> Outcome {
    const BOUND: u64 = 5000;
    let params = s23();
    let bound = BigInt::from(BOUND);
    let dens: Vec<u64> = (1..=BOUND).filter(|&d| gcd_u64(d, 6) == 1).collect();
    let mut shifts = 0;
    for m in -5i64..=5 {
        for n in -5i64..=5 {
            if (m, n) == (0, 0) {
                continue;
            }
            // a/d with gcd(a, d) = 1 is fixed iff 2^m 3^n = 1 mod d
            let mut brute = BTreeSet::new();
            for &d in &dens {
                if pow_mod_signed(2, m, d) * pow_mod_signed(3, n, d) % d == 1 % d {
                    for a in 0..d {
                        if gcd_u64(a, d) == 1 {
                            brute.insert(QmodZ::new(a, d)?);
                        }
                    }
                }
            }
            let fp = fixed_points(&params, (m, n), Some(&bound))?;
            let listed: BTreeSet<QmodZ> = fp.points.iter().cloned().collect();
            ensure!(listed == brute, "({m},{n}): {} listed vs {} by brute force", listed.len(), brute.len());
            if fp.count <= bound {
                ensure!(
                    BigInt::from(brute.len()) == fp.count,
                    "({m},{n}): count {} vs brute force {}",
                    fp.count,
                    brute.len()
                );
            }
            shifts += 1;
        }
    }
    let fp = fixed_points(&params, (1, 1), None)?;
    let expected: Vec<QmodZ> = (0..5).map(|a| QmodZ::new(a, 5)).collect::<Result<_, _>>()?;
    ensure!(fp.count == BigInt::from(5) && fp.points == expected, "Fix of the shift (1,1): {:?}", fp.points);
    Ok(format!("{shifts} shifts over denominators <= {BOUND}"))
}

fn trace_orbits(params: &SystemParams) -> Result<Vec<OrbitData>, CheckFailure> {
    let mut out = Vec::new();
    for r in [1u64, 5, 7, 11, 13] {
        out.extend(orbits_with_denominator(params, &BigInt::from(r))?);
    }
    Ok(out)
}

fn specs_for<R: Rng>(rng: &mut R, orbit: &OrbitData) -> [TraceSpec; 3] {
    [
        TraceSpec::finite_orbit(orbit.clone(), gen::character_coord(rng), gen::character_coord(rng)),
        TraceSpec::Canonical,
        TraceSpec::OrbitMeasure { orbit: orbit.clone() },
    ]
}

fn trace_axioms(cfg: &CheckConfig) -> Outcome {
    let params = s23();
    let mut rng = gen::stream(cfg.seed, "trace-axioms");
    let one = GroupAlgebraElement::identity(&params);
    let mut evals = 0;
    for orbit in trace_orbits(&params)? {
        for _ in 0..cfg.trace_pairs {
            let a = gen::algebra_element(&mut rng, &params, 3);
            let b = gen::algebra_element(&mut rng, &params, 3);
            let ab = algebra_mul(&a, &b)?;
            let ba = algebra_mul(&b, &a)?;
            for spec in specs_for(&mut rng, &orbit) {
                let kind = spec.kind();
                ensure!(trace_eval(&spec, &ab)? == trace_eval(&spec, &ba)?, "{kind} r={}: tau(ab) != tau(ba)", orbit.denominator());
                ensure!(trace_eval(&spec, &one)? == Cyclotomic::one(), "{kind}: tau(1) != 1");
                ensure!(
                    trace_eval(&spec, &algebra_star(&a))? == trace_eval(&spec, &a)?.conj(),
                    "{kind} r={}: tau(a*) != conj tau(a)",
                    orbit.denominator()
                );
                evals += 1;
            }
        }
    }
    let five = orbits_with_denominator(&params, &BigInt::from(5))?;
    let spec = TraceSpec::finite_orbit(five[0].clone(), QmodZ::zero(), QmodZ::zero());
    let u = GroupAlgebraElement::unit(&params, GroupElement::translation(1));
    let value = trace_eval(&spec, &u)?;
    // (ζ + ζ² + ζ³ + ζ⁴) / 4 with ζ = e^{2πi/5}
    let oracle = Cyclotomic::from_exponent_sum(5, (1..5).map(|e| (e, rat(1, 4))));
    ensure!(value == oracle && value.as_rational() == Some(rat(-1, 4)), "worked example: {:?}", value.approx());
    ensure!(value.lift(5)? == Cyclotomic::from_rational(rat(-1, 4)).lift(5)?, "worked example at level 5");
    Ok(format!("{evals} (spec, pair) checks; worked example = -1/4"))
}

fn positivity(cfg: &CheckConfig) -> Outcome {
    let params = s23();
    let orbits = trace_orbits(&params)?;
    let mut rng = gen::stream(cfg.seed, "positivity");
    let mut worst = f64::INFINITY;
    for _ in 0..cfg.positivity_samples {
        let a = gen::algebra_element(&mut rng, &params, 4);
        let aa = algebra_mul(&algebra_star(&a), &a)?;
        let orbit = &orbits[rng.gen_range(0..orbits.len())];
        for spec in specs_for(&mut rng, orbit) {
            let v = trace_eval(&spec, &aa)?.approx();
            ensure!(v.re >= -1e-9 && v.im.abs() <= 1e-9, "{}: tau(a*a) = {} + {}i", spec.kind(), v.re, v.im);
            worst = worst.min(v.re);
        }
    }
    Ok(format!("{} samples, least real part {worst:e}", cfg.positivity_samples))
}

fn character_grid() -> Result<Vec<(QmodZ, QmodZ)>, CheckFailure> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            out.push((QmodZ::new(i, 4)?, QmodZ::new(j, 4)?));
        }
    }
    Ok(out)
}

fn nonfaithful(_: &CheckConfig) -> Outcome {
    let params = s23();
    let grid = character_grid()?;
    let two = Cyclotomic::from_rational(rat(2, 1));
    let orbits = enumerate_minimal_sets(&params, 50)?;
    for orbit in &orbits {
        let w = nonfaithful_witness(orbit);
        ensure!(!w.is_zero(), "witness for r={} is zero", orbit.denominator());
        let ww = algebra_mul(&algebra_star(&w), &w)?;
        for (t1, t2) in &grid {
            let spec = TraceSpec::finite_orbit(orbit.clone(), t1.clone(), t2.clone());
            ensure!(trace_eval(&spec, &ww)?.is_zero(), "r={} chi=({t1},{t2}) does not vanish", orbit.denominator());
        }
        ensure!(trace_eval(&TraceSpec::Canonical, &ww)? == two, "canonical tau(w*w) != 2 for r={}", orbit.denominator());
    }
    Ok(format!("{} orbits x {} characters", orbits.len(), grid.len()))
}

fn moment_invariance(_: &CheckConfig) -> Outcome {
    const N: u32 = 200;
    let params = s23();
    let orbits = enumerate_minimal_sets(&params, 100)?;
    let mut specs = vec![TraceSpec::Canonical];
    for orbit in &orbits {
        specs.push(TraceSpec::finite_orbit(orbit.clone(), QmodZ::zero(), QmodZ::zero()));
        specs.push(TraceSpec::OrbitMeasure { orbit: orbit.clone() });
    }
    for spec in &specs {
        let seq = moments(spec, &params, N)?;
        ensure!(check_pq_invariance(&seq, &params)?, "{} not invariant", spec.kind());
        // float oracle: mean of e^{2πi n a / r} over the orbit
        if let Some(orbit) = spec.orbit() {
            let r = orbit.denominator().to_f64().expect("small");
            for n in [-7i64, 1, 12, 97] {
                let (mut re, mut im) = (0.0, 0.0);
                for z in orbit.points() {
                    let theta = std::f64::consts::TAU * z.coord().num().to_f64().expect("small") * n as f64 / r;
                    re += theta.cos();
                    im += theta.sin();
                }
                let len = orbit.len() as f64;
                let (re, im) = (re / len, im / len);
                let v = seq.get(n).expect("in range").approx();
                ensure!(
                    (v.re - re).abs() < 1e-9 && (v.im - im).abs() < 1e-9,
                    "moment {n} of r={}: {} + {}i vs {re} + {im}i",
                    orbit.denominator(),
                    v.re,
                    v.im
                );
            }
        } else {
            ensure!(
                seq.values().iter().all(|(&n, v)| *v == if n == 0 { Cyclotomic::one() } else { Cyclotomic::zero() }),
                "canonical moments are not the delta sequence"
            );
        }
    }
    Ok(format!("{} specs, |n| <= {N}", specs.len()))
}

/// `τ_{x,1}(u_g)` straight from the orbit: mean of `e(⟨z, y⟩)` at level `r`.
fn orbit_mean_oracle(orbit: &OrbitData, g: &GroupElement) -> Cyclotomic {
    let r = orbit.denominator().to_u64().expect("small");
    let (p, q) = (orbit.params().p(), orbit.params().q());
    let scale = inv_mod(pow_mod(p, u64::from(g.x.a()), r) * pow_mod(q, u64::from(g.x.b()), r) % r, r).expect("unit");
    let k = g.x.num().mod_floor(&BigInt::from(r)).to_u64().expect("reduced");
    let weight = rat(1, orbit.len() as i64);
    Cyclotomic::from_exponent_sum(
        r as usize,
        orbit.points().iter().map(|z| {
            let a = z.coord().num().to_u64().expect("small");
            ((a * k % r * scale % r) as usize, weight.clone())
        }),
    )
}

fn barycenter(cfg: &CheckConfig) -> Outcome {
    let params = s23();
    let mut rng = gen::stream(cfg.seed, "barycenter");
    let mut kept = 0;
    let mut killed = 0;
    for r in [5u64, 7, 13] {
        for orbit in orbits_with_denominator(&params, &BigInt::from(r))? {
            let unitaries: Vec<GroupElement> = (0..cfg.unitaries)
                .map(|_| gen::unitary_near_lattice(&mut rng, &orbit))
                .collect();
            for k in 1u32..=6 {
                let kk = i64::from(k);
                for g in &unitaries {
                    let a = GroupAlgebraElement::unit(&params, g.clone());
                    let avg = average_over_character_level(&orbit, k, &a)?;
                    let predicted = match orbit.stabilizer().coordinates(g.m, g.n) {
                        Some((c1, c2)) if c1 % kk == 0 && c2 % kk == 0 => {
                            kept += 1;
                            orbit_mean_oracle(&orbit, g)
                        }
                        _ => {
                            killed += 1;
                            Cyclotomic::zero()
                        }
                    };
                    ensure!(avg == predicted, "r={r} k={k} g=({:?},{},{})", g.x.to_repr(), g.m, g.n);
                }
            }
        }
    }
    ensure!(kept > 0 && killed > 0, "sample never exercised both branches");
    Ok(format!("{kept} kept, {killed} killed"))
}

fn prim_laws(cfg: &CheckConfig) -> Outcome {
    let params = s23();
    let orbits = enumerate_minimal_sets(&params, 50)?;
    let mut rng = gen::stream(cfg.seed, "prim");
    let mut sample = vec![PrimPoint::Infinity];
    for orbit in &orbits {
        let [[a, _], [_, c]] = orbit.stabilizer().basis();
        ensure!(orbit.stabilizer().rank() == 2 && a > 0 && c > 0, "stabilizer of r={} is not rank 2", orbit.denominator());
        for _ in 0..3 {
            sample.push(PrimPoint::orbit_char(orbit.clone(), gen::character_coord(&mut rng), gen::character_coord(&mut rng)));
        }
    }
    let sample: Vec<PrimPoint> = {
        let mut seen = Vec::new();
        for x in sample {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
        seen
    };
    let all = closure(&[PrimPoint::Infinity]);
    ensure!(all == ClosedSetDesc::All, "closure of infinity is not everything");
    for x in &sample {
        ensure!(specializes(&PrimPoint::Infinity, x), "infinity does not specialize to {x:?}");
        if let PrimPoint::OrbitChar { orbit, chi } = x {
            let c = closure(std::slice::from_ref(x));
            let members: Vec<&PrimPoint> = sample.iter().filter(|y| c.contains(y)).collect();
            ensure!(members == vec![x], "point closure of r={} is not a single point", orbit.denominator());
            ensure!(!specializes(x, &PrimPoint::Infinity), "orbit point specializes to infinity");
            let prefix = (0..rng.gen_range(0..4)).map(|_| sample[rng.gen_range(0..sample.len())].clone()).collect();
            let escaping = SequenceDesc { prefix, tail: SequenceTail::Escaping };
            ensure!(limit_set(&escaping) == all, "escaping tail does not converge everywhere");
            let constant = SequenceDesc {
                prefix: vec![PrimPoint::Infinity],
                tail: SequenceTail::ConstantOrbit { orbit: orbit.clone(), chi_limit: chi.clone() },
            };
            ensure!(limit_set(&constant) == c, "constant-orbit limit is not the limit point");
        }
    }
    let subsets = 400;
    for _ in 0..subsets {
        let pick = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<PrimPoint> {
            (0..n).map(|_| sample[rng.gen_range(1..sample.len())].clone()).collect()
        };
        let n = rng.gen_range(0..6);
        let mut small = pick(&mut rng, n);
        if rng.gen_bool(0.1) {
            small.push(PrimPoint::Infinity);
        }
        let extra = rng.gen_range(0..4);
        let mut big = small.clone();
        big.extend(pick(&mut rng, extra));
        let (cs, cb) = (closure(&small), closure(&big));
        ensure!(small.iter().all(|x| cs.contains(x)), "closure is not extensive");
        ensure!(cs.is_subset(&cb), "closure is not monotone");
        let inside: Vec<PrimPoint> = sample.iter().filter(|y| cs.contains(y)).cloned().collect();
        let again = if cs == ClosedSetDesc::All { closure(&[PrimPoint::Infinity]) } else { closure(&inside) };
        ensure!(again == cs, "closure is not idempotent");
        let u = closed_union(&cs, &cb);
        let i = closed_intersection(&cs, &cb);
        ensure!(u == cb && i == cs, "union/intersection disagree with inclusion");
        let json = serde_json::to_string(&u).map_err(|e| CheckFailure(e.to_string()))?;
        let back: ClosedSetDesc = serde_json::from_str(&json).map_err(|e| CheckFailure(e.to_string()))?;
        ensure!(back == u, "closed set JSON does not round-trip");
    }
    Ok(format!("{} orbits, {} sample points, {subsets} random subsets", orbits.len(), sample.len()))
}

fn icc(cfg: &CheckConfig) -> Outcome {
    let params = s23();
    let mut rng = gen::stream(cfg.seed, "icc");
    for _ in 0..cfg.icc_elements {
        let g = gen::nonidentity_element(&mut rng, &params);
        let conj = icc_witness(&params, &g, cfg.icc_conjugates)?;
        let distinct: BTreeSet<&GroupElement> = conj.iter().collect();
        ensure!(conj.len() == cfg.icc_conjugates && distinct.len() == conj.len(), "repeated conjugates of {:?}", g.to_repr());
        // conjugation preserves the Z² part
        ensure!(conj.iter().all(|c| (c.m, c.n) == (g.m, g.n) && !c.is_identity()), "bad conjugate of {:?}", g.to_repr());
    }
    Ok(format!("{} elements x {} conjugates", cfg.icc_elements, cfg.icc_conjugates))
}

fn unique_faithful(_: &CheckConfig) -> Outcome {
    let params = s23();
    let grid = character_grid()?;
    let orbits = enumerate_minimal_sets(&params, 50)?;
    let mut specs = vec![TraceSpec::Canonical];
    for orbit in &orbits {
        specs.push(TraceSpec::OrbitMeasure { orbit: orbit.clone() });
        for (t1, t2) in &grid {
            specs.push(TraceSpec::finite_orbit(orbit.clone(), t1.clone(), t2.clone()));
        }
    }
    let faithful_extreme: Vec<&TraceSpec> = specs.iter().filter(|s| s.is_extreme() && s.is_faithful()).collect();
    ensure!(faithful_extreme == vec![&TraceSpec::Canonical], "faithful extreme specs: {}", faithful_extreme.len());
    for spec in &specs {
        let Some(orbit) = spec.orbit() else { continue };
        let w = nonfaithful_witness(orbit);
        let ww = algebra_mul(&algebra_star(&w), &w)?;
        ensure!(!spec.is_faithful() && trace_eval(spec, &ww)?.is_zero(), "{} on r={} is faithful on its witness", spec.kind(), orbit.denominator());
        ensure!(!trace_eval(&TraceSpec::Canonical, &ww)?.is_zero(), "canonical trace vanishes on a witness");
    }
    Ok(format!("1 of {} specs is faithful and extreme", specs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_arithmetic() {
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod_signed(2, -1, 5), 3);
        assert_eq!(inv_mod(3, 1), Some(0));
        assert_eq!(brute_orbit_size(2, 3, 7), 6);
        assert_eq!(brute_orbit_size(2, 3, 1), 1);
    }

    #[test]
    fn suite_lookup() {
        assert_eq!(suite("icc").unwrap().criterion, 11);
        assert_eq!(suite("4").unwrap().name, "fixed-points");
        assert!(suite("nope").is_none());
        let names: BTreeSet<_> = SUITES.iter().map(|s| s.name).collect();
        assert_eq!(names.len(), SUITES.len());
    }

    #[test]
    fn small_randomized_suites_pass() {
        let cfg = CheckConfig::default().with_trials(10);
        for name in ["trace-axioms", "positivity", "barycenter", "icc", "ktheory"] {
            let report = suite(name).unwrap().run(&cfg);
            assert!(report.passed, "{name}: {}", report.detail);
        }
    }
}
