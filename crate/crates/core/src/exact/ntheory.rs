//! Elementary number theory on arbitrary-precision integers.
//!
//! Factorization is trial division followed by Pollard's rho on whatever
//! cofactor is left, provided that cofactor fits in 64 bits. Everything else
//! (Euler's phi, Carmichael's lambda, multiplicative orders, multiplicative
//! independence) is derived from factorizations.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division runs over all candidates below this bound.
const TRIAL_BOUND: u64 = 1 << 16;

/// Prime factorization with strictly increasing primes and positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    fn push(&mut self, p: BigUint, e: u32) {
        match self.factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, k)) => *k += e,
            None => self.factors.push((p, e)),
        }
    }

    fn sort(&mut self) {
        self.factors.sort_by(|a, b| a.0.cmp(&b.0));
    }
}

/// Factors a positive integer.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::OutOfRange("cannot factor 0".into()));
    }
    let mut out = Factorization::default();
    let mut rest = n.clone();

    let mut d = 2u64;
    while d < TRIAL_BOUND {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            e += 1;
        }
        if e > 0 {
            out.push(dd, e);
        }
        d += if d == 2 { 1 } else { 2 };
    }

    if !rest.is_one() {
        let bound = BigUint::from(TRIAL_BOUND);
        if rest < &bound * &bound {
            out.push(rest, 1);
        } else if let Some(small) = rest.to_u64() {
            let mut primes = Vec::new();
            factor_u64(small, &mut primes);
            for p in primes {
                out.push(BigUint::from(p), 1);
            }
        } else {
            return Err(Error::FactorizationTooHard(n.to_string()));
        }
    }
    out.sort();
    Ok(out)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard's rho; n is odd, composite and > 3.
fn rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if n.is_multiple_of(2) {
        out.push(2);
        factor_u64(n / 2, out);
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Inverse of `a` modulo `m` in `[0, m)`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `base^exp mod m` for a possibly negative exponent; `None` when the base is
/// not a unit and the exponent is negative.
pub fn pow_mod_signed(base: &BigInt, exp: i64, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let b = if exp < 0 {
        mod_inverse(base, m)?
    } else {
        base.mod_floor(m)
    };
    Some(b.modpow(&BigInt::from(exp.unsigned_abs()), m))
}

pub fn euler_phi(n: &BigUint) -> Result<BigUint> {
    let f = factorize(n)?;
    Ok(f.factors().iter().fold(BigUint::one(), |acc, (p, e)| {
        acc * p.pow(e - 1) * (p - 1u32)
    }))
}

/// Exponent of the unit group (Z/nZ)^*.
pub fn carmichael_lambda(n: &BigUint) -> Result<BigUint> {
    let f = factorize(n)?;
    let two = BigUint::from(2u32);
    Ok(f.factors().iter().fold(BigUint::one(), |acc, (p, e)| {
        let l = if *p == two && *e >= 3 {
            two.pow(e - 2)
        } else {
            p.pow(e - 1) * (p - 1u32)
        };
        acc.lcm(&l)
    }))
}

/// Least `d >= 1` with `k^d = 1 (mod r)`.
///
/// Starts from the group exponent lambda(r) and strips prime factors while the
/// power stays trivial.
pub fn multiplicative_order(k: &BigInt, r: &BigUint) -> Result<BigUint> {
    if r.is_zero() {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    if r.is_one() {
        return Ok(BigUint::one());
    }
    let m = BigInt::from_biguint(Sign::Plus, r.clone());
    let k = k.mod_floor(&m);
    if !k.gcd(&m).is_one() {
        return Err(Error::NonInvertible {
            value: k.to_string(),
            modulus: r.to_string(),
        });
    }
    let lambda = carmichael_lambda(r)?;
    let mut d = lambda.clone();
    for (p, _) in factorize(&lambda)?.factors() {
        while (&d % p).is_zero() {
            let cand = &d / p;
            if k.modpow(&BigInt::from(cand.clone()), &m).is_one() {
                d = cand;
            } else {
                break;
            }
        }
    }
    Ok(d)
}

/// Smallest positive `(r, s)` with `p^r = q^s`, or `None` when `p` and `q` are
/// multiplicatively independent.
pub fn dependence_witness(p: u64, q: u64) -> Result<Option<(u64, u64)>> {
    if p < 2 || q < 2 {
        return Err(Error::OutOfRange(format!(
            "multiplicative independence needs p, q >= 2, got ({p}, {q})"
        )));
    }
    let fp = factorize(&BigUint::from(p))?;
    let fq = factorize(&BigUint::from(q))?;
    if fp.factors().len() != fq.factors().len() || fp.primes().ne(fq.primes()) {
        return Ok(None);
    }
    let (ep0, eq0) = (fp.factors()[0].1 as u64, fq.factors()[0].1 as u64);
    let g = ep0.gcd(&eq0);
    let (r, s) = (eq0 / g, ep0 / g);
    let proportional = fp
        .factors()
        .iter()
        .zip(fq.factors())
        .all(|((_, a), (_, b))| r * *a as u64 == s * *b as u64);
    Ok(proportional.then_some((r, s)))
}

pub fn is_multiplicatively_independent(p: u64, q: u64) -> Result<bool> {
    Ok(dependence_witness(p, q)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn order_brute(k: u64, r: u64) -> u64 {
        let mut x = k % r;
        let mut d = 1;
        while x != 1 % r {
            x = x * k % r;
            d += 1;
        }
        d
    }

    #[test]
    fn factor_small_and_large() {
        let f = factorize(&big(360)).unwrap();
        let expect: Vec<(BigUint, u32)> = vec![(big(2), 3), (big(3), 2), (big(5), 1)];
        assert_eq!(f.factors(), &expect[..]);
        assert!(factorize(&big(1)).unwrap().factors().is_empty());

        // semiprime with both factors above the trial bound
        let n = 4_294_967_291u64 * 65_537u64;
        let f = factorize(&big(n)).unwrap();
        assert_eq!(f.value(), big(n));
        assert_eq!(f.factors().len(), 2);

        let n = 1_000_000_007u64 * 998_244_353u64;
        let f = factorize(&big(n)).unwrap();
        assert_eq!(f.factors(), &[(big(998_244_353), 1), (big(1_000_000_007), 1)]);
    }

    #[test]
    fn factor_too_hard() {
        let p = BigUint::from(18_446_744_073_709_551_557u64); // largest 64-bit prime
        let n = &p * &p;
        assert!(matches!(
            factorize(&n),
            Err(Error::FactorizationTooHard(_))
        ));
        assert!(factorize(&BigUint::zero()).is_err());
    }

    #[test]
    fn order_examples() {
        let ord = |k: i64, r: u64| multiplicative_order(&BigInt::from(k), &big(r)).unwrap();
        assert_eq!(ord(2, 5), big(4));
        assert_eq!(ord(3, 7), big(6));
        assert_eq!(ord(17, 1), big(1));
        assert_eq!(ord(-1, 7), big(2));
        assert!(matches!(
            multiplicative_order(&BigInt::from(2), &big(4)),
            Err(Error::NonInvertible { .. })
        ));
    }

    #[test]
    fn order_matches_iteration() {
        for r in 1..=1000u64 {
            let phi = euler_phi(&big(r)).unwrap();
            for k in [2u64, 3, 5, 7, 10, 11, r.saturating_sub(1).max(1)] {
                if k.gcd(&r) != 1 {
                    continue;
                }
                let d = multiplicative_order(&BigInt::from(k), &big(r)).unwrap();
                assert_eq!(d, big(order_brute(k, r)), "ord({k} mod {r})");
                assert!((&phi % &d).is_zero());
            }
        }
    }

    #[test]
    fn inverse_and_powers() {
        let inv = mod_inverse(&BigInt::from(6), &BigInt::from(7)).unwrap();
        assert_eq!(inv, BigInt::from(6));
        assert!(mod_inverse(&BigInt::from(6), &BigInt::from(9)).is_none());
        let m = BigInt::from(5);
        assert_eq!(pow_mod_signed(&BigInt::from(2), -1, &m), Some(BigInt::from(3)));
        assert_eq!(pow_mod_signed(&BigInt::from(2), 0, &BigInt::one()), Some(BigInt::zero()));
    }

    #[test]
    fn independence_examples() {
        assert!(is_multiplicatively_independent(2, 3).unwrap());
        assert!(!is_multiplicatively_independent(4, 8).unwrap());
        assert!(!is_multiplicatively_independent(2, 4).unwrap());
        assert_eq!(dependence_witness(4, 8).unwrap(), Some((3, 2)));
        assert_eq!(dependence_witness(6, 6).unwrap(), Some((1, 1)));
        assert!(is_multiplicatively_independent(12, 18).unwrap());
        assert!(matches!(
            is_multiplicatively_independent(1, 3),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn independence_matches_brute_force() {
        // p^r = q^s with r, s <= 40, compared in exact arithmetic
        for p in 2..=64u64 {
            let pp: Vec<BigUint> = (1..=40u32).map(|r| big(p).pow(r)).collect();
            for q in 2..=64u64 {
                let dependent = (1..=40u32).any(|s| pp.contains(&big(q).pow(s)));
                assert_eq!(
                    is_multiplicatively_independent(p, q).unwrap(),
                    !dependent,
                    "({p}, {q})"
                );
            }
        }
    }
}
