//! Exact integer and rational arithmetic helpers: Pochhammer symbols,
//! Bernoulli numbers, p-adic valuations and residues modulo prime powers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use serde::Serialize;

use crate::error::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Ascending factorial `x (x+1) ... (x+k-1)`.
pub fn pochhammer(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut cur = x.clone();
    for _ in 0..k {
        acc *= &cur;
        cur += Rational::one();
    }
    acc
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

static BERNOULLI: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(vec![Rational::one()]));

/// Bernoulli number `B_m` from `B_0 = 1` and `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
///
/// Values are memoized in a process-wide table; readers take a shared lock and
/// only the thread that extends the table takes the write lock.
pub fn bernoulli(m: usize) -> Rational {
    if let Some(b) = BERNOULLI.read().get(m) {
        return b.clone();
    }
    let mut table = BERNOULLI.write();
    while table.len() <= m {
        let n = table.len();
        // C(n+1, n) B_n = -sum_{k<n} C(n+1, k) B_k
        let mut s = Rational::zero();
        for (k, bk) in table.iter().enumerate() {
            s += Rational::from_integer(binomial(n as u64 + 1, k as u64)) * bk;
        }
        let bn = -s / Rational::from_integer(BigInt::from(n + 1));
        table.push(bn);
    }
    table[m].clone()
}

/// p-adic valuation; zero has infinite valuation. Serializes as an integer or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, e: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= e,
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!x.is_zero());
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    Valuation::Finite(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

/// A residue `0 <= value < p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerResidue {
    pub value: BigInt,
    pub p: u64,
    pub e: u32,
}

impl PrimePowerResidue {
    pub fn modulus(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.e as usize)
    }
}

/// `num * den^{-1} mod p^e`.
pub fn reduce_mod(x: &Rational, p: u64, e: u32) -> Result<PrimePowerResidue, Error> {
    assert!(e >= 1, "exponent must be positive");
    let pb = BigInt::from(p);
    let m = num_traits::pow(pb.clone(), e as usize);
    if x.denom().is_multiple_of(&pb) {
        return Err(Error::DenominatorNotInvertible(format!("{x} modulo {p}^{e}")));
    }
    let inv = mod_inverse(&x.denom().mod_floor(&m), &m)
        .ok_or_else(|| Error::DenominatorNotInvertible(format!("{x} modulo {p}^{e}")))?;
    let value = (x.numer().mod_floor(&m) * inv).mod_floor(&m);
    Ok(PrimePowerResidue { value, p, e })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes, starting from 2.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 2u64;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c += 1;
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        let half = frac(1, 2);
        assert_eq!(pochhammer(&half, 0), rat(1));
        assert_eq!(pochhammer(&half, 2), frac(3, 4));
        // (1/2)(3/2)(5/2)
        assert_eq!(pochhammer(&half, 3), frac(1, 2) * frac(3, 2) * frac(5, 2));
        assert_eq!(pochhammer(&half, 3), frac(15, 8));
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli(0), rat(1));
        // n = 1: B_0 + 2 B_1 = 0
        assert_eq!(bernoulli(1), frac(-1, 2));
        // n = 2: B_0 + 3 B_1 + 3 B_2 = 0 -> B_2 = (-1 + 3/2)/3
        assert_eq!(bernoulli(2), frac(1, 6));
        assert_eq!(bernoulli(4), frac(-1, 30));
        assert_eq!(bernoulli(12), frac(-691, 2730));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat(0), 5), Valuation::Infinite);
        assert_eq!(padic_valuation(&frac(1, 5), 5), Valuation::Finite(-1));
        assert_eq!(padic_valuation(&frac(-14375, 4096), 5), Valuation::Finite(4));
        assert!(Valuation::Infinite.at_least(1000));
        assert!(!Valuation::Finite(2).at_least(3));
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(reduce_mod(&rat(3), 5, 2).unwrap().value, int(3));
        assert_eq!(reduce_mod(&frac(1, 2), 5, 2).unwrap().value, int(13));
        assert!(matches!(
            reduce_mod(&frac(1, 5), 5, 2),
            Err(Error::DenominatorNotInvertible(_))
        ));
        let r = reduce_mod(&frac(-7, 3), 7, 3).unwrap();
        assert_eq!(r.modulus(), int(343));
        assert_eq!((r.value * 3 + 7) % 343, int(0));
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(25), vec![1, 5, 25]);
        assert_eq!(primes(6), vec![2, 3, 5, 7, 11, 13]);
    }
}
