//! Dense univariate polynomials and Laurent polynomials in `q` over the rationals,
//! together with the q-analogue building blocks: cyclotomic polynomials,
//! q-integers, Gaussian binomials and q-shifted factorials.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::numbers::{divisors, rat, Rational};

/// Polynomial in `q`; `coeffs[i]` is the coefficient of `q^i`. No trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `1 - c q^m`
    pub fn one_minus(c: Rational, m: usize) -> Self {
        let mut p = Self::monomial(-c, m);
        p = &p + &Self::one();
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Multiply by `1 - c q^m` in place.
    pub fn mul_one_minus(&mut self, c: &Rational, m: usize) {
        if self.is_zero() || c.is_zero() {
            return;
        }
        let old_len = self.coeffs.len();
        self.coeffs.resize(old_len + m, Rational::zero());
        for i in (0..old_len).rev() {
            let t = &self.coeffs[i] * c;
            self.coeffs[i + m] -= t;
        }
        let trimmed = std::mem::take(&mut self.coeffs);
        *self = Self::from_coeffs(trimmed);
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; `deg(r) < deg(divisor)`.
    pub fn divrem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let lc = divisor.leading().ok_or(Error::DivisionByZeroPoly)?.clone();
        let dd = divisor.coeffs.len();
        if self.coeffs.len() < dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd + 1];
        let monic = lc.is_one();
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd - 1];
            if top.is_zero() {
                continue;
            }
            let c = if monic { top.clone() } else { top / &lc };
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    let t = &c * d;
                    rem[i + j] -= t;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd - 1);
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &QPoly) -> Result<QPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Quotient of an exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &QPoly) -> QPoly {
        let (q, r) = self.divrem(divisor).expect("exact_div by zero");
        assert!(r.is_zero(), "exact_div: nonzero remainder");
        q
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Multiplicity of `factor` in `self`, capped at `cap`. Zero polynomial gives `cap`.
    pub fn valuation_at(&self, factor: &QPoly, cap: u32) -> u32 {
        let mut cur = self.clone();
        let mut v = 0;
        while v < cap {
            if cur.is_zero() {
                return cap;
            }
            let (q, r) = cur.divrem(factor).expect("nonzero factor");
            if !r.is_zero() {
                break;
            }
            cur = q;
            v += 1;
        }
        v
    }

    /// Formal derivative.
    pub fn derivative(&self) -> QPoly {
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(short.coeffs.iter()) {
            *c += s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(QPoly, Add::add, Sub::sub, Mul::mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

/// Writes one signed term of a polynomial rendering. `body` is the monomial
/// part (empty for a constant).
pub(crate) fn write_term(out: &mut String, c: &Rational, body: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let is_int = abs.is_integer();
    if body.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(body);
    } else if is_int {
        out.push_str(&format!("{abs}*{body}"));
    } else {
        out.push_str(&format!("({abs})*{body}"));
    }
}

pub(crate) fn q_power_name(k: i64) -> String {
    match k {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{k}"),
    }
}

impl fmt::Display for QPoly {
    /// Ascending order, e.g. `1 - q - q^3 + q^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write_term(&mut out, c, &q_power_name(i as i64));
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// `q^offset * base`, with `base(0) != 0` unless zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QLaurent {
    base: QPoly,
    offset: i64,
}

impl QLaurent {
    pub fn new(base: QPoly, offset: i64) -> Self {
        if base.is_zero() {
            return QLaurent { base, offset: 0 };
        }
        let lead_zeros = base.coeffs.iter().take_while(|c| c.is_zero()).count();
        let base = QPoly::from_coeffs(base.coeffs[lead_zeros..].to_vec());
        QLaurent { base, offset: offset + lead_zeros as i64 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(QPoly::one())
    }

    /// `c * q^k` for any integer `k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        Self::new(QPoly::constant(c), k)
    }

    pub fn base(&self) -> &QPoly {
        &self.base
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    /// Lowest and highest exponents present.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.offset, self.offset + self.base.degree()))
        }
    }

    pub fn coeff(&self, k: i64) -> Rational {
        if k < self.offset {
            return Rational::zero();
        }
        self.base.coeff((k - self.offset) as usize)
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(self.base.clone(), self.offset + k)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.base.scale(c), self.offset)
    }

    /// Returns `(poly, s)` with `self = q^{-s} * poly`, i.e. clears negative exponents.
    pub fn clear_offset(&self) -> (QPoly, i64) {
        if self.offset >= 0 {
            (self.base.shift(self.offset as usize), 0)
        } else {
            (self.base.clone(), -self.offset)
        }
    }

    /// Evaluation at a nonzero rational.
    pub fn eval(&self, x: &Rational) -> Rational {
        let b = self.base.eval(x);
        if self.offset >= 0 {
            b * num_traits::pow(x.clone(), self.offset as usize)
        } else {
            b / num_traits::pow(x.clone(), (-self.offset) as usize)
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.base.pow(e), self.offset * e as i64)
    }
}

impl From<QPoly> for QLaurent {
    fn from(p: QPoly) -> Self {
        QLaurent::new(p, 0)
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let a = self.base.shift((self.offset - lo) as usize);
        let b = rhs.base.shift((rhs.offset - lo) as usize);
        QLaurent::new(&a + &b, lo)
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        self + &(-rhs)
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent { base: -&self.base, offset: self.offset }
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        QLaurent::new(&self.base * &rhs.base, self.offset + rhs.offset)
    }
}

forward_owned!(QLaurent, Add::add, Sub::sub, Mul::mul);

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.base.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write_term(&mut out, c, &q_power_name(i as i64 + self.offset));
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

static CYCLOTOMIC: Lazy<RwLock<HashMap<u64, QPoly>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// The n-th cyclotomic polynomial, `(q^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic(n: u64) -> QPoly {
    assert!(n >= 1, "cyclotomic: n must be positive");
    if let Some(p) = CYCLOTOMIC.read().get(&n) {
        return p.clone();
    }
    let mut p = QPoly::monomial(Rational::one(), n as usize);
    p = &p - &QPoly::one();
    for d in divisors(n) {
        if d < n {
            p = p.exact_div(&cyclotomic(d));
        }
    }
    CYCLOTOMIC.write().insert(n, p.clone());
    p
}

/// `[n] = 1 + q + ... + q^{n-1}`.
pub fn q_integer(n: u64) -> QPoly {
    QPoly::from_coeffs(vec![Rational::one(); n as usize])
}

/// Gaussian binomial `[m choose k]_q`; zero outside `0 <= k <= m`.
pub fn q_binomial(m: u64, k: i64) -> QPoly {
    if k < 0 || k as u64 > m {
        return QPoly::zero();
    }
    let k = k as u64;
    // (q^{m-k+1}; q)_k / (q; q)_k
    let num = qpoch_pow(m - k + 1, 1, k);
    let den = qpoch_pow(1, 1, k);
    num.exact_div(&den)
}

/// `(q^s; q^d)_k = prod_{j<k} (1 - q^{s + j d})`.
pub fn qpoch_pow(s: u64, d: u64, k: u64) -> QPoly {
    let mut p = QPoly::one();
    for j in 0..k {
        p.mul_one_minus(&Rational::one(), (s + j * d) as usize);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{binomial, frac};

    #[test]
    fn divrem_and_gcd() {
        let (q, r) = QPoly::from_i64(&[-1, 0, 1]).divrem(&QPoly::from_i64(&[-1, 1])).unwrap();
        assert_eq!(q, QPoly::from_i64(&[1, 1]));
        assert!(r.is_zero());
        let g = QPoly::from_i64(&[-1, 0, 1]).gcd(&QPoly::from_i64(&[0, -1, 1]));
        assert_eq!(g, QPoly::from_i64(&[-1, 1]));
        assert_eq!(QPoly::from_i64(&[1, 1, 1]).eval(&rat(1)), rat(3));
        assert_eq!(QPoly::one().divrem(&QPoly::zero()), Err(Error::DivisionByZeroPoly));
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), QPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), QPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(6), QPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), QPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn q_integer_examples() {
        assert_eq!(q_integer(1), QPoly::one());
        assert_eq!(q_integer(3), QPoly::from_i64(&[1, 1, 1]));
        assert_eq!(q_integer(7).eval(&rat(1)), rat(7));
    }

    #[test]
    fn q_binomial_examples() {
        assert_eq!(q_binomial(2, 1), QPoly::from_i64(&[1, 1]));
        assert_eq!(q_binomial(4, 2), QPoly::from_i64(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(9, 0), QPoly::one());
        assert!(q_binomial(3, 4).is_zero());
        assert!(q_binomial(3, -1).is_zero());
    }

    #[test]
    fn qpoch_examples() {
        assert_eq!(qpoch_pow(1, 2, 2), QPoly::from_i64(&[1, -1, 0, -1, 1]));
        assert_eq!(qpoch_pow(2, 2, 1), QPoly::from_i64(&[1, 0, -1]));
        assert_eq!(qpoch_pow(5, 3, 0), QPoly::one());
    }

    #[test]
    fn rendering() {
        assert_eq!(qpoch_pow(1, 2, 2).to_string(), "1 - q - q^3 + q^4");
        let p = QPoly::from_coeffs(vec![rat(-2), rat(0), frac(1, 3)]);
        assert_eq!(p.to_string(), "-2 + (1/3)*q^2");
        assert_eq!(QPoly::zero().to_string(), "0");
        let l = QLaurent::new(QPoly::from_i64(&[1, 1, 1]), -1);
        assert_eq!(l.to_string(), "q^-1 + 1 + q");
    }

    #[test]
    fn laurent_normalizes_offset() {
        let l = QLaurent::new(QPoly::from_i64(&[0, 0, 3, 1]), -5);
        assert_eq!(l.offset(), -3);
        assert_eq!(l.base(), &QPoly::from_i64(&[3, 1]));
        let (p, s) = l.clear_offset();
        assert_eq!((p, s), (QPoly::from_i64(&[3, 1]), 3));
        let sum = &l + &QLaurent::monomial(rat(-3), -3);
        assert_eq!(sum, QLaurent::monomial(rat(1), -2));
    }

    #[test]
    fn valuation_counts_multiplicity() {
        let phi3 = cyclotomic(3);
        let p = &phi3.pow(3) * &QPoly::from_i64(&[2, 1]);
        assert_eq!(p.valuation_at(&phi3, 10), 3);
        assert_eq!(p.valuation_at(&phi3, 2), 2);
        assert_eq!(QPoly::zero().valuation_at(&phi3, 4), 4);
    }

    #[test]
    fn q_binomial_at_one_is_binomial() {
        for m in 0..=12u64 {
            for k in 0..=m as i64 {
                assert_eq!(
                    q_binomial(m, k).eval(&rat(1)),
                    Rational::from_integer(binomial(m, k as u64))
                );
            }
        }
    }
}
