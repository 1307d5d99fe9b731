//! Structured sums of products of binomial factors.
//!
//! Every summand and closed form handled by the toolkit is a rational multiple of
//! a monomial `a^i b^j q^e` times products of factors `w0 - w1 q^t` (with `w0`,
//! `w1` coprime parameter monomials), parameter-only polynomials, and a few
//! general polynomials in the numerator. Keeping that structure lets the
//! congruence engine count denominator valuations exactly and evaluate
//! numerators in small local rings instead of expanding everything.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numbers::Rational;
use crate::param::{MPolyAB, PPoly, PRat};

pub type Mono = (u32, u32);

/// `w0 - w1 q^t` (or `w0 + w1 q^t` when `plus`), `t >= 1`, `w0` and `w1` coprime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binom {
    pub w0: Mono,
    pub w1: Mono,
    pub plus: bool,
    pub t: u32,
}

impl Binom {
    pub fn is_q_only(&self) -> bool {
        self.w0 == (0, 0) && self.w1 == (0, 0)
    }

    pub fn to_ppoly(&self) -> PPoly {
        let c1 = MPolyAB::term(if self.plus { Rational::one() } else { -Rational::one() }, self.w1.0, self.w1.1);
        PPoly::binomial(MPolyAB::term(Rational::one(), self.w0.0, self.w0.1), 0, c1, self.t as i64)
    }

    /// Multiplicity of `Phi_d(q)` in this factor.
    pub fn cyclotomic_multiplicity(&self, d: u64) -> u32 {
        if !self.is_q_only() {
            return 0;
        }
        let t = self.t as u64;
        let hit = if self.plus { (2 * t) % d == 0 && t % d != 0 } else { t % d == 0 };
        hit as u32
    }
}

impl fmt::Display for Binom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |m: Mono| -> String {
            let mut parts = Vec::new();
            match m.0 {
                0 => {}
                1 => parts.push("a".to_string()),
                e => parts.push(format!("a^{e}")),
            }
            match m.1 {
                0 => {}
                1 => parts.push("b".to_string()),
                e => parts.push(format!("b^{e}")),
            }
            parts.join("*")
        };
        let w0 = mono(self.w0);
        let w1 = mono(self.w1);
        let qt = if self.t == 1 { "q".to_string() } else { format!("q^{}", self.t) };
        let left = if w0.is_empty() { "1".to_string() } else { w0 };
        let right = if w1.is_empty() { qt } else { format!("{w1}*{qt}") };
        write!(f, "({left} {} {right})", if self.plus { "+" } else { "-" })
    }
}

/// A multiplicative building block of a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Binom(Binom),
    /// Nonconstant polynomial in `a`, `b` only; a unit for every modulus.
    Free(MPolyAB),
    /// Any other polynomial in `q` with parameter coefficients (integer-primitive, no q-offset).
    Poly(PPoly),
}

impl Factor {
    pub fn to_ppoly(&self) -> PPoly {
        match self {
            Factor::Binom(b) => b.to_ppoly(),
            Factor::Free(m) => PPoly::from_mpoly(m.clone()),
            Factor::Poly(p) => p.clone(),
        }
    }

    /// Upper bounds on the `a`- and `b`-degrees.
    pub fn param_degrees(&self) -> (i64, i64) {
        match self {
            Factor::Binom(b) => (b.w0.0.max(b.w1.0) as i64, b.w0.1.max(b.w1.1) as i64),
            Factor::Free(m) => (m.deg_a(), m.deg_b()),
            Factor::Poly(p) => {
                let (_, da, db) = p.degree_bounds();
                (da.max(0), db.max(0))
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Binom(b) => write!(f, "{b}"),
            Factor::Free(m) => write!(f, "({m})"),
            Factor::Poly(p) => write!(f, "({p})"),
        }
    }
}

pub type Multiset = BTreeMap<Factor, u32>;

fn ms_add(ms: &mut Multiset, f: Factor, k: u32) {
    if k > 0 {
        *ms.entry(f).or_insert(0) += k;
    }
}

/// `true` if every factor of `small` occurs in `big` with at least the same multiplicity.
pub fn ms_included(small: &Multiset, big: &Multiset) -> bool {
    small.iter().all(|(f, k)| big.get(f).is_some_and(|m| m >= k))
}

/// `big - small`, assuming inclusion.
pub fn ms_diff(big: &Multiset, small: &Multiset) -> Multiset {
    let mut out = Multiset::new();
    for (f, k) in big {
        let s = small.get(f).copied().unwrap_or(0);
        if *k > s {
            out.insert(f.clone(), k - s);
        }
    }
    out
}

/// One summand: `coeff * a^mono.0 * b^mono.1 * q^qexp * prod(num) * prod(lin) / prod(den)`.
///
/// `num` holds factors that usually grow along a sum (q-shifted factorials) so
/// evaluators can extend products incrementally; `lin` holds the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Rational,
    pub mono: (i64, i64),
    pub qexp: i64,
    pub num: Multiset,
    pub lin: Multiset,
    pub den: Multiset,
}

impl Term {
    pub fn one() -> Self {
        Term {
            coeff: Rational::one(),
            mono: (0, 0),
            qexp: 0,
            num: Multiset::new(),
            lin: Multiset::new(),
            den: Multiset::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Term { coeff: c, ..Term::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Multiplies by `1 - sign * a^i b^j q^m` (placed in `num` or `den`).
    pub fn mul_one_minus(&mut self, sign: i32, i: i64, j: i64, m: i64, in_den: bool) -> Result<()> {
        assert!(m >= 0, "negative q-exponent in a q-shifted factorial factor");
        let p: Mono = (i.max(0) as u32, j.max(0) as u32);
        let qm: Mono = ((-i).max(0) as u32, (-j).max(0) as u32);
        // (1 - s P/Q q^m) = (Q - s P q^m) / Q
        let step = if in_den { 1 } else { -1 };
        self.mono.0 += step * qm.0 as i64;
        self.mono.1 += step * qm.1 as i64;
        if m == 0 {
            let f = &MPolyAB::term(Rational::one(), qm.0, qm.1)
                - &MPolyAB::term(Rational::from_integer(BigInt::from(sign)), p.0, p.1);
            return self.mul_free(f, in_den);
        }
        for (c, f) in split_binomial(qm, p, sign < 0, m as u32)? {
            if in_den {
                self.coeff /= c;
                ms_add(&mut self.den, f, 1);
            } else {
                self.coeff *= c;
                ms_add(&mut self.num, f, 1);
            }
        }
        Ok(())
    }

    /// Multiplies by `(c q^s; q^d)_k` or divides by it, where `c = sign * a^i b^j`.
    pub fn mul_qpoch(&mut self, sign: i32, i: i64, j: i64, s: i64, d: i64, k: u64, in_den: bool) -> Result<()> {
        for r in 0..k as i64 {
            self.mul_one_minus(sign, i, j, s + r * d, in_den)?;
        }
        Ok(())
    }

    /// Multiplies (or divides) by a polynomial in `a`, `b` only.
    pub fn mul_free(&mut self, f: MPolyAB, in_den: bool) -> Result<()> {
        if let Some(c) = f.as_constant() {
            if c.is_zero() {
                if in_den {
                    return Err(Error::DivisionByZeroRat);
                }
                self.coeff = Rational::zero();
                return Ok(());
            }
            if in_den {
                self.coeff /= c;
            } else {
                self.coeff *= c;
            }
            return Ok(());
        }
        // pull out monomial content and the rational leading coefficient
        let (mono, rest) = strip_monomial(&f);
        let (c, lead) = mpoly_integer_primitive(&rest);
        if in_den {
            self.coeff /= c;
            self.mono.0 -= mono.0 as i64;
            self.mono.1 -= mono.1 as i64;
            ms_add(&mut self.den, Factor::Free(lead), 1);
        } else {
            self.coeff *= c;
            self.mono.0 += mono.0 as i64;
            self.mono.1 += mono.1 as i64;
            if !lead.is_one() {
                ms_add(&mut self.lin, Factor::Free(lead), 1);
            }
        }
        Ok(())
    }

    /// Multiplies the numerator by an arbitrary polynomial.
    pub fn mul_poly(&mut self, p: &PPoly) {
        if p.is_zero() {
            self.coeff = Rational::zero();
            return;
        }
        self.qexp += p.offset();
        let base = p.strip_q();
        if base.deg_q() == 0 {
            // parameter-only polynomial
            let c = base.coeffs()[0].clone();
            self.mul_free(c, false).expect("numerator factor");
            return;
        }
        let (c, prim) = integer_primitive(&base);
        self.coeff *= c;
        ms_add(&mut self.lin, Factor::Poly(prim), 1);
    }

    /// Divides by an arbitrary polynomial (kept as one opaque factor).
    pub fn div_poly(&mut self, p: &PPoly) -> Result<()> {
        if p.is_zero() {
            return Err(Error::DivisionByZeroRat);
        }
        self.qexp -= p.offset();
        let base = p.strip_q();
        if base.deg_q() == 0 {
            return self.mul_free(base.coeffs()[0].clone(), true);
        }
        let (c, prim) = integer_primitive(&base);
        self.coeff /= c;
        ms_add(&mut self.den, Factor::Poly(prim), 1);
        Ok(())
    }

    pub fn mul_q_integer(&mut self, m: u64) {
        // [m] = (1 - q^m) / (1 - q) kept as a single numerator polynomial
        if m == 0 {
            self.coeff = Rational::zero();
            return;
        }
        if m > 1 {
            let p = PPoly::from_qpoly(&crate::qpoly::q_integer(m));
            ms_add(&mut self.lin, Factor::Poly(p), 1);
        }
    }

    pub fn mul_term(&self, other: &Term) -> Term {
        let mut out = self.clone();
        out.coeff *= &other.coeff;
        out.mono.0 += other.mono.0;
        out.mono.1 += other.mono.1;
        out.qexp += other.qexp;
        for (f, k) in &other.num {
            ms_add(&mut out.num, f.clone(), *k);
        }
        for (f, k) in &other.lin {
            ms_add(&mut out.lin, f.clone(), *k);
        }
        for (f, k) in &other.den {
            ms_add(&mut out.den, f.clone(), *k);
        }
        out
    }

    /// Expands into a rational function.
    pub fn to_prat(&self) -> PRat {
        let mut num = PPoly::constant(self.coeff.clone());
        let mut den = PPoly::one();
        let (ma, mb) = self.mono;
        let pos = MPolyAB::term(Rational::one(), ma.max(0) as u32, mb.max(0) as u32);
        let neg = MPolyAB::term(Rational::one(), (-ma).max(0) as u32, (-mb).max(0) as u32);
        num = num.scale(&pos);
        den = den.scale(&neg);
        num = num.shift(self.qexp);
        for (f, k) in self.num.iter().chain(self.lin.iter()) {
            num = &num * &f.to_ppoly().pow(*k);
        }
        for (f, k) in &self.den {
            den = &den * &f.to_ppoly().pow(*k);
        }
        PRat { num, den }
    }
}

fn strip_monomial(f: &MPolyAB) -> (Mono, MPolyAB) {
    let mut ma = u32::MAX;
    let mut mb = u32::MAX;
    for ((i, j), _) in f.terms() {
        ma = ma.min(*i);
        mb = mb.min(*j);
    }
    if ma == 0 && mb == 0 {
        return ((0, 0), f.clone());
    }
    let m = MPolyAB::term(Rational::one(), ma, mb);
    ((ma, mb), f.div_exact(&m).expect("monomial content divides"))
}

/// Returns `(c, p)` with `f = c * p`, `p` having coprime integer coefficients
/// and a positive lex-leading coefficient.
pub fn mpoly_integer_primitive(f: &MPolyAB) -> (Rational, MPolyAB) {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for (_, r) in f.terms() {
        den_lcm = den_lcm.lcm(r.denom());
        num_gcd = num_gcd.gcd(r.numer());
    }
    if num_gcd.is_zero() {
        return (Rational::zero(), MPolyAB::zero());
    }
    let mut c = Rational::new(num_gcd, den_lcm);
    if f.terms().last().is_some_and(|(_, r)| r.is_negative()) {
        c = -c;
    }
    (c.clone(), f.scale(&c.recip()))
}

/// Returns `(c, p)` with `f = c * p`, `p` having coprime integer coefficients and
/// positive leading rational in its top coefficient.
pub fn integer_primitive(f: &PPoly) -> (Rational, PPoly) {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in f.coeffs() {
        for (_, r) in c.terms() {
            den_lcm = den_lcm.lcm(r.denom());
            num_gcd = num_gcd.gcd(r.numer());
        }
    }
    if num_gcd.is_zero() {
        return (Rational::zero(), PPoly::zero());
    }
    // f * den_lcm has integer coefficients with gcd num_gcd * den_lcm / ... ; compute directly
    let scaled = f.scale_rat(&Rational::from_integer(den_lcm.clone()));
    let mut g = BigInt::zero();
    for c in scaled.coeffs() {
        for (_, r) in c.terms() {
            g = g.gcd(r.numer());
        }
    }
    let mut c = Rational::new(g.clone(), den_lcm);
    let lead_neg = f
        .coeffs()
        .last()
        .and_then(|lc| lc.terms().last().map(|(_, r)| r.is_negative()))
        .unwrap_or(false);
    if lead_neg {
        c = -c;
    }
    let p = f.scale_rat(&c.recip());
    (c, p)
}

/// Splits `w0 -/+ w1 q^m` into irreducible binomial factors (times rational constants).
fn split_binomial(w0: Mono, w1: Mono, plus: bool, m: u32) -> Result<Vec<(Rational, Factor)>> {
    // remove common monomial content
    let c0 = (w0.0.min(w1.0), w0.1.min(w1.1));
    let w0 = (w0.0 - c0.0, w0.1 - c0.1);
    let w1 = (w1.0 - c0.0, w1.1 - c0.1);
    let mut out = Vec::new();
    if c0 != (0, 0) {
        out.push((Rational::one(), Factor::Free(MPolyAB::term(Rational::one(), c0.0, c0.1))));
    }
    if w0 == (0, 0) && w1 == (0, 0) {
        out.push((Rational::one(), Factor::Binom(Binom { w0, w1, plus, t: m })));
        return Ok(out);
    }
    let g = [w0.0, w0.1, w1.0, w1.1, m].iter().fold(0u32, |acc, &x| acc.gcd(&x));
    match (g, plus) {
        (1, _) => out.push((Rational::one(), Factor::Binom(Binom { w0, w1, plus, t: m }))),
        (2, false) => {
            // X^2 - Y^2 = (X - Y)(X + Y)
            let h0 = (w0.0 / 2, w0.1 / 2);
            let h1 = (w1.0 / 2, w1.1 / 2);
            out.push((Rational::one(), Factor::Binom(Binom { w0: h0, w1: h1, plus: false, t: m / 2 })));
            out.push((Rational::one(), Factor::Binom(Binom { w0: h0, w1: h1, plus: true, t: m / 2 })));
        }
        (g, true) if g.is_power_of_two() => {
            // X^g + Y^g has no factor over Q(a, b) when g is a power of two
            out.push((Rational::one(), Factor::Binom(Binom { w0, w1, plus, t: m })));
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "binomial with parameter exponents sharing factor {g} with the q-exponent {m}"
            )))
        }
    }
    // constants from the monomial content are moved to `Free`; drop trivial ones
    Ok(out
        .into_iter()
        .filter(|(_, f)| !matches!(f, Factor::Free(mm) if mm.is_one()))
        .collect())
}

/// A finite sum of terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TermSum {
    pub terms: Vec<Term>,
}

impl TermSum {
    pub fn zero() -> Self {
        TermSum { terms: Vec::new() }
    }

    pub fn from_term(t: Term) -> Self {
        let mut s = TermSum::zero();
        s.push(t);
        s
    }

    pub fn push(&mut self, t: Term) {
        if !t.is_zero() {
            self.terms.push(t);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TermSum) -> TermSum {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn neg(&self) -> TermSum {
        TermSum {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.coeff = -t.coeff;
                    t
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &TermSum) -> TermSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TermSum) -> TermSum {
        let mut out = TermSum::zero();
        for x in &self.terms {
            for y in &other.terms {
                out.push(x.mul_term(y));
            }
        }
        out
    }

    pub fn mul_term(&self, t: &Term) -> TermSum {
        self.mul(&TermSum::from_term(t.clone()))
    }

    /// Expands into one rational function (lazy common denominator).
    pub fn to_prat(&self) -> PRat {
        let mut acc = PRat::zero();
        for t in &self.terms {
            acc = &acc + &t.to_prat();
        }
        acc
    }

    /// Common denominator structure: least common multiple of the factor
    /// multisets and the monomial and q-power clearing exponents.
    pub fn common_denominator(&self) -> CommonDen {
        let mut den = Multiset::new();
        let mut clear = (0i64, 0i64);
        let mut qshift = 0i64;
        for t in &self.terms {
            for (f, k) in &t.den {
                let slot = den.entry(f.clone()).or_insert(0);
                *slot = (*slot).max(*k);
            }
            clear.0 = clear.0.max(-t.mono.0);
            clear.1 = clear.1.max(-t.mono.1);
            qshift = qshift.max(-t.qexp);
        }
        let mut scale = BigInt::one();
        for t in &self.terms {
            scale = scale.lcm(t.coeff.denom());
        }
        CommonDen { den, clear: (clear.0 as u32, clear.1 as u32), qshift: qshift as u32, scale }
    }
}

/// The denominator every term is brought over, and the scalings that make the
/// numerator a polynomial with integer coefficients.
#[derive(Clone, Debug)]
pub struct CommonDen {
    pub den: Multiset,
    pub clear: Mono,
    pub qshift: u32,
    pub scale: BigInt,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.mono.0 != 0 {
            write!(f, "*a^{}", self.mono.0)?;
        }
        if self.mono.1 != 0 {
            write!(f, "*b^{}", self.mono.1)?;
        }
        if self.qexp != 0 {
            write!(f, "*q^{}", self.qexp)?;
        }
        for (x, k) in self.num.iter().chain(self.lin.iter()) {
            write!(f, "*{x}")?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if !self.den.is_empty() {
            write!(f, " / (")?;
            for (i, (x, k)) in self.den.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{x}")?;
                if *k > 1 {
                    write!(f, "^{k}")?;
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{frac, rat};
    use crate::qpoly::{qpoch_pow, QPoly};

    #[test]
    fn pochhammer_term_matches_direct_expansion() {
        let mut t = Term::one();
        t.mul_qpoch(1, 0, 0, 1, 2, 3, false).unwrap();
        let p = t.to_prat().reduce();
        assert!(p.equals(&PRat::from_poly(PPoly::from_qpoly(&qpoch_pow(1, 2, 3)))));
    }

    #[test]
    fn negative_parameter_exponents_move_to_monomial() {
        // (1 - q/a) = (a - q)/a
        let mut t = Term::one();
        t.mul_one_minus(1, -1, 0, 1, false).unwrap();
        assert_eq!(t.mono, (-1, 0));
        let f = t.num.keys().next().unwrap();
        assert_eq!(f, &Factor::Binom(Binom { w0: (1, 0), w1: (0, 0), plus: false, t: 1 }));
        let direct = PRat::new(
            PPoly::binomial(MPolyAB::a(), 0, MPolyAB::constant(rat(-1)), 1),
            PPoly::from_mpoly(MPolyAB::a()),
        )
        .unwrap();
        assert!(t.to_prat().equals(&direct));
    }

    #[test]
    fn square_parameter_splits() {
        // 1 - q^6 / b^2 = (b - q^3)(b + q^3) / b^2
        let mut t = Term::one();
        t.mul_one_minus(1, 0, -2, 6, true).unwrap();
        assert_eq!(t.den.len(), 2);
        assert_eq!(t.mono, (0, 2));
        let direct = PRat::new(
            PPoly::from_mpoly(MPolyAB::b().pow(2)),
            PPoly::binomial(MPolyAB::b().pow(2), 0, MPolyAB::constant(rat(-1)), 6),
        )
        .unwrap();
        assert!(t.to_prat().equals(&direct));
    }

    #[test]
    fn free_and_poly_factors() {
        let mut t = Term::one();
        t.mul_free(&MPolyAB::constant(rat(2)) - &MPolyAB::a().scale(&rat(2)), true).unwrap();
        assert_eq!(t.coeff, frac(-1, 2));
        let p = PPoly::from_qpoly(&QPoly::from_coeffs(vec![frac(1, 3), frac(2, 3)])).shift(-2);
        t.mul_poly(&p);
        assert_eq!(t.qexp, -2);
        let direct = PRat::new(p.clone(), PPoly::from_mpoly(&MPolyAB::constant(rat(2)) - &MPolyAB::a().scale(&rat(2))))
            .unwrap();
        assert!(t.to_prat().equals(&direct));
    }

    #[test]
    fn cyclotomic_multiplicity_of_q_binomials() {
        let b = Binom { w0: (0, 0), w1: (0, 0), plus: false, t: 6 };
        assert_eq!(b.cyclotomic_multiplicity(3), 1);
        assert_eq!(b.cyclotomic_multiplicity(4), 0);
        let b = Binom { w0: (0, 0), w1: (0, 0), plus: true, t: 3 };
        assert_eq!(b.cyclotomic_multiplicity(6), 1);
        assert_eq!(b.cyclotomic_multiplicity(2), 1);
        assert_eq!(b.cyclotomic_multiplicity(3), 0);
    }
}
