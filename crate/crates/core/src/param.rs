//! Polynomials in the parameters `a`, `b`, Laurent polynomials in `q` with such
//! coefficients, and rational functions built from them.
//!
//! `PPoly` is treated as a univariate polynomial in `q` over the integral domain
//! `Q[a, b]`; division is fraction-free (pseudo-division) and gcds use a
//! primitive remainder sequence with content extraction recursing into `Q[a][b]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numbers::{rat, Rational};
use crate::qpoly::{q_power_name, write_term, QLaurent, QPoly};

/// Polynomial in `a`, `b` over the rationals; keys are `(deg_a, deg_b)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MPolyAB {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl MPolyAB {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn term(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        MPolyAB { terms }
    }

    pub fn a() -> Self {
        Self::term(Rational::one(), 1, 0)
    }

    pub fn b() -> Self {
        Self::term(Rational::one(), 0, 1)
    }

    pub fn from_terms(iter: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, &c);
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: &Rational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(key).or_insert_with(Rational::zero);
            *slot += c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// The constant value if this is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn deg_a(&self) -> i64 {
        self.terms.keys().map(|k| k.0 as i64).max().unwrap_or(-1)
    }

    pub fn deg_b(&self) -> i64 {
        self.terms.keys().map(|k| k.1 as i64).max().unwrap_or(-1)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPolyAB { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn mul_monomial(&self, i: u32, j: u32) -> Self {
        MPolyAB { terms: self.terms.iter().map(|(k, v)| ((k.0 + i, k.1 + j), v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, alpha: &Rational, beta: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for ((i, j), c) in &self.terms {
            acc += c * num_traits::pow(alpha.clone(), *i as usize) * num_traits::pow(beta.clone(), *j as usize);
        }
        acc
    }

    /// Leading term in lex order with `a > b`.
    fn lex_leading(&self) -> Option<((u32, u32), &Rational)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPolyAB) -> Option<MPolyAB> {
        let (dk, dc) = d.lex_leading()?;
        if d.terms.len() == 1 {
            let mut out = BTreeMap::new();
            for (k, c) in &self.terms {
                if k.0 < dk.0 || k.1 < dk.1 {
                    return None;
                }
                out.insert((k.0 - dk.0, k.1 - dk.1), c / dc);
            }
            return Some(MPolyAB { terms: out });
        }
        let mut rem = self.clone();
        let mut quot = MPolyAB::zero();
        while let Some((rk, rc)) = rem.lex_leading() {
            if rk.0 < dk.0 || rk.1 < dk.1 {
                return None;
            }
            let t = MPolyAB::term(rc / dc, rk.0 - dk.0, rk.1 - dk.1);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// View as a polynomial in `b` with coefficients in `Q[a]` (`QPoly` in the variable `a`).
    fn to_b_major(&self) -> Vec<QPoly> {
        let db = self.deg_b();
        if db < 0 {
            return Vec::new();
        }
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); db as usize + 1];
        for ((i, j), c) in &self.terms {
            let row = &mut rows[*j as usize];
            if row.len() <= *i as usize {
                row.resize(*i as usize + 1, Rational::zero());
            }
            row[*i as usize] = c.clone();
        }
        rows.into_iter().map(QPoly::from_coeffs).collect()
    }

    fn from_b_major(rows: &[QPoly]) -> Self {
        let mut out = Self::zero();
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                out.add_term((i as u32, j as u32), c);
            }
        }
        out
    }

    /// Greatest common divisor, normalized to leading lex coefficient 1.
    pub fn gcd(&self, other: &MPolyAB) -> MPolyAB {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let x = self.to_b_major();
        let y = other.to_b_major();
        let cx = qpoly_content(&x);
        let cy = qpoly_content(&y);
        let c = cx.gcd(&cy);
        let mut p = primitive_rows(&x, &cx);
        let mut r = primitive_rows(&y, &cy);
        if p.len() < r.len() {
            std::mem::swap(&mut p, &mut r);
        }
        // primitive pseudo-remainder sequence in b over Q[a]
        while !r.is_empty() {
            let rem = rows_prem(&p, &r);
            p = r;
            if rem.is_empty() {
                r = Vec::new();
            } else {
                let cr = qpoly_content(&rem);
                r = primitive_rows(&rem, &cr);
            }
        }
        let g: Vec<QPoly> = p.iter().map(|row| row * &c).collect();
        MPolyAB::from_b_major(&g).normalized()
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn normalized(&self) -> MPolyAB {
        match self.lex_leading() {
            None => MPolyAB::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    fn render(&self) -> Vec<(Rational, String)> {
        self.terms
            .iter()
            .map(|((i, j), c)| {
                let mut parts = Vec::new();
                match i {
                    0 => {}
                    1 => parts.push("a".to_string()),
                    _ => parts.push(format!("a^{i}")),
                }
                match j {
                    0 => {}
                    1 => parts.push("b".to_string()),
                    _ => parts.push(format!("b^{j}")),
                }
                (c.clone(), parts.join("*"))
            })
            .collect()
    }
}

fn qpoly_content(rows: &[QPoly]) -> QPoly {
    rows.iter().fold(QPoly::zero(), |acc, r| acc.gcd(r))
}

fn primitive_rows(rows: &[QPoly], content: &QPoly) -> Vec<QPoly> {
    if content.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<QPoly> = rows.iter().map(|r| r.exact_div(content)).collect();
    while out.last().is_some_and(|r| r.is_zero()) {
        out.pop();
    }
    out
}

/// Pseudo-remainder of univariate polynomials over `Q[a]`.
fn rows_prem(n: &[QPoly], m: &[QPoly]) -> Vec<QPoly> {
    let lc = m.last().expect("nonzero divisor").clone();
    let dm = m.len();
    let mut r = n.to_vec();
    while r.len() >= dm {
        let top = r.last().unwrap().clone();
        let shift = r.len() - dm;
        for x in r.iter_mut() {
            *x = &*x * &lc;
        }
        for (j, mj) in m.iter().enumerate() {
            let t = &top * mj;
            r[shift + j] = &r[shift + j] - &t;
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    r
}

impl Add for &MPolyAB {
    type Output = MPolyAB;
    fn add(self, rhs: &MPolyAB) -> MPolyAB {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &MPolyAB {
    type Output = MPolyAB;
    fn sub(self, rhs: &MPolyAB) -> MPolyAB {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, &-c);
        }
        out
    }
}

impl Neg for &MPolyAB {
    type Output = MPolyAB;
    fn neg(self) -> MPolyAB {
        MPolyAB { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Mul for &MPolyAB {
    type Output = MPolyAB;
    fn mul(self, rhs: &MPolyAB) -> MPolyAB {
        let mut out = MPolyAB::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term((k1.0 + k2.0, k1.1 + k2.1), &(c1 * c2));
            }
        }
        out
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
forward_owned!(MPolyAB, Add::add, Sub::sub, Mul::mul);

impl fmt::Display for MPolyAB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (c, body) in self.render() {
            write_term(&mut out, &c, &body);
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for MPolyAB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPolyAB({self})")
    }
}

/// Laurent polynomial in `q` with `Q[a, b]` coefficients: `q^offset * sum coeffs[i] q^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PPoly {
    coeffs: Vec<MPolyAB>,
    offset: i64,
}

impl PPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_mpoly(MPolyAB::one())
    }

    pub fn from_mpoly(c: MPolyAB) -> Self {
        Self::new(vec![c], 0)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_mpoly(MPolyAB::constant(c))
    }

    pub fn new(mut coeffs: Vec<MPolyAB>, offset: i64) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return PPoly::zero();
        }
        coeffs.drain(..lead);
        PPoly { coeffs, offset: offset + lead as i64 }
    }

    /// `c * q^k`
    pub fn monomial(c: MPolyAB, k: i64) -> Self {
        Self::new(vec![c], k)
    }

    pub fn q_pow(k: i64) -> Self {
        Self::monomial(MPolyAB::one(), k)
    }

    /// `x - y q^k` style binomials are built from two monomials.
    pub fn binomial(c0: MPolyAB, k0: i64, c1: MPolyAB, k1: i64) -> Self {
        &Self::monomial(c0, k0) + &Self::monomial(c1, k1)
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| MPolyAB::constant(c.clone())).collect(), 0)
    }

    pub fn from_qlaurent(p: &QLaurent) -> Self {
        Self::from_qpoly(p.base()).shift(p.offset())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[MPolyAB] {
        &self.coeffs
    }

    /// Coefficient of `q^k`.
    pub fn coeff(&self, k: i64) -> MPolyAB {
        if k < self.offset {
            return MPolyAB::zero();
        }
        self.coeffs.get((k - self.offset) as usize).cloned().unwrap_or_default()
    }

    /// Highest q-exponent; `-1` for zero.
    pub fn deg_q(&self) -> i64 {
        if self.is_zero() {
            -1
        } else {
            self.offset + self.coeffs.len() as i64 - 1
        }
    }

    pub fn lc_q(&self) -> MPolyAB {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        PPoly { coeffs: self.coeffs.clone(), offset: self.offset + k }
    }

    pub fn scale(&self, c: &MPolyAB) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect(), self.offset)
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.scale(c)).collect(), self.offset)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `(deg_q, deg_a, deg_b)`; all `-1` for the zero polynomial.
    pub fn degree_bounds(&self) -> (i64, i64, i64) {
        if self.is_zero() {
            return (-1, -1, -1);
        }
        let da = self.coeffs.iter().map(MPolyAB::deg_a).max().unwrap_or(-1);
        let db = self.coeffs.iter().map(MPolyAB::deg_b).max().unwrap_or(-1);
        (self.deg_q(), da, db)
    }

    /// Dense coefficient vector from `q^0`; requires a non-negative offset.
    fn dense(&self) -> Vec<MPolyAB> {
        assert!(self.offset >= 0, "PPoly has negative q-offset; clear it before division");
        let mut v = vec![MPolyAB::zero(); self.offset as usize];
        v.extend(self.coeffs.iter().cloned());
        v
    }

    /// `self = q^{-s} * poly` with `poly` having no negative exponents.
    pub fn clear_offset(&self) -> (PPoly, i64) {
        if self.offset >= 0 {
            (self.clone(), 0)
        } else {
            (self.shift(-self.offset), -self.offset)
        }
    }

    /// Fraction-free division: `lc_q(m)^e * self = quot * m + rem`, `deg_q(rem) < deg_q(m)`.
    ///
    /// A constant leading coefficient is divided out directly and reports `e = 0`.
    pub fn pseudo_divrem(&self, m: &PPoly) -> Result<(PPoly, PPoly, u32)> {
        if m.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let n = self.dense();
        let md = m.dense();
        let dm = md.len();
        let lc = md.last().unwrap().clone();
        if n.len() < dm {
            return Ok((PPoly::zero(), self.clone(), 0));
        }
        let lc_inv = lc.as_constant().map(|c| c.recip());
        let mut rem = n;
        let mut quot = vec![MPolyAB::zero(); rem.len() - dm + 1];
        let mut e = 0u32;
        for i in (0..quot.len()).rev() {
            let mut top = rem[i + dm - 1].clone();
            if top.is_zero() {
                continue;
            }
            match &lc_inv {
                Some(inv) => top = top.scale(inv),
                None => {
                    e += 1;
                    for x in rem.iter_mut().take(i + dm) {
                        *x = &*x * &lc;
                    }
                    for x in quot.iter_mut().skip(i + 1) {
                        *x = &*x * &lc;
                    }
                }
            }
            for (j, mj) in md.iter().enumerate() {
                if !mj.is_zero() {
                    let t = &top * mj;
                    rem[i + j] = &rem[i + j] - &t;
                }
            }
            quot[i] = top;
        }
        rem.truncate(dm - 1);
        Ok((PPoly::new(quot, 0), PPoly::new(rem, 0), e))
    }

    /// Exact quotient by a coefficient-ring element, `None` if some coefficient is not divisible.
    pub fn div_exact_mpoly(&self, d: &MPolyAB) -> Option<PPoly> {
        let coeffs = self.coeffs.iter().map(|c| c.div_exact(d)).collect::<Option<Vec<_>>>()?;
        Some(PPoly::new(coeffs, self.offset))
    }

    /// Exact quotient `self / m` when `m` divides `self`, otherwise `None`.
    pub fn div_exact(&self, m: &PPoly) -> Result<Option<PPoly>> {
        let (n, s) = self.clear_offset();
        let (md, t) = m.clear_offset();
        let (quot, rem, e) = n.pseudo_divrem(&md)?;
        if !rem.is_zero() {
            return Ok(None);
        }
        let scale = md.lc_q().pow(e);
        Ok(quot.div_exact_mpoly(&scale).map(|q| q.shift(t - s)))
    }

    /// Exact quotient by a divisor that is primitive over `Q[a, b]`, `None` when it
    /// does not divide. By Gauss's lemma the quotient then has polynomial
    /// coefficients, so a leading coefficient that fails to divide proves
    /// non-divisibility.
    pub fn div_exact_primitive(&self, m: &PPoly) -> Option<PPoly> {
        let (n, s) = self.clear_offset();
        let (md, t) = m.clear_offset();
        let mut rem = n.dense();
        let md = md.dense();
        let dm = md.len();
        if rem.iter().all(|c| c.is_zero()) {
            return Some(PPoly::zero());
        }
        if rem.len() < dm {
            return None;
        }
        let lc = md.last().unwrap().clone();
        let mut quot = vec![MPolyAB::zero(); rem.len() - dm + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dm - 1];
            if top.is_zero() {
                continue;
            }
            let qi = top.div_exact(&lc)?;
            for (j, mj) in md.iter().enumerate() {
                if !mj.is_zero() {
                    let t = &qi * mj;
                    rem[i + j] = &rem[i + j] - &t;
                }
            }
            quot[i] = qi;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(PPoly::new(quot, 0).shift(t - s))
    }

    /// gcd of all q-coefficients in `Q[a, b]`.
    pub fn content(&self) -> MPolyAB {
        self.coeffs.iter().fold(MPolyAB::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> PPoly {
        let c = self.content();
        if c.is_zero() {
            return PPoly::zero();
        }
        self.div_exact_mpoly(&c).expect("content divides every coefficient")
    }

    /// gcd in `Q(a,b)[q]` taken primitive over `Q[a,b]`, with normalized leading
    /// coefficient. Laurent offsets are ignored (q is a unit).
    pub fn gcd(&self, other: &PPoly) -> PPoly {
        if self.is_zero() {
            return other.primitive_part().normalize_sign().strip_q();
        }
        if other.is_zero() {
            return self.primitive_part().normalize_sign().strip_q();
        }
        let mut p = self.strip_q().primitive_part();
        let mut r = other.strip_q().primitive_part();
        if p.deg_q() < r.deg_q() {
            std::mem::swap(&mut p, &mut r);
        }
        while !r.is_zero() {
            let (_, rem, _) = p.pseudo_divrem(&r).expect("nonzero divisor");
            p = r;
            r = rem.strip_q().primitive_part();
        }
        p.normalize_sign()
    }

    /// Removes the power of `q` dividing `self`.
    pub fn strip_q(&self) -> PPoly {
        PPoly { coeffs: self.coeffs.clone(), offset: 0 }
    }

    /// Scales so the leading coefficient's lex-leading rational is 1.
    pub fn normalize_sign(&self) -> PPoly {
        match self.coeffs.last().and_then(|lc| lc.lex_leading().map(|(_, c)| c.recip())) {
            None => PPoly::zero(),
            Some(inv) => self.scale_rat(&inv),
        }
    }

    /// Substitutes `a = alpha`, `b = beta`.
    pub fn specialize(&self, alpha: &Rational, beta: &Rational) -> QLaurent {
        let base = QPoly::from_coeffs(self.coeffs.iter().map(|c| c.eval(alpha, beta)).collect());
        QLaurent::new(base, self.offset)
    }
}

impl Add for &PPoly {
    type Output = PPoly;
    fn add(self, rhs: &PPoly) -> PPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.deg_q().max(rhs.deg_q());
        let mut coeffs = vec![MPolyAB::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (self.offset - lo) as usize + i;
            coeffs[k] = &coeffs[k] + c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let k = (rhs.offset - lo) as usize + i;
            coeffs[k] = &coeffs[k] + c;
        }
        PPoly::new(coeffs, lo)
    }
}

impl Sub for &PPoly {
    type Output = PPoly;
    fn sub(self, rhs: &PPoly) -> PPoly {
        self + &(-rhs)
    }
}

impl Neg for &PPoly {
    type Output = PPoly;
    fn neg(self) -> PPoly {
        PPoly { coeffs: self.coeffs.iter().map(|c| -c).collect(), offset: self.offset }
    }
}

impl Mul for &PPoly {
    type Output = PPoly;
    fn mul(self, rhs: &PPoly) -> PPoly {
        if self.is_zero() || rhs.is_zero() {
            return PPoly::zero();
        }
        let mut coeffs = vec![MPolyAB::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    let t = x * y;
                    coeffs[i + j] = &coeffs[i + j] + &t;
                }
            }
        }
        PPoly::new(coeffs, self.offset + rhs.offset)
    }
}

forward_owned!(PPoly, Add::add, Sub::sub, Mul::mul);

impl Neg for PPoly {
    type Output = PPoly;
    fn neg(self) -> PPoly {
        -&self
    }
}

impl fmt::Display for PPoly {
    /// q-major ascending, then `a`, then `b`, e.g. `(-1/2)*a^2*b*q^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let qk = q_power_name(self.offset + i as i64);
            for (r, body) in c.render() {
                let full = match (body.is_empty(), qk.is_empty()) {
                    (true, _) => qk.clone(),
                    (false, true) => body,
                    (false, false) => format!("{body}*{qk}"),
                };
                write_term(&mut out, &r, &full);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for PPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PPoly({self})")
    }
}

/// Rational function `num / den` over `Q(a, b)` in `q`; normalization is lazy.
#[derive(Clone, Debug)]
pub struct PRat {
    pub num: PPoly,
    pub den: PPoly,
}

impl PRat {
    pub fn new(num: PPoly, den: PPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroRat);
        }
        Ok(PRat { num, den })
    }

    pub fn from_poly(p: PPoly) -> Self {
        PRat { num: p, den: PPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(PPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(PPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<PRat> {
        PRat::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &PRat) -> Result<PRat> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroRat);
        }
        Ok(PRat { num: &self.num * &rhs.den, den: &self.den * &rhs.num })
    }

    /// Cancels the gcd of numerator and denominator (including content and
    /// powers of q) and fixes the sign so the denominator is normalized.
    pub fn reduce(&self) -> PRat {
        if self.num.is_zero() {
            return PRat::zero();
        }
        // move q-offsets into a single power
        let shift = self.num.offset() - self.den.offset();
        let n0 = self.num.strip_q();
        let d0 = self.den.strip_q();
        let cn = n0.content();
        let cd = d0.content();
        let cg = cn.gcd(&cd);
        let n1 = n0.div_exact_mpoly(&cg).expect("content gcd divides");
        let d1 = d0.div_exact_mpoly(&cg).expect("content gcd divides");
        let g = n1.gcd(&d1);
        let (mut n2, mut d2) = if g.deg_q() > 0 {
            (
                n1.div_exact(&g).unwrap().expect("gcd divides numerator"),
                d1.div_exact(&g).unwrap().expect("gcd divides denominator"),
            )
        } else {
            (n1, d1)
        };
        // remaining common factors in Q[a,b]
        let c2 = n2.content().gcd(&d2.content());
        if !c2.is_one() && !c2.is_zero() {
            n2 = n2.div_exact_mpoly(&c2).unwrap();
            d2 = d2.div_exact_mpoly(&c2).unwrap();
        }
        let inv = d2.lc_q().lex_leading().map(|(_, c)| c.recip()).unwrap();
        let (n3, d3) = (n2.scale_rat(&inv), d2.scale_rat(&inv));
        if shift >= 0 {
            PRat { num: n3.shift(shift), den: d3 }
        } else {
            PRat { num: n3, den: d3.shift(-shift) }
        }
    }

    /// Substitutes `a = alpha`, `b = beta` into numerator and denominator separately.
    pub fn specialize(&self, alpha: &Rational, beta: &Rational) -> (QLaurent, QLaurent) {
        (self.num.specialize(alpha, beta), self.den.specialize(alpha, beta))
    }

    /// Cross-multiplication equality test.
    pub fn equals(&self, other: &PRat) -> bool {
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }
}

impl From<PPoly> for PRat {
    fn from(p: PPoly) -> Self {
        PRat::from_poly(p)
    }
}

impl Add for &PRat {
    type Output = PRat;
    fn add(self, rhs: &PRat) -> PRat {
        if self.den == rhs.den {
            return PRat { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        PRat { num: &self.num * &rhs.den + &rhs.num * &self.den, den: &self.den * &rhs.den }
    }
}

impl Sub for &PRat {
    type Output = PRat;
    fn sub(self, rhs: &PRat) -> PRat {
        self + &(-rhs)
    }
}

impl Neg for &PRat {
    type Output = PRat;
    fn neg(self) -> PRat {
        PRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &PRat {
    type Output = PRat;
    fn mul(self, rhs: &PRat) -> PRat {
        PRat { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

forward_owned!(PRat, Add::add, Sub::sub, Mul::mul);

/// `1 - a q^k` with the given parameter monomial coefficient.
pub fn one_minus_mono(c: MPolyAB, k: i64) -> PPoly {
    PPoly::binomial(MPolyAB::one(), 0, -&c, k)
}

pub fn mrat(n: i64) -> MPolyAB {
    MPolyAB::constant(rat(n))
}
