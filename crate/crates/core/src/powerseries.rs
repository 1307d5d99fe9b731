//! Truncated power series in `q` and checks of the two basic hypergeometric
//! identities behind the lemmas: the terminating very-well-poised 6phi5 sum
//! (exact, at rational parameter values) and a quadratic transformation
//! (coefficientwise through `q^T`).

use std::ops::{Add, Mul, Neg, Sub};
use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::engine::Status;
use crate::error::{Error, Result};
use crate::numbers::{frac, rat, Rational};
use crate::qpoly::{QLaurent, QPoly};

/// Power series `sum_{i<=order} c_i q^i`, arithmetic modulo `q^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        QSeries { coeffs }
    }

    /// `1 - c q^m`.
    pub fn one_minus(c: &Rational, m: usize, order: usize) -> Self {
        let mut s = QSeries::one(order);
        if m <= order {
            s.coeffs[m] -= c;
        }
        s
    }

    /// `c q^m`.
    pub fn monomial(c: Rational, m: usize, order: usize) -> Self {
        let mut s = QSeries::zero(order);
        if m <= order {
            s.coeffs[m] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies in place by `1 - c q^m`.
    pub fn mul_one_minus(&mut self, c: &Rational, m: usize) {
        if c.is_zero() {
            return;
        }
        for i in (m..self.coeffs.len()).rev() {
            let t = &self.coeffs[i - m] * c;
            self.coeffs[i] -= t;
        }
    }

    /// Divides in place by `1 - c q^m`, `m >= 1`.
    pub fn div_one_minus(&mut self, c: &Rational, m: usize) {
        assert!(m >= 1, "1 - c must be handled as a scalar");
        for i in m..self.coeffs.len() {
            let t = &self.coeffs[i - m] * c;
            self.coeffs[i] += t;
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        out[0] = inv0.clone();
        for i in 1..self.coeffs.len() {
            let mut s = Rational::zero();
            for j in 1..=i {
                s += &self.coeffs[j] * &out[i - j];
            }
            out[i] = -s * &inv0;
        }
        Ok(QSeries { coeffs: out })
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        QSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, x) in self.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += x * y;
            }
        }
        QSeries { coeffs: out }
    }
}

/// `prod_{j>=0} (1 - c q^(s + j d))` truncated at `q^order`, `s, d >= 1`.
pub fn series_pochhammer_inf(c: &Rational, s: usize, d: usize, order: usize) -> QSeries {
    assert!(s >= 1 && d >= 1, "shift and step must be positive");
    let mut out = QSeries::one(order);
    let mut m = s;
    while m <= order {
        out.mul_one_minus(c, m);
        m += d;
    }
    out
}

/// Multiplies (or divides) `x` by `(c q^s; q^d)_k` where every factor has positive `q`-degree
/// or is a nonzero constant.
fn poch_series(x: &mut QSeries, c: &Rational, s: usize, d: usize, k: usize, divide: bool) -> bool {
    for j in 0..k {
        let m = s + j * d;
        if m == 0 {
            let f = Rational::one() - c;
            if f.is_zero() {
                if divide {
                    return false;
                }
                *x = QSeries::zero(x.order());
                return true;
            }
            *x = if divide { x.scale(&f.recip()) } else { x.scale(&f) };
        } else if divide {
            x.div_one_minus(c, m);
        } else {
            x.mul_one_minus(c, m);
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesVerdict {
    pub status: Status,
    pub points_used: u64,
    pub points_skipped: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

/// `1 - c q^m` as a Laurent polynomial.
fn lin(c: &Rational, m: i64) -> QLaurent {
    &QLaurent::one() - &QLaurent::monomial(c.clone(), m)
}

/// `(c q^s; q)_k` as a Laurent polynomial.
fn poch_exact(c: &Rational, s: i64, k: u64) -> QLaurent {
    (0..k as i64).fold(QLaurent::one(), |acc, j| &acc * &lin(c, s + j))
}

fn vanishes(c: &Rational, s: i64, k: u64) -> bool {
    c.is_one() && s <= 0 && s + k as i64 > 0
}

/// Both sides of the terminating 6phi5 summation at `(a, b, c)` with `q` free,
/// each multiplied by `D = (1-a)(q;q)_N (aq/b;q)_N (aq/c;q)_N (aq^(N+1);q)_N`;
/// `None` when a denominator vanishes identically.
fn jackson_sides(n: u64, a: &Rational, b: &Rational, c: &Rational) -> Option<(QLaurent, QLaurent)> {
    if a.is_one() || b.is_zero() || c.is_zero() {
        return None;
    }
    let ab = a / b;
    let ac = a / c;
    let abc = a / (b * c);
    for (x, s) in [(&ab, 1), (&ac, 1), (a, n as i64 + 1)] {
        if vanishes(x, s, n) {
            return None;
        }
    }
    let one = rat(1);
    let n_i = n as i64;
    let mut lhs = QLaurent::zero();
    for k in 0..=n {
        let k_i = k as i64;
        let mut t = lin(a, 2 * k_i);
        for (x, s) in [(a, 0), (b, 0), (c, 0), (&one, -n_i)] {
            t = &t * &poch_exact(x, s, k);
        }
        t = &t * &QLaurent::monomial(abc.pow(k as i32), (n_i + 1) * k_i);
        // D divided by the k-th denominator
        for (x, s) in [(&one, 1), (&ab, 1), (&ac, 1), (a, n_i + 1)] {
            t = &t * &poch_exact(x, s + k_i, n - k);
        }
        lhs = &lhs + &t;
    }
    let mut rhs = QLaurent::from(QPoly::constant(Rational::one() - a));
    for (x, s) in [(a, 1), (&abc, 1), (&one, 1), (a, n_i + 1)] {
        rhs = &rhs * &poch_exact(x, s, n);
    }
    Some((lhs, rhs))
}

/// Ten rational parameter triples with no special coincidences.
pub fn default_jackson_points() -> Vec<(Rational, Rational, Rational)> {
    [
        ((2, 1), (3, 1), (5, 1)),
        ((3, 1), (5, 1), (7, 1)),
        ((1, 2), (3, 1), (7, 1)),
        ((-2, 1), (5, 3), (7, 2)),
        ((5, 7), (-3, 2), (11, 1)),
        ((7, 3), (2, 5), (-4, 1)),
        ((-1, 3), (9, 2), (13, 5)),
        ((11, 2), (-7, 3), (3, 4)),
        ((4, 9), (6, 1), (-5, 2)),
        ((13, 1), (1, 7), (8, 3)),
    ]
    .iter()
    .map(|&((a, b), (c, d), (e, f))| (frac(a, b), frac(c, d), frac(e, f)))
    .collect()
}

/// Exact check of the terminating 6phi5 summation with `N = n` at each point.
pub fn verify_jackson(n: u64, points: &[(Rational, Rational, Rational)]) -> Result<SeriesVerdict> {
    let start = Instant::now();
    let mut v = SeriesVerdict { status: Status::Verified, points_used: 0, points_skipped: 0, witness: None, elapsed_ms: 0 };
    for (a, b, c) in points {
        match jackson_sides(n, a, b, c) {
            None => v.points_skipped += 1,
            Some((lhs, rhs)) => {
                v.points_used += 1;
                if lhs != rhs && v.witness.is_none() {
                    v.status = Status::Refuted;
                    v.witness = Some(format!("N = {n}, (a, b, c) = ({a}, {b}, {c})"));
                }
            }
        }
    }
    if v.points_used == 0 {
        return Err(Error::InapplicablePoint(format!("every point degenerates for N = {n}")));
    }
    v.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(v)
}

/// Both sides of the quadratic transformation at rational `(a, d, b)`, through `q^order`.
fn rahman_sides(order: usize, a: &Rational, d: &Rational, b: &Rational) -> Option<(QSeries, QSeries)> {
    if a.is_one() || a.is_zero() || d.is_zero() || b.is_zero() {
        return None;
    }
    let ab = a / b;
    let a_d = a / d;
    let ad = a * d;
    let mut lhs = QSeries::zero(order);
    let mut k = 0usize;
    while k * (k + 1) / 2 <= order {
        let mut t = QSeries::monomial((a / b).pow(k as i32), k * (k + 1) / 2, order);
        // (a;q)_k / (1 - a) = (aq;q)_{k-1}
        if k >= 1 {
            poch_series(&mut t, a, 1, 1, k - 1, false);
        }
        t.mul_one_minus(a, 3 * k);
        poch_series(&mut t, d, 0, 1, k, false);
        poch_series(&mut t, &d.recip(), 1, 1, k, false);
        poch_series(&mut t, b, 0, 2, k, false);
        for (c, s, step) in [(&rat(1), 2, 2), (&a_d, 2, 2), (&ad, 1, 2), (&ab, 1, 1)] {
            poch_series(&mut t, c, s, step, k, true);
        }
        if k == 0 {
            // (1 - a q^0) / (1 - a) = 1
            t = QSeries::monomial(Rational::one(), 0, order);
        }
        lhs = &lhs + &t;
        k += 1;
    }
    let mut rhs = series_pochhammer_inf(a, 1, 1, order);
    rhs = &rhs * &series_pochhammer_inf(&(&ad / b), 1, 2, order);
    rhs = &rhs * &series_pochhammer_inf(&(a / (b * d)), 2, 2, order);
    for (c, s, step) in [(&ab, 1, 1), (&a_d, 2, 2), (&ad, 1, 2)] {
        rhs = &rhs * &series_pochhammer_inf(c, s, step, order).inverse().ok()?;
    }
    Some((lhs, rhs))
}

pub fn default_rahman_points() -> Vec<(Rational, Rational, Rational)> {
    [((1, 2), (2, 1), (3, 1)), ((3, 1), (5, 1), (7, 1)), ((-2, 3), (7, 2), (-5, 1)), ((5, 4), (-3, 1), (2, 7)), ((7, 1), (1, 3), (9, 5))]
        .iter()
        .map(|&((a, b), (c, d), (e, f))| (frac(a, b), frac(c, d), frac(e, f)))
        .collect()
}

fn first_difference(lhs: &QSeries, rhs: &QSeries) -> Option<usize> {
    (0..=lhs.order().min(rhs.order())).find(|&i| lhs.coeff(i) != rhs.coeff(i))
}

/// Coefficientwise check through `q^order` at each `(a, d, b)`.
pub fn verify_rahman(order: usize, points: &[(Rational, Rational, Rational)]) -> Result<SeriesVerdict> {
    let start = Instant::now();
    let mut v = SeriesVerdict { status: Status::Verified, points_used: 0, points_skipped: 0, witness: None, elapsed_ms: 0 };
    for (a, d, b) in points {
        match rahman_sides(order, a, d, b) {
            None => v.points_skipped += 1,
            Some((lhs, rhs)) => {
                v.points_used += 1;
                if let Some(i) = first_difference(&lhs, &rhs) {
                    if v.witness.is_none() {
                        v.status = Status::Refuted;
                        v.witness = Some(format!("(a, d, b) = ({a}, {d}, {b}): coefficient of q^{i} differs"));
                    }
                }
            }
        }
    }
    if v.points_used == 0 {
        return Err(Error::InapplicablePoint("every point degenerates".into()));
    }
    v.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(v)
}

/// Both sides of the `q -> q^2, a = q, d = aq, b -> q^2/b` specialization at rational `(a, b)`.
fn rahman_q2_sides(order: usize, a: &Rational, b: &Rational) -> Option<(QSeries, QSeries)> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let inv_a = a.recip();
    let one = rat(1);
    let mut lhs = QSeries::zero(order);
    let mut k = 0usize;
    while k * k <= order {
        let mut t = QSeries::monomial(b.pow(k as i32), k * k, order);
        // [6k+1] = (1 - q^(6k+1)) / (1 - q)
        t.mul_one_minus(&one, 6 * k + 1);
        t.div_one_minus(&one, 1);
        poch_series(&mut t, a, 1, 2, k, false);
        poch_series(&mut t, &inv_a, 1, 2, k, false);
        poch_series(&mut t, &one, 1, 2, k, false);
        poch_series(&mut t, &b.recip(), 2, 4, k, false);
        for (c, s, step) in [(a, 4, 4), (&inv_a, 4, 4), (&one, 4, 4), (b, 1, 2)] {
            poch_series(&mut t, c, s, step, k, true);
        }
        lhs = &lhs + &t;
        k += 1;
    }
    let mut rhs = series_pochhammer_inf(&one, 3, 2, order);
    rhs = &rhs * &series_pochhammer_inf(&(a * b), 2, 4, order);
    rhs = &rhs * &series_pochhammer_inf(&(b / a), 2, 4, order);
    for (c, s, step) in [(b, 1, 2), (a, 4, 4), (&inv_a, 4, 4)] {
        rhs = &rhs * &series_pochhammer_inf(c, s, step, order).inverse().ok()?;
    }
    Some((lhs, rhs))
}

pub fn default_rahman_q2_points() -> Vec<(Rational, Rational)> {
    vec![(rat(2), rat(3)), (frac(-1, 3), frac(5, 2)), (frac(3, 7), rat(-4))]
}

/// The specialized form used to derive the `[6k+1]` lemma, checked through `q^order`.
pub fn verify_rahman_q2(order: usize, points: &[(Rational, Rational)]) -> Result<SeriesVerdict> {
    let start = Instant::now();
    let mut v = SeriesVerdict { status: Status::Verified, points_used: 0, points_skipped: 0, witness: None, elapsed_ms: 0 };
    for (a, b) in points {
        match rahman_q2_sides(order, a, b) {
            None => v.points_skipped += 1,
            Some((lhs, rhs)) => {
                v.points_used += 1;
                if let Some(i) = first_difference(&lhs, &rhs) {
                    if v.witness.is_none() {
                        v.status = Status::Refuted;
                        v.witness = Some(format!("(a, b) = ({a}, {b}): coefficient of q^{i} differs"));
                    }
                }
            }
        }
    }
    if v.points_used == 0 {
        return Err(Error::InapplicablePoint("every point degenerates".into()));
    }
    v.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let t = 10;
        let g = QSeries::from_coeffs(vec![rat(1); t + 1], t);
        assert_eq!(&QSeries::one_minus(&rat(1), 1, t) * &g, QSeries::one(t));
        assert_eq!(QSeries::one_minus(&rat(1), 1, t).inverse().unwrap(), g);
        assert!(matches!(QSeries::monomial(rat(1), 1, t).inverse(), Err(Error::NonUnitConstantTerm)));
    }

    #[test]
    fn euler_product_low_order() {
        let e = series_pochhammer_inf(&rat(1), 1, 1, 6);
        let expected: Vec<Rational> = [1, -1, -1, 0, 0, 1, 0].iter().map(|&x| rat(x)).collect();
        assert_eq!(e.coeffs(), expected.as_slice());
        assert_eq!(series_pochhammer_inf(&rat(0), 1, 1, 6), QSeries::one(6));
        assert_eq!(series_pochhammer_inf(&rat(1), 1, 1, 0), QSeries::one(0));
    }

    #[test]
    fn jackson_small() {
        let pts = vec![(rat(2), rat(3), rat(5))];
        for n in [0, 1, 4] {
            assert_eq!(verify_jackson(n, &pts).unwrap().status, Status::Verified);
        }
    }

    #[test]
    fn rahman_small() {
        assert_eq!(verify_rahman(0, &default_rahman_points()).unwrap().status, Status::Verified);
        assert_eq!(verify_rahman(20, &[(frac(1, 2), rat(2), rat(3))]).unwrap().status, Status::Verified);
        assert_eq!(verify_rahman_q2(20, &[(rat(2), rat(3)), (frac(-1, 3), frac(5, 2))]).unwrap().status, Status::Verified);
    }
}
