//! Deterministic property sweeps shared by the property tests and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qcong::engine::Strategy as CheckStrategy;
use qcong::param::{MPolyAB, PPoly};
use qcong::numbers::{bernoulli, binomial, divisors, factorial, frac, is_prime, pochhammer, rat, Rational};
use qcong::powerseries::{series_pochhammer_inf, QSeries};
use qcong::qpoly::{cyclotomic, q_binomial, q_integer, qpoch_pow, QLaurent, QPoly};
use qcong::qseries::{spec, summand_term};
use qcong::registry::{any_parity, verify_target, Family, Range, TargetId, REGISTRY};
use qcong::supercong::{series_sum, Series};

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| frac(n, d))
}

pub fn mpoly() -> impl Strategy<Value = MPolyAB> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -3i64..=3), 0..4)
        .prop_map(|ts| MPolyAB::from_terms(ts.into_iter().map(|(e, c)| (e, rat(c)))))
}

pub fn ppoly(max_len: usize) -> impl Strategy<Value = PPoly> {
    prop::collection::vec(mpoly(), 1..=max_len).prop_map(|cs| PPoly::new(cs, 0))
}

/// `lc(m)^e f = quot m + rem` with `deg_q rem < deg_q m`.
pub fn pseudo_division_holds(f: &PPoly, m: &PPoly) -> Check {
    let (quot, rem, e) = f.pseudo_divrem(m).map_err(|e| e.to_string())?;
    let lc = m.lc_q();
    let scale = if lc.as_constant().is_some() { MPolyAB::one() } else { lc.pow(e) };
    let diff = &f.scale(&scale) - &(&(&quot * m) + &rem);
    ensure(diff.is_zero(), || format!("identity fails for f = {f}, m = {m}"))?;
    ensure(rem.is_zero() || rem.deg_q() < m.deg_q(), || format!("remainder degree for f = {f}, m = {m}"))
}

/// Pseudo-division on `cases` instances drawn from a fixed seed; returns the number checked.
pub fn pseudo_division_seeded(cases: u32) -> Result<u32, String> {
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, rng);
    let count = std::cell::Cell::new(0);
    let nonzero = ppoly(13).prop_filter("nonzero divisor", |m| !m.is_zero());
    runner
        .run(&(ppoly(13), nonzero), |(f, m)| {
            count.set(count.get() + 1);
            pseudo_division_holds(&f, &m).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok(count.get())
}

pub fn cyclotomic_product(max: u64) -> Check {
    for n in 1..=max {
        let mut prod = QPoly::one();
        for d in divisors(n) {
            prod = &prod * &cyclotomic(d);
        }
        let expected = &QPoly::monomial(rat(1), n as usize) - &QPoly::one();
        ensure(prod == expected, || format!("prod Phi_d != q^{n} - 1"))?;
    }
    Ok(())
}

pub fn q_integer_factorization(max: u64) -> Check {
    for n in 1..=max {
        let mut prod = QPoly::one();
        for d in divisors(n).into_iter().filter(|&d| d > 1) {
            prod = &prod * &cyclotomic(d);
        }
        ensure(prod == q_integer(n), || format!("[{n}] is not prod_(d|n, d>1) Phi_d"))?;
        ensure(q_integer(n).eval(&rat(1)) == rat(n as i64), || format!("[{n}] at q = 1"))?;
    }
    Ok(())
}

pub fn q_pascal(max: u64) -> Check {
    for m in 1..=max {
        for k in 0..=m as i64 {
            let lhs = q_binomial(m, k);
            let first = &q_binomial(m - 1, k - 1) + &q_binomial(m - 1, k).shift(k as usize);
            let second = &q_binomial(m - 1, k - 1).shift((m as i64 - k) as usize) + &q_binomial(m - 1, k);
            ensure(lhs == first && lhs == second, || format!("q-Pascal fails at m = {m}, k = {k}"))?;
            ensure(lhs.eval(&rat(1)) == Rational::from_integer(binomial(m, k as u64)), || format!("[{m} choose {k}] at q = 1"))?;
        }
    }
    Ok(())
}

pub fn pochhammer_multiplicative(x: &Rational, m: u32, n: u32) -> Check {
    ensure(pochhammer(x, m + n) == pochhammer(x, m) * pochhammer(&(x + rat(m as i64)), n), || {
        format!("({x})_{{{m}+{n}}}")
    })
}

pub fn qpoch_multiplicative(s: u64, d: u64, m: u64, n: u64) -> Check {
    ensure(qpoch_pow(s, d, m + n) == &qpoch_pow(s, d, m) * &qpoch_pow(s + m * d, d, n), || {
        format!("(q^{s};q^{d})_{{{m}+{n}}}")
    })
}

pub fn central_binomial(max: u32) -> Check {
    let mut four = BigInt::one();
    for k in 0..=max {
        let lhs = pochhammer(&frac(1, 2), k) / Rational::from_integer(factorial(k));
        let rhs = Rational::new(binomial(2 * k as u64, k as u64), four.clone());
        ensure(lhs == rhs, || format!("(1/2)_k/k! != C(2k,k)/4^k at k = {k}"))?;
        four *= 4;
    }
    Ok(())
}

pub fn bernoulli_properties(max: usize) -> Check {
    let known = [(0, frac(1, 1)), (1, frac(-1, 2)), (2, frac(1, 6)), (4, frac(-1, 30)), (12, frac(-691, 2730)), (20, frac(-174611, 330))];
    for (m, b) in known {
        ensure(bernoulli(m) == b, || format!("B_{m}"))?;
    }
    for n in 1..=max {
        let s: Rational = (0..=n).map(|k| Rational::from_integer(binomial(n as u64 + 1, k as u64)) * bernoulli(k)).sum();
        ensure(s.is_zero(), || format!("recurrence fails at n = {n}"))?;
        if n >= 3 && n % 2 == 1 {
            ensure(bernoulli(n).is_zero(), || format!("B_{n} should vanish"))?;
        }
        if n % 2 == 0 {
            // von Staudt-Clausen: B_n + sum_{(p-1) | n} 1/p is an integer.
            let mut t = bernoulli(n);
            for p in (2..=n as u64 + 1).filter(|&p| is_prime(p) && n as u64 % (p - 1) == 0) {
                t += frac(1, p as i64);
            }
            ensure(t.is_integer(), || format!("von Staudt-Clausen fails at n = {n}"))?;
        }
    }
    Ok(())
}

/// `(q;q)_inf = sum_j (-1)^j q^{j(3j-1)/2}` over all integers `j`, through `q^order`.
pub fn euler_pentagonal(order: usize) -> Check {
    let prod = series_pochhammer_inf(&rat(1), 1, 1, order);
    let mut coeffs = vec![Rational::zero(); order + 1];
    for j in -(order as i64)..=(order as i64) {
        let e = j * (3 * j - 1) / 2;
        if e >= 0 && e as usize <= order {
            coeffs[e as usize] += rat(if j % 2 == 0 { 1 } else { -1 });
        }
    }
    ensure(prod == QSeries::from_coeffs(coeffs, order), || "pentagonal number theorem".into())
}

/// The limit `q -> 1` of a rational function given as numerator and denominator.
pub fn limit_at_one(num: &QLaurent, den: &QLaurent) -> Option<Rational> {
    let (mut n, _) = num.clear_offset();
    let (mut d, _) = den.clear_offset();
    let x = QPoly::from_i64(&[-1, 1]);
    loop {
        let (dn, dd) = (n.eval(&rat(1)), d.eval(&rat(1)));
        if !dd.is_zero() {
            return Some(dn / dd);
        }
        if !dn.is_zero() || d.is_zero() {
            return None;
        }
        n = n.divrem(&x).ok()?.0;
        d = d.divrem(&x).ok()?.0;
    }
}

/// Summands of the q-sums at `a = b = 1`, `q -> 1` match the classical terms.
pub fn classical_degeneration(max_k: u64) -> Check {
    let pairs = [
        ("thm1", Series::C2),
        ("lem-qlong", Series::C2),
        ("qgw", Series::C2),
        ("qj2", Series::J2),
        ("thm2", Series::J2),
        ("qdiv", Series::Sun),
        ("thm3", Series::Sun),
        ("lem-3k1", Series::Sun),
    ];
    for (name, series) in pairs {
        let sp = spec(name).map_err(|e| e.to_string())?;
        for k in 0..=max_k {
            let term = summand_term(&sp, k).map_err(|e| e.to_string())?;
            let (num, den) = term.to_prat().specialize(&rat(1), &rat(1));
            let got = limit_at_one(&num, &den).ok_or_else(|| format!("{name}: no limit at k = {k}"))?;
            let prev = if k == 0 { Rational::zero() } else { series_sum(series, k - 1).map_err(|e| e.to_string())? };
            let want = series_sum(series, k).map_err(|e| e.to_string())? - prev;
            ensure(got == want, || format!("{name}: term {k} degenerates to {got}, expected {want}"))?;
        }
    }
    Ok(())
}

/// Both strategies reach the same status on every q-target for odd `n <= max_n`.
pub fn strategy_agreement(max_n: u64) -> Check {
    for info in REGISTRY.iter().filter(|t| t.family == Family::Q) {
        let ns: Vec<u64> = if any_parity(info.name) { (1..=max_n).collect() } else { (1..=max_n).step_by(2).collect() };
        let ds: Vec<Option<u64>> = if info.takes_d { vec![Some(1), Some(2)] } else { vec![None] };
        let ranges: Vec<Option<Range>> = if info.takes_range { vec![Some(Range::Half), Some(Range::Full)] } else { vec![None] };
        for &n in &ns {
            for &d in &ds {
                for &range in &ranges {
                    let id = TargetId { name: info.name.to_string(), n, d, range };
                    let sym = verify_target(&id, &CheckStrategy::symbolic()).map_err(|e| format!("{id:?}: {e}"))?;
                    let spe = verify_target(&id, &CheckStrategy::specialize()).map_err(|e| format!("{id:?}: {e}"))?;
                    ensure(sym.status == spe.status, || {
                        format!("{} n={n} d={d:?} range={range:?}: symbolic {} vs specialize {}", info.name, sym.status, spe.status)
                    })?;
                }
            }
        }
    }
    Ok(())
}
