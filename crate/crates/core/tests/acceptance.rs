//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcong::engine::{verify_lhopital, Status, Strategy};
use qcong::powerseries::{default_jackson_points, default_rahman_points, verify_jackson, verify_rahman};
use qcong::registry::{verify_target, Kind, Range, Report, TargetId};
use qcong::supercong::{check_supercongruence, ClassicalKind, ClassicalTarget};

type Outcome = Result<String, String>;

fn odd(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|n| n % 2 == 1)
}

fn run(id: TargetId, strategy: &Strategy) -> Result<Report, String> {
    let label = format!("{} n={} d={:?} range={:?}", id.name, id.n, id.d, id.range);
    let report = verify_target(&id, strategy).map_err(|e| format!("{label}: {e}"))?;
    if report.status != Status::Verified {
        let witness = report.checks.iter().find_map(|c| c.verdict.witness.as_ref());
        return Err(format!("{label}: {} {witness:?}", report.status));
    }
    Ok(report)
}

/// Verifies `name` for each `n`, and each `d` when given.
fn sweep(name: &str, ns: impl Iterator<Item = u64>, ds: &[u64], strategy: &Strategy) -> Result<usize, String> {
    let mut cells = 0;
    for n in ns {
        if ds.is_empty() {
            run(TargetId::new(name, n), strategy)?;
            cells += 1;
        }
        for &d in ds {
            run(TargetId::new(name, n).with_d(d), strategy)?;
            cells += 1;
        }
    }
    Ok(cells)
}

fn c1() -> Outcome {
    let start = Instant::now();
    let s = Strategy::specialize();
    for n in odd(1, 25) {
        for d in [1, 2] {
            let report = run(TargetId::new("thm1", n).with_d(d), &s)?;
            let modulus = report.modulus();
            let expected = ["(1 - a*q^N)", "(a - q^N)"].map(|f| f.replace('N', &n.to_string()));
            if n > 1 && !(modulus.contains(&format!("[{n}]")) && modulus.contains(&format!("Phi_{n}")) && expected.iter().all(|f| modulus.contains(f))) {
                return Err(format!("thm1 n={n}: modulus {modulus:?}"));
            }
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(300) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("thm1, odd n <= 25, d = 1 and 2, in {:.1}s", t.as_secs_f64()))
}

fn c2() -> Outcome {
    let cells = sweep("thm2", odd(1, 21), &[], &Strategy::specialize())?;
    Ok(format!("thm2, {cells} cells, odd n <= 21"))
}

fn c3() -> Outcome {
    let cells = sweep("thm3", odd(1, 15), &[], &Strategy::specialize())?;
    Ok(format!("thm3, {cells} cells, odd n <= 15"))
}

fn c4() -> Outcome {
    let s = Strategy::specialize();
    for n in odd(1, 25) {
        for range in [Range::Half, Range::Full] {
            run(TargetId::new("qgw", n).with_range(range), &s)?;
        }
        run(TargetId::new("qj2", n), &s)?;
        run(TargetId::new("qdiv", n), &s)?;
    }
    Ok("qgw (both ranges), qj2, qdiv modulo [n]Phi_n^3, odd n <= 25".into())
}

fn c5() -> Outcome {
    let s = Strategy::specialize();
    let mut cells = 0;
    for name in ["lem1a", "lem1b", "anfrac", "anfrac2", "lem-j2", "lem-j2-bq2n", "lem-3k1", "lem-3k1-bqn"] {
        cells += sweep(name, odd(3, 15), &[], &s)?;
    }
    for name in ["lem-qlong", "lem-qlong-bqn"] {
        cells += sweep(name, odd(3, 15), &[1, 2], &s)?;
    }
    for name in ["ab-ident", "relation"] {
        cells += sweep(name, 1..=25, &[], &Strategy::symbolic())?;
    }
    Ok(format!("lemma layer, {cells} cells; ab-ident and relation symbolic for n <= 25"))
}

fn c6() -> Outcome {
    let s = Strategy::specialize();
    let mut cells = sweep("crt-thm1", odd(3, 11), &[1, 2], &s)?;
    cells += sweep("crt-thm2", odd(3, 11), &[], &s)?;
    cells += sweep("crt-thm3", odd(3, 11), &[], &s)?;
    Ok(format!("CRT combinations modulo [n](1-aq^n)(a-q^n)(b-q^n), {cells} cells"))
}

fn c7() -> Outcome {
    let s = Strategy::specialize();
    let cells = sweep("equiv", odd(3, 11), &[], &s)? + sweep("equiv2", odd(3, 21), &[], &s)?;
    Ok(format!("range equivalences, {cells} cells"))
}

fn c8() -> Outcome {
    for n in odd(1, 25) {
        let v = verify_lhopital(n).map_err(|e| format!("n={n}: {e}"))?;
        if !v.is_verified() {
            return Err(format!("n={n}: {:?}", v.witness));
        }
    }
    Ok("limit a -> 1 equals (n^2-1)(1-q)^2[n]^2/24 for odd n <= 25".into())
}

fn classical(kind: ClassicalKind, p: u64, r: u32, min_valuation: i64) -> Result<i64, String> {
    let t = ClassicalTarget::new(kind, p, r).map_err(|e| e.to_string())?;
    let v = check_supercongruence(&t).map_err(|e| e.to_string())?;
    if v.status != Status::Verified || !v.valuation.at_least(min_valuation) {
        return Err(format!("{} p={p} r={r}: valuation {} < {min_valuation}", kind.name(), v.valuation));
    }
    Ok(match v.valuation {
        qcong::numbers::Valuation::Finite(x) => x,
        qcong::numbers::Valuation::Infinite => i64::MAX,
    })
}

fn c9() -> Outcome {
    let start = Instant::now();
    let mut min_c2 = i64::MAX;
    for p in [5, 7, 11, 13, 17, 19] {
        min_c2 = min_c2.min(classical(ClassicalKind::C2Half, p, 1, 4)?);
        classical(ClassicalKind::J2, p, 1, 4)?;
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("c2 valuation >= {min_c2}, j2 valuation >= 4, p in 5..19, {:.2}s", t.as_secs_f64()))
}

fn c10() -> Outcome {
    for p in [5, 7, 11, 13] {
        for r in [1, 2] {
            classical(ClassicalKind::BernoulliConj, p, r, r as i64 + 4)?;
            classical(ClassicalKind::Sun3k1, p, r, r as i64 + 4)?;
        }
    }
    for r in [1, 2] {
        for p in [3, 5, 7] {
            classical(ClassicalKind::Aeqb, p, r, r as i64 + 4)?;
        }
        for p in [5, 7] {
            classical(ClassicalKind::RangeEquiv, p, r, r as i64 + 4)?;
        }
    }
    for kind in [ClassicalKind::BernoulliConj, ClassicalKind::Sun3k1, ClassicalKind::Aeqb] {
        let v = check_supercongruence(&ClassicalTarget::new(kind, 5, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if !v.conjecture {
            return Err(format!("{} not flagged as a conjecture", kind.name()));
        }
    }
    let s = Strategy::specialize();
    for (name, hi) in [("conj-final", 9), ("conj-aeqb-q", 15)] {
        for n in odd(3, hi) {
            let report = run(TargetId::new(name, n), &s)?;
            if report.kind != Kind::Conjecture {
                return Err(format!("{name} not flagged as a conjecture"));
            }
        }
    }
    Ok("conjecture instances, classical and q, all flagged".into())
}

fn c11() -> Outcome {
    let points = default_jackson_points();
    for n in 0..=8 {
        let v = verify_jackson(n, &points).map_err(|e| format!("N={n}: {e}"))?;
        if v.status != Status::Verified || v.points_used != 10 {
            return Err(format!("jackson N={n}: {:?}, {} points", v.status, v.points_used));
        }
    }
    let v = verify_rahman(40, &default_rahman_points()).map_err(|e| e.to_string())?;
    if v.status != Status::Verified || v.points_used != 5 {
        return Err(format!("rahman: {:?}, {} points", v.status, v.points_used));
    }
    Ok("jackson N <= 8 at 10 points; rahman through q^40 at 5 points".into())
}

fn c12() -> Outcome {
    common::cyclotomic_product(60)?;
    common::q_integer_factorization(60)?;
    common::q_pascal(30)?;
    for m in 0..12 {
        for n in 0..12 {
            common::pochhammer_multiplicative(&qcong::numbers::frac(-7, 3), m, n)?;
            common::qpoch_multiplicative(1 + (m as u64 % 3), 2, m as u64, n as u64)?;
        }
    }
    common::central_binomial(200)?;
    common::bernoulli_properties(100)?;
    let cases = common::pseudo_division_seeded(200)?;
    common::strategy_agreement(9)?;
    common::classical_degeneration(10)?;
    common::euler_pentagonal(50)?;
    Ok(format!("property sweeps, {cases} pseudo-division instances, strategy agreement for n <= 9"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("thm1 sweep", c1),
        ("thm2 sweep", c2),
        ("thm3 sweep", c3),
        ("parameter-free q-congruences", c4),
        ("lemma layer", c5),
        ("CRT combinations", c6),
        ("range equivalences", c7),
        ("a -> 1 limit", c8),
        ("classical supercongruences", c9),
        ("conjecture instances", c10),
        ("series identities", c11),
        ("property suites", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
