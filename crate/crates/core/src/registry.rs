//! Named verification targets: each one builds its two sides and modulus and
//! runs them through the congruence engine.

use serde::Serialize;

use crate::engine::{check_identity, check_terms, modulus, verify_lhopital, Status, Strategy, StrategyKind, Verdict};
use crate::error::{Error, Result};
use crate::numbers::rat;
use crate::param::{MPolyAB, PPoly};
use crate::qpoly::q_binomial;
use crate::qseries::{
    crt_combine_terms, crt_factor_ab, crt_factor_b, rhs_lemma_terms, rhs_qlimit_terms, rhs_theorem_terms, spec,
    sum_terms, Variant,
};
use crate::terms::{Term, TermSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Theorem,
    Lemma,
    Identity,
    Conjecture,
}

/// Which layer of the toolkit evaluates a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Polynomial congruences in `q` (parameters `n`, `d`, range).
    Q,
    /// Integer supercongruences (parameters `p`, `r`).
    Classical,
    /// Basic hypergeometric identities (truncation order).
    Series,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetInfo {
    pub name: &'static str,
    pub family: Family,
    pub kind: Kind,
    /// Accepts `d` in {1, 2}.
    pub takes_d: bool,
    /// Accepts a half/full range selector.
    pub takes_range: bool,
    pub modulus: &'static str,
    pub statement: &'static str,
}

const fn q(name: &'static str, kind: Kind, takes_d: bool, modulus: &'static str, statement: &'static str) -> TargetInfo {
    TargetInfo { name, family: Family::Q, kind, takes_d, takes_range: false, modulus, statement }
}

pub static REGISTRY: &[TargetInfo] = &[
    q("thm1", Kind::Theorem, true, "n-phi-a", "sum_{k<=(n-1)/d} [4k+1](aq;q^2)_k(q/a;q^2)_k(q;q^2)_k^2/((aq^2;q^2)_k(q^2/a;q^2)_k(q^2;q^2)_k^2) == q^((1-n)/2)[n](1 + (1-aq^n)(a-q^n)/(1-a)^2 (1 - n(1-a)a^((n-1)/2)/(1-a^n)))"),
    q("thm2", Kind::Theorem, false, "n-phi-a", "sum_{k<=(n-1)/2} q^(k^2)[6k+1](aq;q^2)_k(q/a;q^2)_k(q^2;q^4)_k/((aq^4;q^4)_k(q^4/a;q^4)_k(q^4;q^4)_k) == same right side as thm1 with base -q"),
    q("thm3", Kind::Theorem, false, "n-phi-a", "sum_{k<=n-1} q^(-k(k+1)/2)[3k+1](aq;q^2)_k(q/a;q^2)_k(q;q^2)_k/((aq;q)_k(q/a;q)_k(q^2;q^2)_k) == same right side as thm1"),
    q("lem-qlong", Kind::Lemma, true, "n-a", "sum_{k<=(n-1)/d} [4k+1](aq;q^2)_k(q/a;q^2)_k(q/b;q^2)_k(q;q^2)_k b^k/((aq^2;q^2)_k(q^2/a;q^2)_k(bq^2;q^2)_k(q^2;q^2)_k) == (b/q)^((n-1)/2)(q^2/b;q^2)_((n-1)/2)/(bq^2;q^2)_((n-1)/2) [n]"),
    q("lem-qlong-bqn", Kind::Lemma, true, "b-qn", "lem-qlong sum == (q;q^2)_((n-1)/2)^2 [n]/((aq^2;q^2)_((n-1)/2)(q^2/a;q^2)_((n-1)/2))"),
    q("lem-j2", Kind::Lemma, false, "n-a", "sum_{k<=(n-1)/2} [6k+1](aq;q^2)_k(q/a;q^2)_k(q;q^2)_k(q^2/b;q^4)_k b^k q^(k^2)/((aq^4;q^4)_k(q^4/a;q^4)_k(q^4;q^4)_k(bq;q^2)_k) == (q^(2+r)/b;q^4)_L/(bq^(2+r);q^4)_L b^L (-q)^((1-n)/2)[n], n = r mod 4, L = (n-r)/4"),
    q("lem-j2-bq2n", Kind::Lemma, false, "b-q2n", "lem-j2 sum == (q;q^2)_((n-1)/2)(q^(n+2);q^2)_((n-1)/2)[n]/((aq^4;q^4)_((n-1)/2)(q^4/a;q^4)_((n-1)/2))"),
    q("lem-3k1", Kind::Lemma, false, "n-a", "sum_{k<=n-1} [3k+1](aq;q^2)_k(q/a;q^2)_k(q;q^2)_k(q/b;q)_k b^k q^(-k(k+1)/2)/((aq;q)_k(q/a;q)_k(q;q)_k(bq^2;q^2)_k) == lem-qlong right side"),
    q("lem-3k1-bqn", Kind::Lemma, false, "b-qn", "lem-3k1 sum == lem-qlong-bqn right side"),
    q("crt-thm1", Kind::Lemma, true, "n-a-b", "lem-qlong sum == combination of the lem-qlong and lem-qlong-bqn right sides by the ab-ident multipliers"),
    q("crt-thm2", Kind::Lemma, false, "n-a-b", "lem-j2 sum with b -> b^2 == combination of the lem-j2 (b -> b^2) and lem-j2-bq2n right sides"),
    q("crt-thm2-literal", Kind::Lemma, false, "n-a-b", "crt-thm2 with the first right-side term kept in b rather than b^2, as printed; expected to fail"),
    q("crt-thm3", Kind::Lemma, false, "n-a-b", "lem-3k1 sum == combination of the lem-3k1 and lem-3k1-bqn right sides"),
    TargetInfo {
        name: "qgw",
        family: Family::Q,
        kind: Kind::Theorem,
        takes_d: false,
        takes_range: true,
        modulus: "n-phi3",
        statement: "sum_{k<=(n-1)/2 or n-1} [4k+1](q;q^2)_k^4/(q^2;q^2)_k^4 == q^((1-n)/2)[n] + (n^2-1)(1-q)^2/24 q^((1-n)/2)[n]^3",
    },
    q("qj2", Kind::Theorem, false, "n-phi3", "sum_{k<=(n-1)/2} q^(k^2)[6k+1](q;q^2)_k^2(q^2;q^4)_k/(q^4;q^4)_k^3 == qgw right side with base -q"),
    q("qdiv", Kind::Theorem, false, "n-phi3", "sum_{k<=n-1} [3k+1](q;q^2)_k^3 q^(-k(k+1)/2)/((q;q)_k^2(q^2;q^2)_k) == qgw right side"),
    q("equiv", Kind::Theorem, false, "n-phi-a-b", "lem-qlong sum to (n-1)/2 == lem-qlong sum to n-1"),
    q("equiv2", Kind::Theorem, false, "n-phi4", "qgw sum to (n-1)/2 == qgw sum to n-1"),
    q("conj-final", Kind::Conjecture, false, "n-phi-a-b", "lem-qlong sum to (n-1)/2 == lem-3k1 sum to n-1"),
    q("conj-aeqb-q", Kind::Conjecture, false, "n-phi4", "qgw sum to (n-1)/2 == qdiv sum to n-1"),
    q("ab-ident", Kind::Identity, false, "a; b-qn", "(b-q^n)(ab-1-a^2+aq^n)/((a-b)(1-ab)) == 1 mod (1-aq^n)(a-q^n); (1-aq^n)(a-q^n)/((a-b)(1-ab)) == 1 mod b-q^n"),
    q("relation", Kind::Identity, false, "none", "(1-q^n)(1+a^2-a-aq^n) = (1-a)^2 + (1-aq^n)(a-q^n)"),
    q("lem1a", Kind::Lemma, false, "phi", "(aq^2;q^2)_h(q^2/a;q^2)_h == (-1)^h (1-a^n) q^(-h^2)/((1-a)a^h), h = (n-1)/2"),
    q("lem1b", Kind::Lemma, false, "phi", "(aq;q^2)_h(q/a;q^2)_h == (-1)^h (1-a^n) q^((1-n^2)/4)/((1-a)a^h)"),
    q("anfrac", Kind::Lemma, false, "phi", "(q;q^2)_h^2/((aq^2;q^2)_h(q^2/a;q^2)_h) == n(1-a)a^h/((1-a^n)q^h)"),
    q("anfrac-literal", Kind::Lemma, false, "phi", "anfrac with (aq;q^2)_h(q/a;q^2)_h in the denominator, as printed; expected to fail"),
    q("anfrac2", Kind::Lemma, false, "phi", "(q;q^2)_h(q^(n+2);q^2)_h/((aq^4;q^4)_h(q^4/a;q^4)_h) == (q;q^2)_h(q^2;q^2)_h/(same) == (-q)^(-h) n(1-a)a^h/(1-a^n)"),
    q("qbino", Kind::Identity, false, "phi", "(aq;q)_(n-1) = sum_k (-1)^k q^(k(k+1)/2) [n-1 choose k] a^k == sum_k a^k"),
    q("lhopital", Kind::Identity, false, "none", "lim_{a->1} (1-aq^n)(a-q^n)(1-a^n-n(1-a)a^((n-1)/2))/((1-a)^2(1-a^n)) = (n^2-1)(1-q)^2[n]^2/24"),
    TargetInfo { name: "c2-half", family: Family::Classical, kind: Kind::Theorem, takes_d: false, takes_range: false, modulus: "p^3", statement: "sum_{k<=(p^r-1)/2} (4k+1)(1/2)_k^4/k!^4 == p^r" },
    TargetInfo { name: "c2-full", family: Family::Classical, kind: Kind::Theorem, takes_d: false, takes_range: false, modulus: "p^3", statement: "sum_{k<=p^r-1} (4k+1)(1/2)_k^4/k!^4 == p^r" },
    TargetInfo { name: "j2", family: Family::Classical, kind: Kind::Theorem, takes_d: false, takes_range: false, modulus: "p^4", statement: "sum_{k<=(p-1)/2} (6k+1)(1/2)_k^3/(k!^3 4^k) == (-1)^((p-1)/2) p" },
    TargetInfo { name: "sun-3k1", family: Family::Classical, kind: Kind::Conjecture, takes_d: false, takes_range: false, modulus: "p^(r+4)", statement: "sum_{k<=p^r-1} (3k+1)(1/2)_k^3 4^k/k!^3 == p^r + 7/6 B_(p-3) p^(r+3)" },
    TargetInfo { name: "bernoulli-conj", family: Family::Classical, kind: Kind::Conjecture, takes_d: false, takes_range: false, modulus: "p^(r+4)", statement: "sum_{k<=(p^r-1)/2} (4k+1)(1/2)_k^4/k!^4 == p^r + 7/6 B_(p-3) p^(r+3)" },
    TargetInfo { name: "aeqb", family: Family::Classical, kind: Kind::Conjecture, takes_d: false, takes_range: false, modulus: "p^(r+4)", statement: "c2-half sum == sun-3k1 sum" },
    TargetInfo { name: "range-equiv", family: Family::Classical, kind: Kind::Theorem, takes_d: false, takes_range: false, modulus: "p^(r+4)", statement: "c2-half sum == c2-full sum" },
    TargetInfo { name: "jackson", family: Family::Series, kind: Kind::Identity, takes_d: false, takes_range: false, modulus: "none", statement: "terminating very-well-poised 6phi5 summation, exact at rational points" },
    TargetInfo { name: "rahman", family: Family::Series, kind: Kind::Identity, takes_d: false, takes_range: false, modulus: "none", statement: "quadratic transformation with (a;q)_k(1-aq^3k)(d;q)_k(q/d;q)_k(b;q^2)_k, truncated at q^T" },
];

pub fn target_info(name: &str) -> Result<&'static TargetInfo> {
    REGISTRY.iter().find(|t| t.name == name).ok_or_else(|| Error::UnknownTarget(name.to_string()))
}

/// The default strategy for a target: symbolic for pure identities, specialize otherwise.
pub fn default_strategy(name: &str) -> Strategy {
    match name {
        "ab-ident" | "relation" | "qbino" => Strategy::symbolic(),
        _ => Strategy::specialize(),
    }
}

/// Targets that hold for every positive `n`, not only odd ones.
pub fn any_parity(name: &str) -> bool {
    matches!(name, "ab-ident" | "relation")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Range {
    Half,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetId {
    pub name: String,
    pub n: u64,
    pub d: Option<u64>,
    pub range: Option<Range>,
}

impl TargetId {
    pub fn new(name: &str, n: u64) -> Self {
        TargetId { name: name.to_string(), n, d: None, range: None }
    }

    pub fn with_d(mut self, d: u64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_range(mut self, r: Range) -> Self {
        self.range = Some(r);
        self
    }
}

/// One congruence or identity evaluated for a target.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub modulus: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub target: String,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
    pub kind: Kind,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn modulus(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.checks {
            for m in &c.modulus {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
        }
        out
    }
}

fn half(n: u64) -> u64 {
    (n - 1) / 2
}

fn sum(name: &str, upper: u64) -> Result<TermSum> {
    sum_terms(&spec(name)?, upper)
}

fn one_minus_a_pow(k: u32) -> MPolyAB {
    &MPolyAB::one() - &MPolyAB::term(rat(1), k, 0)
}

fn sign(h: u64) -> i64 {
    if h % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `n (1-a) a^h / (1-a^n)`.
fn an_ratio(n: u64) -> Result<Term> {
    let mut t = Term::constant(rat(n as i64));
    t.mul_free(one_minus_a_pow(1), false)?;
    t.mul_free(one_minus_a_pow(n as u32), true)?;
    t.mono.0 += half(n) as i64;
    Ok(t)
}

fn congruence(label: &str, lhs: &TermSum, rhs: &TermSum, kind: &str, n: u64, strategy: &Strategy) -> Result<Check> {
    let m = modulus(kind, n)?;
    let verdict = check_terms(&lhs.sub(rhs), &m, strategy)?;
    Ok(Check { label: label.to_string(), modulus: m.factors.iter().map(|f| f.name.clone()).collect(), verdict })
}

fn identity(label: &str, lhs: &TermSum, rhs: &TermSum, strategy: &Strategy) -> Check {
    Check { label: label.to_string(), modulus: Vec::new(), verdict: check_identity(&lhs.sub(rhs), strategy) }
}

fn one() -> TermSum {
    TermSum::from_term(Term::one())
}

fn crt_rhs(ab: &str, b: &str, n: u64) -> Result<TermSum> {
    crt_combine_terms(&rhs_lemma_terms(ab, n)?, &rhs_lemma_terms(b, n)?, n)
}

/// Builds and checks a `q`-side target.
pub fn verify_target(id: &TargetId, strategy: &Strategy) -> Result<Report> {
    let info = target_info(&id.name)?;
    if info.family != Family::Q {
        return Err(Error::InvalidParams(format!("{} is not a q-congruence target", id.name)));
    }
    let n = id.n;
    if n == 0 || (n % 2 == 0 && !any_parity(info.name)) {
        return Err(Error::InvalidParams(format!("n must be odd and positive, got {n}")));
    }
    let d = match (info.takes_d, id.d) {
        (true, Some(d @ (1 | 2))) => d,
        (true, Some(d)) => return Err(Error::InvalidParams(format!("d must be 1 or 2, got {d}"))),
        (true, None) => return Err(Error::InvalidParams(format!("{} requires d", id.name))),
        (false, Some(_)) => return Err(Error::InvalidParams(format!("{} does not take d", id.name))),
        (false, None) => 1,
    };
    let range = match (info.takes_range, id.range) {
        (true, r) => Some(r.unwrap_or(Range::Half)),
        (false, Some(_)) => return Err(Error::InvalidParams(format!("{} does not take a range", id.name))),
        (false, None) => None,
    };
    let h = half(n);
    let s = strategy;
    let checks = match id.name.as_str() {
        "thm1" => vec![congruence("main", &sum("thm1", (n - 1) / d)?, &rhs_theorem_terms(n, Variant::Plain)?, "n-phi-a", n, s)?],
        "thm2" => vec![congruence("main", &sum("thm2", h)?, &rhs_theorem_terms(n, Variant::Alternating)?, "n-phi-a", n, s)?],
        "thm3" => vec![congruence("main", &sum("thm3", n - 1)?, &rhs_theorem_terms(n, Variant::Plain)?, "n-phi-a", n, s)?],
        "lem-qlong" | "lem-qlong-bqn" => {
            let m = if id.name == "lem-qlong" { "n-a" } else { "b-qn" };
            vec![congruence("main", &sum("lem-qlong", (n - 1) / d)?, &rhs_lemma_terms(&id.name, n)?, m, n, s)?]
        }
        "lem-j2" => vec![congruence("main", &sum("lem-j2", h)?, &rhs_lemma_terms("lem-j2", n)?, "n-a", n, s)?],
        "lem-j2-bq2n" => vec![congruence("main", &sum("lem-j2", h)?, &rhs_lemma_terms("lem-j2-bq2n", n)?, "b-q2n", n, s)?],
        "lem-3k1" => vec![congruence("main", &sum("lem-3k1", n - 1)?, &rhs_lemma_terms("lem-3k1", n)?, "n-a", n, s)?],
        "lem-3k1-bqn" => vec![congruence("main", &sum("lem-3k1", n - 1)?, &rhs_lemma_terms("lem-3k1-bqn", n)?, "b-qn", n, s)?],
        "crt-thm1" => vec![congruence("main", &sum("lem-qlong", (n - 1) / d)?, &crt_rhs("lem-qlong", "lem-qlong-bqn", n)?, "n-a-b", n, s)?],
        "crt-thm2" => vec![congruence("main", &sum("lem-j2-b2", h)?, &crt_rhs("lem-j2-b2", "lem-j2-bq2n", n)?, "n-a-b", n, s)?],
        "crt-thm2-literal" => vec![congruence("main", &sum("lem-j2-b2", h)?, &crt_rhs("lem-j2", "lem-j2-bq2n", n)?, "n-a-b", n, s)?],
        "crt-thm3" => vec![congruence("main", &sum("lem-3k1", n - 1)?, &crt_rhs("lem-3k1", "lem-3k1-bqn", n)?, "n-a-b", n, s)?],
        "qgw" => {
            let upper = if range == Some(Range::Full) { n - 1 } else { h };
            vec![congruence("main", &sum("qgw", upper)?, &rhs_qlimit_terms(n, Variant::Plain)?, "n-phi3", n, s)?]
        }
        "qj2" => vec![congruence("main", &sum("qj2", h)?, &rhs_qlimit_terms(n, Variant::Alternating)?, "n-phi3", n, s)?],
        "qdiv" => vec![congruence("main", &sum("qdiv", n - 1)?, &rhs_qlimit_terms(n, Variant::Plain)?, "n-phi3", n, s)?],
        "equiv" => vec![congruence("main", &sum("lem-qlong", h)?, &sum("lem-qlong", n - 1)?, "n-phi-a-b", n, s)?],
        "equiv2" => vec![congruence("main", &sum("qgw", h)?, &sum("qgw", n - 1)?, "n-phi4", n, s)?],
        "conj-final" => vec![congruence("main", &sum("lem-qlong", h)?, &sum("lem-3k1", n - 1)?, "n-phi-a-b", n, s)?],
        "conj-aeqb-q" => vec![congruence("main", &sum("qgw", h)?, &sum("qdiv", n - 1)?, "n-phi4", n, s)?],
        "ab-ident" => vec![
            congruence("ab", &TermSum::from_term(crt_factor_ab(n)?), &one(), "a", n, s)?,
            congruence("b", &TermSum::from_term(crt_factor_b(n)?), &one(), "b-qn", n, s)?,
        ],
        "relation" => {
            let mut lhs = Term::one();
            lhs.mul_one_minus(1, 0, 0, n as i64, false)?;
            let c0 = &(&MPolyAB::one() + &MPolyAB::term(rat(1), 2, 0)) - &MPolyAB::a();
            lhs.mul_poly(&PPoly::binomial(c0, 0, -&MPolyAB::a(), n as i64));
            let mut sq = Term::one();
            sq.mul_free(one_minus_a_pow(1), false)?;
            sq.mul_free(one_minus_a_pow(1), false)?;
            let mut af = Term::one();
            af.mul_one_minus(1, 1, 0, n as i64, false)?;
            af.mul_one_minus(1, -1, 0, n as i64, false)?;
            af.mono.0 += 1;
            let mut rhs = TermSum::from_term(sq);
            rhs.push(af);
            vec![identity("main", &TermSum::from_term(lhs), &rhs, s)]
        }
        "lem1a" | "lem1b" => {
            let (sq, qe) = if id.name == "lem1a" {
                (2, -((n as i64 - 1).pow(2) / 4))
            } else {
                (1, (1 - (n as i64).pow(2)) / 4)
            };
            let mut lhs = Term::one();
            lhs.mul_qpoch(1, 1, 0, sq, 2, h, false)?;
            lhs.mul_qpoch(1, -1, 0, sq, 2, h, false)?;
            let mut rhs = Term::constant(rat(sign(h)));
            rhs.qexp = qe;
            rhs.mono.0 -= h as i64;
            rhs.mul_free(one_minus_a_pow(n as u32), false)?;
            rhs.mul_free(one_minus_a_pow(1), true)?;
            vec![congruence("main", &TermSum::from_term(lhs), &TermSum::from_term(rhs), "phi", n, s)?]
        }
        "anfrac" | "anfrac-literal" => {
            let shift = if id.name == "anfrac" { 2 } else { 1 };
            let mut lhs = Term::one();
            lhs.mul_qpoch(1, 0, 0, 1, 2, h, false)?;
            lhs.mul_qpoch(1, 0, 0, 1, 2, h, false)?;
            lhs.mul_qpoch(1, 1, 0, shift, 2, h, true)?;
            lhs.mul_qpoch(1, -1, 0, shift, 2, h, true)?;
            let mut rhs = an_ratio(n)?;
            rhs.qexp -= h as i64;
            vec![congruence("main", &TermSum::from_term(lhs), &TermSum::from_term(rhs), "phi", n, s)?]
        }
        "anfrac2" => {
            let mut den = Term::one();
            den.mul_qpoch(1, 1, 0, 4, 4, h, true)?;
            den.mul_qpoch(1, -1, 0, 4, 4, h, true)?;
            let mut first = den.clone();
            first.mul_qpoch(1, 0, 0, 1, 2, h, false)?;
            first.mul_qpoch(1, 0, 0, n as i64 + 2, 2, h, false)?;
            let mut middle = den;
            middle.mul_qpoch(1, 0, 0, 1, 2, h, false)?;
            middle.mul_qpoch(1, 0, 0, 2, 2, h, false)?;
            let mut last = an_ratio(n)?;
            last.coeff *= rat(sign(h));
            last.qexp -= h as i64;
            let (first, middle, last) = (TermSum::from_term(first), TermSum::from_term(middle), TermSum::from_term(last));
            vec![
                congruence("first", &first, &middle, "phi", n, s)?,
                congruence("second", &middle, &last, "phi", n, s)?,
            ]
        }
        "qbino" => {
            let mut lhs = Term::one();
            lhs.mul_qpoch(1, 1, 0, 1, 1, n - 1, false)?;
            let mut expansion = TermSum::zero();
            let mut powers = TermSum::zero();
            for k in 0..n {
                let mut t = Term::constant(rat(sign(k)));
                t.qexp = (k * (k + 1) / 2) as i64;
                t.mono.0 = k as i64;
                t.mul_poly(&PPoly::from_qpoly(&q_binomial(n - 1, k as i64)));
                expansion.push(t);
                let mut p = Term::one();
                p.mono.0 = k as i64;
                powers.push(p);
            }
            vec![
                identity("expansion", &TermSum::from_term(lhs), &expansion, s),
                congruence("reduction", &expansion, &powers, "phi", n, s)?,
            ]
        }
        "lhopital" => {
            let mut v = verify_lhopital(n)?;
            v.strategy = StrategyKind::Symbolic;
            vec![Check { label: "limit".into(), modulus: Vec::new(), verdict: v }]
        }
        other => return Err(Error::UnknownTarget(other.to_string())),
    };
    let status = checks.iter().map(|c| c.verdict.status).max().unwrap_or(Status::Verified);
    Ok(Report {
        target: id.name.clone(),
        n,
        d: info.takes_d.then_some(d),
        range,
        kind: info.kind,
        status,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, n: u64) -> Report {
        let mut id = TargetId::new(name, n);
        if target_info(name).unwrap().takes_d {
            id = id.with_d(1);
        }
        verify_target(&id, &default_strategy(name)).unwrap()
    }

    #[test]
    fn small_instances_verify() {
        for name in ["thm1", "thm2", "thm3", "relation", "ab-ident", "lem1a", "lem1b", "anfrac", "anfrac2", "qbino", "qgw"] {
            for n in [1, 3, 5] {
                let r = run(name, n);
                assert_eq!(r.status, Status::Verified, "{name} n={n}: {:?}", r.checks);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(verify_target(&TargetId::new("thm1", 3), &Strategy::default()), Err(Error::InvalidParams(_))));
        assert!(matches!(verify_target(&TargetId::new("thm2", 3).with_d(1), &Strategy::default()), Err(Error::InvalidParams(_))));
        assert!(matches!(verify_target(&TargetId::new("thm2", 4), &Strategy::default()), Err(Error::InvalidParams(_))));
        assert!(matches!(verify_target(&TargetId::new("nope", 3), &Strategy::default()), Err(Error::UnknownTarget(_))));
    }
}
