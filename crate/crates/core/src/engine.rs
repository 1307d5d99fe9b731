//! Moduli, congruence checking for rational functions, and the a -> 1 limit check.
//!
//! `lhs == rhs (mod M)` means: writing `lhs - rhs = N/D` in lowest terms,
//! `gcd(D, M)` is a unit and `M | N` in `Q[a, b][q]`. Equivalently, for every
//! irreducible factor `P` of `M` with multiplicity `e`, the valuation of the
//! difference at `P` is at least `e`. For a structured difference the engine
//! brings every term over one common denominator `Du` (whose `P`-multiplicity
//! is known factor by factor) and checks `v_P(Nu) >= v_P(Du) + e` for the
//! numerator `Nu`.
//!
//! The symbolic strategy expands `Nu` and divides. The specialize strategy
//! works at integer parameter points: for `P = Phi_d` it reads the valuation
//! off `Nu(alpha, beta, zeta_d + eps)`, for a parameter factor such as
//! `a - q^n` it substitutes `a = q^n + eps`. Since the numerator's `P`-adic
//! expansion has polynomial coefficients in the parameters of bounded degree,
//! a grid one point larger than those degrees in each direction determines the
//! generic valuation exactly (minimum over the grid), and a single point with
//! too small a valuation already refutes.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{numerator, CycRing, DegRing, PointRing, RootRing, SymRing};
use crate::numbers::{divisors, primes, Rational};
use crate::param::{PPoly, PRat};
use crate::qpoly::{cyclotomic, q_integer, QPoly};
use crate::terms::{Binom, CommonDen, Factor, Term, TermSum};

/// An irreducible factor of a modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Cyclo(u64),
    Binom(Binom),
}

impl Prime {
    pub fn to_ppoly(&self) -> PPoly {
        match self {
            Prime::Cyclo(d) => PPoly::from_qpoly(&cyclotomic(*d)),
            Prime::Binom(b) => b.to_ppoly(),
        }
    }

    /// For a parameter factor `param - sigma q^t0` (up to a unit): `(param_is_a, sigma, t0)`.
    fn root(&self) -> Result<(bool, i64, i64)> {
        let Prime::Binom(b) = self else {
            return Err(Error::Unsupported("root of a cyclotomic factor".into()));
        };
        let sigma = if b.plus { -1 } else { 1 };
        match (b.w0, b.w1) {
            ((1, 0), (0, 0)) => Ok((true, sigma, b.t as i64)),
            ((0, 1), (0, 0)) => Ok((false, sigma, b.t as i64)),
            ((0, 0), (1, 0)) => Ok((true, sigma, -(b.t as i64))),
            ((0, 0), (0, 1)) => Ok((false, sigma, -(b.t as i64))),
            _ => Err(Error::Unsupported(format!("modulus factor {b} is not linear in one parameter"))),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Cyclo(d) => write!(f, "Phi_{d}"),
            Prime::Binom(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModFactor {
    pub name: String,
    pub poly: PPoly,
}

/// A named product of factors together with its irreducible factorization.
#[derive(Clone, Debug)]
pub struct Modulus {
    pub kind: String,
    pub n: u64,
    pub factors: Vec<ModFactor>,
    pub product: PPoly,
    pub primes: Vec<(Prime, u32)>,
}

impl Modulus {
    pub fn name(&self) -> String {
        self.factors.iter().map(|f| f.name.clone()).collect::<Vec<_>>().join("*")
    }
}

fn a_binom(n: u64) -> Binom {
    Binom { w0: (0, 0), w1: (1, 0), plus: false, t: n as u32 }
}

fn a_minus_binom(n: u64) -> Binom {
    Binom { w0: (1, 0), w1: (0, 0), plus: false, t: n as u32 }
}

fn b_binom(t: u64) -> Binom {
    Binom { w0: (0, 1), w1: (0, 0), plus: false, t: t as u32 }
}

/// Builds a modulus. Kinds: `n-phi-a`, `n-a`, `b-qn`, `b-q2n`, `n-a-b`, `phi`,
/// `phi2`, `phi3`, `phi4`, `n-phi3`, `n-phi4`, `n-phi-a-b`, plus `a`
/// (`(1-aq^n)(a-q^n)`) and `n` (`[n]`).
pub fn modulus(kind: &str, n: u64) -> Result<Modulus> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let parts: &[&str] = match kind {
        "n-phi-a" => &["n", "phi", "a"],
        "n-a" => &["n", "a"],
        "b-qn" => &["b"],
        "b-q2n" => &["b2"],
        "n-a-b" => &["n", "a", "b"],
        "phi" => &["phi"],
        "phi2" => &["phi^2"],
        "phi3" => &["phi^3"],
        "phi4" => &["phi^4"],
        "n-phi3" => &["n", "phi^3"],
        "n-phi4" => &["n", "phi^4"],
        "n-phi-a-b" => &["n", "phi", "a", "b"],
        "a" => &["a"],
        "n" => &["n"],
        other => return Err(Error::UnknownModulus(other.to_string())),
    };
    let mut factors = Vec::new();
    let mut primes: BTreeMap<Prime, u32> = BTreeMap::new();
    for part in parts {
        match *part {
            "n" => {
                factors.push(ModFactor { name: format!("[{n}]"), poly: PPoly::from_qpoly(&q_integer(n)) });
                for d in divisors(n).into_iter().filter(|&d| d > 1) {
                    *primes.entry(Prime::Cyclo(d)).or_insert(0) += 1;
                }
            }
            p if p.starts_with("phi") => {
                let e: u32 = p.strip_prefix("phi^").map(|x| x.parse().unwrap()).unwrap_or(1);
                let name = if e == 1 { format!("Phi_{n}") } else { format!("Phi_{n}^{e}") };
                factors.push(ModFactor { name, poly: PPoly::from_qpoly(&cyclotomic(n).pow(e)) });
                *primes.entry(Prime::Cyclo(n)).or_insert(0) += e;
            }
            "a" => {
                for b in [a_binom(n), a_minus_binom(n)] {
                    factors.push(ModFactor { name: b.to_string(), poly: b.to_ppoly() });
                    *primes.entry(Prime::Binom(b)).or_insert(0) += 1;
                }
            }
            "b" | "b2" => {
                let b = b_binom(if *part == "b" { n } else { 2 * n });
                factors.push(ModFactor { name: b.to_string(), poly: b.to_ppoly() });
                *primes.entry(Prime::Binom(b)).or_insert(0) += 1;
            }
            _ => unreachable!(),
        }
    }
    let product = factors.iter().fold(PPoly::one(), |acc, f| &acc * &f.poly);
    debug_assert!(!product.coeff(0).is_zero(), "modulus must have a nonzero constant term");
    Ok(Modulus { kind: kind.to_string(), n, factors, product, primes: primes.into_iter().collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Symbolic,
    Specialize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub grid_margin: u32,
}

impl Strategy {
    pub fn new(kind: StrategyKind, grid_margin: u32) -> Result<Self> {
        if grid_margin == 0 {
            return Err(Error::InvalidParams("grid margin must be at least 1".into()));
        }
        Ok(Strategy { kind, grid_margin })
    }

    pub fn symbolic() -> Self {
        Strategy { kind: StrategyKind::Symbolic, grid_margin: 2 }
    }

    pub fn specialize() -> Self {
        Strategy { kind: StrategyKind::Specialize, grid_margin: 2 }
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::specialize()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Inapplicable,
    Refuted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Inapplicable => "inapplicable",
        })
    }
}

/// Per-factor bookkeeping: the difference must vanish to order `exponent` at `factor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCheck {
    pub factor: String,
    pub exponent: u32,
    /// Multiplicity of the factor in the common denominator.
    pub den_multiplicity: u32,
    pub required: u32,
    /// Valuation of the common numerator, capped at `required`.
    pub achieved: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `(a, b)` specialization, absent for symbolic checks.
    pub point: Option<(String, String)>,
    pub factor: String,
    pub valuation: u32,
    pub remainder: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub strategy: StrategyKind,
    pub points_used: u64,
    pub points_skipped: u64,
    /// Bounds on the `a`- and `b`-degrees of the common numerator.
    pub degree_bounds: Option<(i64, i64)>,
    pub factors: Vec<FactorCheck>,
    pub denominator_failure: bool,
    pub witness: Option<Witness>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn new(strategy: StrategyKind) -> Self {
        Verdict {
            status: Status::Verified,
            strategy,
            points_used: 0,
            points_skipped: 0,
            degree_bounds: None,
            factors: Vec::new(),
            denominator_failure: false,
            witness: None,
            elapsed_ms: 0,
            note: None,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

fn truncate(s: String) -> String {
    const MAX: usize = 240;
    if s.len() <= MAX {
        s
    } else {
        let mut cut = MAX;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        format!("{} ...", &s[..cut])
    }
}

/// Multiplicity of `p` in `f`.
fn factor_valuation(f: &Factor, p: &Prime) -> u32 {
    match (f, p) {
        (Factor::Binom(b), Prime::Cyclo(d)) => b.cyclotomic_multiplicity(*d),
        (Factor::Binom(b), Prime::Binom(pb)) => (b == pb) as u32,
        (Factor::Free(_), _) => 0,
        (Factor::Poly(poly), _) => {
            let pp = p.to_ppoly();
            let mut cur = poly.clone();
            let mut v = 0;
            while let Some(next) = cur.div_exact_primitive(&pp) {
                if next.is_zero() {
                    break;
                }
                cur = next;
                v += 1;
            }
            v
        }
    }
}

fn den_multiplicity(cd: &CommonDen, p: &Prime) -> u32 {
    cd.den.iter().map(|(f, k)| k * factor_valuation(f, p)).sum()
}

fn symbolic_valuation(nu: &PPoly, p: &Prime, cap: u32) -> (u32, Option<String>) {
    let pp = p.to_ppoly();
    let mut cur = nu.clone();
    for v in 0..cap {
        match cur.div_exact_primitive(&pp) {
            Some(next) => cur = next,
            None => {
                let (c, _) = cur.clear_offset();
                let rem = c.pseudo_divrem(&pp).map(|(_, r, _)| r.to_string()).unwrap_or_default();
                return (v, Some(rem));
            }
        }
    }
    (cap, None)
}

fn grid(count: i64, skip_first: bool) -> Vec<BigInt> {
    let count = count.max(1) as usize;
    let ps = primes(count + 1);
    let slice = if skip_first { &ps[1..] } else { &ps[..count] };
    slice.iter().map(|&p| BigInt::from(p)).collect()
}

struct PointOutcome {
    achieved: u32,
    used: u64,
    witness: Option<Witness>,
}

fn specialize_valuation(
    delta: &TermSum,
    cd: &CommonDen,
    p: &Prime,
    need: u32,
    deg: (i64, i64),
    margin: u32,
) -> Result<PointOutcome> {
    let margin = margin as i64;
    let mut out = PointOutcome { achieved: need, used: 0, witness: None };
    match p {
        Prime::Cyclo(d) => {
            for alpha in grid(deg.0 + margin, false) {
                for beta in grid(deg.1 + margin, true) {
                    let ring = CycRing::new(*d, need, alpha.clone(), beta.clone());
                    let (v, rem) = ring.valuation(&numerator(delta, cd, &ring));
                    out.used += 1;
                    if v < out.achieved {
                        out.achieved = v;
                        out.witness = Some(Witness {
                            point: Some((alpha.to_string(), beta.to_string())),
                            factor: p.to_string(),
                            valuation: v,
                            remainder: truncate(format!(
                                "eps^{v} coefficient at q = zeta_{d} + eps: {}",
                                rem.map(|r| r.to_string()).unwrap_or_default()
                            )),
                        });
                        return Ok(out);
                    }
                }
            }
        }
        Prime::Binom(_) => {
            let (param_is_a, sigma, t0) = p.root()?;
            let (other_deg, skip) = if param_is_a { (deg.1, true) } else { (deg.0, false) };
            for other in grid(other_deg + margin, skip) {
                let ring = RootRing::new(param_is_a, sigma, t0, other.clone(), need);
                let (v, rem) = ring.valuation(&numerator(delta, cd, &ring));
                out.used += 1;
                if v < out.achieved {
                    out.achieved = v;
                    let (pa, pb) = if param_is_a {
                        (format!("{}q^{t0}", if sigma < 0 { "-" } else { "" }), other.to_string())
                    } else {
                        (other.to_string(), format!("{}q^{t0}", if sigma < 0 { "-" } else { "" }))
                    };
                    out.witness = Some(Witness {
                        point: Some((pa, pb)),
                        factor: p.to_string(),
                        valuation: v,
                        remainder: truncate(format!(
                            "eps^{v} coefficient: {}",
                            rem.map(|r| r.to_qlaurent().to_string()).unwrap_or_default()
                        )),
                    });
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Checks `delta == 0 (mod M)` for a structured difference.
pub fn check_terms(delta: &TermSum, m: &Modulus, strategy: &Strategy) -> Result<Verdict> {
    let start = Instant::now();
    let mut verdict = Verdict::new(strategy.kind);
    let cd = delta.common_denominator();
    let deg = numerator(delta, &cd, &DegRing);
    verdict.degree_bounds = deg;
    let sym = match (strategy.kind, deg) {
        (StrategyKind::Symbolic, Some(_)) => Some(numerator(delta, &cd, &SymRing::new())),
        _ => None,
    };
    for (p, e) in &m.primes {
        let den_mult = den_multiplicity(&cd, p);
        let need = den_mult + e;
        let (achieved, witness) = match (deg, &sym) {
            (None, _) => (need, None),
            (Some(_), Some(nu)) if nu.is_zero() => (need, None),
            (Some(_), Some(nu)) => {
                let (v, rem) = symbolic_valuation(nu, p, need);
                let w = rem.map(|r| Witness { point: None, factor: p.to_string(), valuation: v, remainder: truncate(r) });
                (v, w)
            }
            (Some(dg), None) => {
                let o = specialize_valuation(delta, &cd, p, need, dg, strategy.grid_margin)?;
                verdict.points_used += o.used;
                (o.achieved, o.witness)
            }
        };
        if achieved < need {
            verdict.status = Status::Refuted;
            if achieved < den_mult {
                verdict.denominator_failure = true;
            }
            if verdict.witness.is_none() {
                verdict.witness = witness;
            }
        }
        verdict.factors.push(FactorCheck {
            factor: p.to_string(),
            exponent: *e,
            den_multiplicity: den_mult,
            required: need,
            achieved,
        });
    }
    verdict.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(verdict)
}

/// Checks `delta == 0` exactly.
pub fn check_identity(delta: &TermSum, strategy: &Strategy) -> Verdict {
    let start = Instant::now();
    let mut verdict = Verdict::new(strategy.kind);
    let cd = delta.common_denominator();
    let deg = numerator(delta, &cd, &DegRing);
    verdict.degree_bounds = deg;
    if let Some(dg) = deg {
        match strategy.kind {
            StrategyKind::Symbolic => {
                let nu = numerator(delta, &cd, &SymRing::new());
                if !nu.is_zero() {
                    verdict.status = Status::Refuted;
                    verdict.witness = Some(Witness {
                        point: None,
                        factor: "1".into(),
                        valuation: 0,
                        remainder: truncate(nu.to_string()),
                    });
                }
            }
            StrategyKind::Specialize => {
                let margin = strategy.grid_margin as i64;
                'outer: for alpha in grid(dg.0 + margin, false) {
                    for beta in grid(dg.1 + margin, true) {
                        let ring = PointRing::new(alpha.clone(), beta.clone());
                        let v = numerator(delta, &cd, &ring);
                        verdict.points_used += 1;
                        if !v.is_zero() {
                            verdict.status = Status::Refuted;
                            verdict.witness = Some(Witness {
                                point: Some((alpha.to_string(), beta.to_string())),
                                factor: "1".into(),
                                valuation: 0,
                                remainder: truncate(v.to_qlaurent().to_string()),
                            });
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    verdict.elapsed_ms = start.elapsed().as_millis() as u64;
    verdict
}

/// Structured form of a rational function: `num / den` as one term.
pub fn prat_term(p: &PRat) -> Result<Term> {
    let mut t = Term::one();
    t.mul_poly(&p.num);
    t.div_poly(&p.den)?;
    Ok(t)
}

/// `lhs == rhs (mod M)` for rational functions.
pub fn check_congruence(lhs: &PRat, rhs: &PRat, m: &Modulus, strategy: &Strategy) -> Result<Verdict> {
    match strategy.kind {
        StrategyKind::Specialize => {
            let mut delta = TermSum::from_term(prat_term(lhs)?);
            delta = delta.sub(&TermSum::from_term(prat_term(rhs)?));
            check_terms(&delta, m, strategy)
        }
        StrategyKind::Symbolic => {
            let start = Instant::now();
            let mut verdict = Verdict::new(StrategyKind::Symbolic);
            let delta = (lhs - rhs).reduce();
            let (_, da, db) = delta.num.degree_bounds();
            verdict.degree_bounds = if delta.num.is_zero() { None } else { Some((da, db)) };
            let g = delta.den.gcd(&m.product);
            if g.deg_q() > 0 {
                verdict.status = Status::Refuted;
                verdict.denominator_failure = true;
                verdict.witness = Some(Witness {
                    point: None,
                    factor: m.name(),
                    valuation: 0,
                    remainder: truncate(format!("gcd(denominator, modulus) = {g}")),
                });
            } else if !delta.num.is_zero() {
                let (num, _) = delta.num.clear_offset();
                let (mp, _) = m.product.clear_offset();
                let (_, rem, _) = num.pseudo_divrem(&mp)?;
                if !rem.is_zero() {
                    verdict.status = Status::Refuted;
                    verdict.witness = Some(Witness {
                        point: None,
                        factor: m.name(),
                        valuation: 0,
                        remainder: truncate(rem.to_string()),
                    });
                }
            }
            verdict.elapsed_ms = start.elapsed().as_millis() as u64;
            Ok(verdict)
        }
    }
}

/// Polynomial in `t` with `QPoly` coefficients, lowest degree first.
type TPoly = Vec<QPoly>;

fn tpoly_mul(x: &TPoly, y: &TPoly) -> TPoly {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![QPoly::zero(); x.len() + y.len() - 1];
    for (i, u) in x.iter().enumerate() {
        for (j, v) in y.iter().enumerate() {
            out[i + j] = &out[i + j] + &(u * v);
        }
    }
    out
}

fn tpoly_const(c: Rational) -> TPoly {
    vec![QPoly::constant(c)]
}

/// `(1 + t)^k` with rational coefficients.
fn one_plus_t_pow(k: u64) -> TPoly {
    (0..=k).map(|i| QPoly::constant(Rational::from_integer(crate::numbers::binomial(k, i)))).collect()
}

fn tpoly_add(x: &TPoly, y: &TPoly) -> TPoly {
    let mut out = vec![QPoly::zero(); x.len().max(y.len())];
    for (i, u) in x.iter().enumerate() {
        out[i] = &out[i] + u;
    }
    for (i, v) in y.iter().enumerate() {
        out[i] = &out[i] + v;
    }
    out
}

fn tpoly_scale(x: &TPoly, c: &QPoly) -> TPoly {
    x.iter().map(|u| u * c).collect()
}

/// The `a -> 1` limit of `(1-aq^n)(a-q^n)(1 - a^n - n(1-a)a^((n-1)/2)) / ((1-a)^2 (1-a^n))`
/// compared with `(n^2-1)(1-q)^2[n]^2/24`.
pub fn verify_lhopital(n: u64) -> Result<Verdict> {
    if n % 2 == 0 {
        return Err(Error::InvalidParams(format!("n must be odd, got {n}")));
    }
    let start = Instant::now();
    let mut verdict = Verdict::new(StrategyKind::Symbolic);
    let qn = QPoly::monomial(Rational::from_integer(1.into()), n as usize);
    let one = QPoly::one();
    let one_minus_qn = &one - &qn;
    let h = (n - 1) / 2;
    let nn = Rational::from_integer(n.into());
    // a = 1 + t
    let f1: TPoly = vec![one_minus_qn.clone(), -&qn];
    let f2: TPoly = vec![one_minus_qn, one.clone()];
    let pow_n = one_plus_t_pow(n);
    let pow_h = one_plus_t_pow(h);
    let t_times_pow_h: TPoly = std::iter::once(QPoly::zero()).chain(pow_h).collect();
    let bracket = tpoly_add(
        &tpoly_add(&tpoly_const(Rational::from_integer(1.into())), &tpoly_scale(&pow_n, &QPoly::constant(-Rational::from_integer(1.into())))),
        &tpoly_scale(&t_times_pow_h, &QPoly::constant(nn.clone())),
    );
    let num = tpoly_mul(&tpoly_mul(&f1, &f2), &bracket);
    let one_minus_pow_n = tpoly_add(&tpoly_const(Rational::from_integer(1.into())), &tpoly_scale(&pow_n, &QPoly::constant(-Rational::from_integer(1.into()))));
    let den = tpoly_mul(&vec![QPoly::zero(), QPoly::zero(), one.clone()], &one_minus_pow_n);
    let vd = den.iter().position(|c| !c.is_zero()).expect("nonzero denominator");
    let expected = {
        let nq = q_integer(n);
        let c = Rational::new(BigInt::from(n * n - 1), BigInt::from(24));
        (&QPoly::from_i64(&[1, -1]).pow(2) * &nq.pow(2)).scale(&c)
    };
    let pole = num.iter().take(vd).any(|c| !c.is_zero());
    let limit = if pole {
        None
    } else {
        let d0 = den[vd].clone();
        let n0 = num.get(vd).cloned().unwrap_or_else(QPoly::zero);
        let (quot, rem) = n0.divrem(&d0)?;
        rem.is_zero().then_some(quot)
    };
    match limit {
        Some(l) if l == expected => {
            verdict.note = Some(format!("limit = {l}"));
        }
        other => {
            verdict.status = Status::Refuted;
            verdict.witness = Some(Witness {
                point: Some(("1".into(), "-".into())),
                factor: "a -> 1".into(),
                valuation: 0,
                remainder: truncate(match other {
                    Some(l) => format!("limit {l} differs from {expected}"),
                    None => "no finite polynomial limit".into(),
                }),
            });
        }
    }
    verdict.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rat;
    use crate::param::MPolyAB;

    fn strategies() -> [Strategy; 2] {
        [Strategy::symbolic(), Strategy::specialize()]
    }

    #[test]
    fn modulus_examples() {
        let m = modulus("phi", 3).unwrap();
        assert_eq!(m.product, PPoly::from_qpoly(&QPoly::from_i64(&[1, 1, 1])));
        let m = modulus("n-phi-a", 1).unwrap();
        let expected = &(&PPoly::from_qpoly(&QPoly::from_i64(&[-1, 1])) * &a_binom(1).to_ppoly()) * &a_minus_binom(1).to_ppoly();
        assert_eq!(m.product, expected);
        let m = modulus("n-phi3", 3).unwrap();
        assert_eq!(m.product, PPoly::from_qpoly(&q_integer(3).pow(4)));
        assert_eq!(m.primes, vec![(Prime::Cyclo(3), 4)]);
        let m = modulus("n-phi-a", 9).unwrap();
        assert_eq!(m.primes[0], (Prime::Cyclo(3), 1));
        assert_eq!(m.primes[1], (Prime::Cyclo(9), 2));
        assert!(matches!(modulus("bogus", 3), Err(Error::UnknownModulus(_))));
    }

    #[test]
    fn basic_congruences() {
        let m = modulus("phi", 3).unwrap();
        let three = PRat::from_poly(PPoly::from_qpoly(&q_integer(3)));
        let q = PRat::from_poly(PPoly::q_pow(1));
        for s in strategies() {
            assert!(check_congruence(&three, &PRat::zero(), &m, &s).unwrap().is_verified());
            let v = check_congruence(&q, &PRat::one(), &m, &s).unwrap();
            assert_eq!(v.status, Status::Refuted);
            assert!(v.witness.is_some());
        }
    }

    #[test]
    fn denominator_failure_is_flagged() {
        // 1 / [3] against 0 modulo Phi_3
        let m = modulus("phi", 3).unwrap();
        let x = PRat::new(PPoly::one(), PPoly::from_qpoly(&q_integer(3))).unwrap();
        for s in strategies() {
            let v = check_congruence(&x, &PRat::zero(), &m, &s).unwrap();
            assert_eq!(v.status, Status::Refuted);
            assert!(v.denominator_failure);
        }
    }

    #[test]
    fn ab_one_as_rational_functions() {
        let n = 3;
        let qn = PPoly::q_pow(n);
        let a = PPoly::from_mpoly(MPolyAB::a());
        let b = PPoly::from_mpoly(MPolyAB::b());
        let c0 = PPoly::from_mpoly(&(&MPolyAB::term(rat(1), 1, 1) - &MPolyAB::one()) - &MPolyAB::term(rat(1), 2, 0));
        let num = &(&b - &qn) * &(&c0 + &(&a * &qn));
        let den = &(&a - &b) * &(&PPoly::one() - &(&a * &b));
        let lhs = PRat::new(num, den).unwrap();
        let m = modulus("a", 3).unwrap();
        for s in strategies() {
            assert!(check_congruence(&lhs, &PRat::one(), &m, &s).unwrap().is_verified());
        }
    }

    #[test]
    fn lhopital_small() {
        for n in [1, 3, 5, 7] {
            let v = verify_lhopital(n).unwrap();
            assert!(v.is_verified(), "n = {n}: {:?}", v.witness);
        }
    }
}
