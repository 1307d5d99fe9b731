//! Truncated classical hypergeometric sums and their congruences modulo prime powers.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::engine::Status;
use crate::error::{Error, Result};
use crate::numbers::{bernoulli, frac, is_prime, padic_valuation, rat, reduce_mod, Rational, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalKind {
    C2Half,
    C2Full,
    J2,
    Sun3k1,
    BernoulliConj,
    Aeqb,
    RangeEquiv,
}

impl ClassicalKind {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "c2-half" => ClassicalKind::C2Half,
            "c2-full" => ClassicalKind::C2Full,
            "j2" => ClassicalKind::J2,
            "sun-3k1" => ClassicalKind::Sun3k1,
            "bernoulli-conj" => ClassicalKind::BernoulliConj,
            "aeqb" => ClassicalKind::Aeqb,
            "range-equiv" => ClassicalKind::RangeEquiv,
            other => return Err(Error::UnknownTarget(other.to_string())),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::C2Half => "c2-half",
            ClassicalKind::C2Full => "c2-full",
            ClassicalKind::J2 => "j2",
            ClassicalKind::Sun3k1 => "sun-3k1",
            ClassicalKind::BernoulliConj => "bernoulli-conj",
            ClassicalKind::Aeqb => "aeqb",
            ClassicalKind::RangeEquiv => "range-equiv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalTarget {
    pub kind: ClassicalKind,
    pub p: u64,
    pub r: u32,
}

impl ClassicalTarget {
    pub fn new(kind: ClassicalKind, p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidParams(format!("p must be an odd prime, got {p}")));
        }
        if r == 0 {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        let needs_p_gt_3 = matches!(
            kind,
            ClassicalKind::C2Half | ClassicalKind::C2Full | ClassicalKind::J2 | ClassicalKind::Sun3k1 | ClassicalKind::BernoulliConj
        );
        if needs_p_gt_3 && p <= 3 {
            return Err(Error::InvalidParams(format!("{} requires p > 3", kind.name())));
        }
        if kind == ClassicalKind::J2 && r != 1 {
            return Err(Error::InvalidParams("j2 is stated for r = 1 only".into()));
        }
        Ok(ClassicalTarget { kind, p, r })
    }

    fn pr(&self) -> u64 {
        self.p.pow(self.r)
    }
}

/// Which truncated sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    /// `(4k+1) (1/2)_k^4 / k!^4`
    C2,
    /// `(6k+1) (1/2)_k^3 / (k!^3 4^k)`
    J2,
    /// `(3k+1) (1/2)_k^3 4^k / k!^3`
    Sun,
}

/// `sum_{k=0}^{upper}` of the series, by the term recurrence `(1/2)_{k+1}/(k+1)! = (1/2)_k/k! * (2k+1)/(2k+2)`.
pub fn series_sum(series: Series, upper: u64) -> Result<Rational> {
    let mut u = Rational::one();
    let mut sum = Rational::zero();
    let two = BigInt::from(2);
    for k in 0..=upper {
        if k > 0 {
            u *= frac(2 * k as i64 - 1, 2 * k as i64);
        }
        let term = match series {
            Series::C2 => rat(4 * k as i64 + 1) * u.clone() * u.clone() * u.clone() * u.clone(),
            Series::J2 => rat(6 * k as i64 + 1) * u.clone() * u.clone() * u.clone() / Rational::from_integer(num_traits::pow(BigInt::from(4), k as usize)),
            Series::Sun => rat(3 * k as i64 + 1) * u.clone() * u.clone() * u.clone() * Rational::from_integer(num_traits::pow(BigInt::from(4), k as usize)),
        };
        let mut den = term.denom().clone();
        while (&den % &two).is_zero() {
            den /= &two;
        }
        if !den.is_one() {
            return Err(Error::DenominatorNotInvertible(format!("term {k} has denominator {}", term.denom())));
        }
        sum += term;
    }
    Ok(sum)
}

/// The truncated sum on the left of a target.
pub fn classical_sum(t: &ClassicalTarget) -> Result<Rational> {
    let pr = t.pr();
    match t.kind {
        ClassicalKind::C2Half | ClassicalKind::BernoulliConj | ClassicalKind::Aeqb | ClassicalKind::RangeEquiv => {
            series_sum(Series::C2, (pr - 1) / 2)
        }
        ClassicalKind::C2Full => series_sum(Series::C2, pr - 1),
        ClassicalKind::J2 => series_sum(Series::J2, (t.p - 1) / 2),
        ClassicalKind::Sun3k1 => series_sum(Series::Sun, pr - 1),
    }
}

/// `p^r + 7/6 B_{p-3} p^{r+3}`.
pub fn bernoulli_rhs(p: u64, r: u32) -> Rational {
    let pr = Rational::from_integer(num_traits::pow(BigInt::from(p), r as usize));
    let p3 = Rational::from_integer(num_traits::pow(BigInt::from(p), 3));
    &pr + frac(7, 6) * bernoulli((p - 3) as usize) * &pr * p3
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalVerdict {
    pub target: String,
    pub p: u64,
    pub r: u32,
    pub status: Status,
    pub conjecture: bool,
    /// Valuation of `lhs - rhs`.
    pub valuation: Valuation,
    pub required: i64,
    pub lhs: String,
    pub rhs: String,
    /// `lhs mod p^required`.
    pub residue: String,
    pub elapsed_ms: u64,
}

/// Checks `v_p(lhs - rhs) >= required` for a classical target.
pub fn check_supercongruence(t: &ClassicalTarget) -> Result<ClassicalVerdict> {
    let start = Instant::now();
    let (p, r) = (t.p, t.r);
    let lhs = classical_sum(t)?;
    let pr = Rational::from_integer(num_traits::pow(BigInt::from(p), r as usize));
    let (rhs, required) = match t.kind {
        ClassicalKind::C2Half | ClassicalKind::C2Full => (pr, 3),
        ClassicalKind::J2 => {
            let s = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
            (rat(s * p as i64), 4)
        }
        ClassicalKind::Sun3k1 | ClassicalKind::BernoulliConj => (bernoulli_rhs(p, r), r as i64 + 4),
        ClassicalKind::Aeqb => (series_sum(Series::Sun, t.pr() - 1)?, r as i64 + 4),
        ClassicalKind::RangeEquiv => (series_sum(Series::C2, t.pr() - 1)?, r as i64 + 4),
    };
    let valuation = padic_valuation(&(&lhs - &rhs), p);
    let status = if valuation.at_least(required) { Status::Verified } else { Status::Refuted };
    let residue = reduce_mod(&lhs, p, required as u32)?;
    Ok(ClassicalVerdict {
        target: t.kind.name().to_string(),
        p,
        r,
        status,
        conjecture: matches!(t.kind, ClassicalKind::Sun3k1 | ClassicalKind::BernoulliConj | ClassicalKind::Aeqb),
        valuation,
        required,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        residue: format!("{} mod {}^{}", residue.value, p, required),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_half_p5() {
        let t = ClassicalTarget::new(ClassicalKind::C2Half, 5, 1).unwrap();
        // 1 + 5 (1/2)^4 + 9 (3/8)^4
        assert_eq!(classical_sum(&t).unwrap(), rat(1) + rat(5) * frac(1, 16) + rat(9) * frac(81, 4096));
        assert_eq!(classical_sum(&t).unwrap(), frac(6105, 4096));
        let v = check_supercongruence(&t).unwrap();
        assert_eq!(v.valuation, Valuation::Finite(4));
        assert_eq!(v.status, Status::Verified);
    }

    #[test]
    fn sun_p3_three_terms() {
        let t = ClassicalTarget::new(ClassicalKind::Aeqb, 3, 1).unwrap();
        let sun = series_sum(Series::Sun, 2).unwrap();
        // 1 + 4 (1/2)^3 4 + 7 (3/8)^3 16
        assert_eq!(sun, rat(1) + rat(4) * frac(1, 8) * rat(4) + rat(7) * frac(27, 512) * rat(16));
        let v = check_supercongruence(&t).unwrap();
        assert!(v.valuation.at_least(5));
    }

    #[test]
    fn bernoulli_p5() {
        let t = ClassicalTarget::new(ClassicalKind::BernoulliConj, 5, 1).unwrap();
        assert_eq!(bernoulli_rhs(5, 1), rat(5) + frac(7, 6) * frac(1, 6) * rat(625));
        assert!(check_supercongruence(&t).unwrap().valuation.at_least(5));
    }

    #[test]
    fn parameter_checks() {
        assert!(ClassicalTarget::new(ClassicalKind::C2Half, 3, 1).is_err());
        assert!(ClassicalTarget::new(ClassicalKind::J2, 5, 2).is_err());
        assert!(ClassicalTarget::new(ClassicalKind::Aeqb, 9, 1).is_err());
        assert!(ClassicalTarget::new(ClassicalKind::Aeqb, 3, 1).is_ok());
    }
}
