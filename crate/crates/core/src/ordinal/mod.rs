//! Exact ordinal arithmetic below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a list of terms `ω^e·c` with strictly decreasing
//! exponents `e` (themselves ordinals) and coefficients `c ≥ 1`. The empty
//! list is 0. Every such term is finite, so every value is below ε₀.

mod parse;
pub mod sample;

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use parse::parse;

/// Default ceiling on the total number of CNF terms (nested terms included).
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_MAX_TERMS`].
pub const MAX_TERMS_ENV: &str = "GLPWB_MAX_TERMS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("result has {count} CNF terms, above the limit of {limit}")]
    TooManyTerms { count: usize, limit: usize },
    #[error("coefficient overflow")]
    CoefficientOverflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a successor ordinal")]
    NotSuccessor(Ordinal),
    #[error("ordinal syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

/// The active term limit; read once from the environment.
pub fn max_terms() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_TERMS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_TERMS)
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::from(1)
    }

    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`. A single term; only the term limit can reject it.
    pub fn omega_pow(exponent: Ordinal) -> Ordinal {
        Ordinal::monomial(exponent, 1)
    }

    /// Checked `ω^e`, enforcing the term limit.
    pub fn try_omega_pow(exponent: &Ordinal) -> Result<Ordinal, OrdinalError> {
        Ordinal::omega_pow(exponent.clone()).checked()
    }

    /// `ω^e · c`, or 0 when `c = 0`.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Ordinal {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds from `(exponent, coefficient)` pairs, which must already be in
    /// Cantor normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Option<Ordinal> {
        let ok = terms.iter().all(|(_, c)| *c > 0) && terms.windows(2).all(|w| w[0].0 > w[1].0);
        ok.then(|| Ordinal {
            terms: terms
                .into_iter()
                .map(|(exponent, coefficient)| Term {
                    exponent,
                    coefficient,
                })
                .collect(),
        })
    }

    /// `ω_k`: `ω_0 = 1`, `ω_{k+1} = ω^{ω_k}`.
    pub fn omega_tower(k: usize) -> Ordinal {
        (0..k).fold(Ordinal::one(), |acc, _| Ordinal::omega_pow(acc))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    pub fn pred(&self) -> Result<Ordinal, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotSuccessor(self.clone()));
        }
        let mut out = self.clone();
        let last = out.terms.last_mut().expect("successor is nonzero");
        last.coefficient -= 1;
        if last.coefficient == 0 {
            out.terms.pop();
        }
        Ok(out)
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
            .expect("adding 1 cannot overflow the term limit")
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Total number of terms, counting the terms of every nested exponent.
    pub fn term_count(&self) -> usize {
        self.terms.iter().map(|t| 1 + t.exponent.term_count()).sum()
    }

    fn checked(self) -> Result<Ordinal, OrdinalError> {
        let count = self.term_count();
        let limit = max_terms();
        if count > limit {
            Err(OrdinalError::TooManyTerms { count, limit })
        } else {
            Ok(self)
        }
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(head) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent > head.exponent)
            .cloned()
            .collect();
        let kept = terms.len();
        match self.terms.get(kept) {
            Some(t) if t.exponent == head.exponent => {
                let coefficient = t
                    .coefficient
                    .checked_add(head.coefficient)
                    .ok_or(OrdinalError::CoefficientOverflow)?;
                terms.push(Term {
                    exponent: head.exponent.clone(),
                    coefficient,
                });
                terms.extend(other.terms[1..].iter().cloned());
            }
            _ => terms.extend(other.terms.iter().cloned()),
        }
        Ordinal { terms }.checked()
    }

    /// Ordinal product `self · other`.
    pub fn mul(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = self.terms.first() else {
            return Ok(Ordinal::zero());
        };
        let mut out = Ordinal::zero();
        for t in &other.terms {
            let piece = if t.exponent.is_zero() {
                // self · c: only the leading coefficient is scaled
                let mut terms = self.terms.clone();
                terms[0].coefficient = lead
                    .coefficient
                    .checked_mul(t.coefficient)
                    .ok_or(OrdinalError::CoefficientOverflow)?;
                Ordinal { terms }
            } else {
                Ordinal::monomial(lead.exponent.add(&t.exponent)?, t.coefficient)
            };
            out = out.add(&piece)?;
        }
        out.checked()
    }

    /// `r(α)`: 0 for α = 0, otherwise the exponent of the last CNF term,
    /// i.e. the unique β with α = γ + ω^β.
    pub fn r(&self) -> Ordinal {
        self.terms
            .last()
            .map(|t| t.exponent.clone())
            .unwrap_or_default()
    }

    /// `r` applied `n` times.
    pub fn r_iter(&self, n: usize) -> Ordinal {
        let mut cur = self.clone();
        for _ in 0..n {
            if cur.is_zero() {
                break;
            }
            cur = cur.r();
        }
        cur
    }

    /// Left division: the unique `(q, rem)` with `self = k·q + rem` and
    /// `rem < k`.
    pub fn div_rem(&self, k: &Ordinal) -> Result<(Ordinal, Ordinal), OrdinalError> {
        let Some(head) = k.terms.first() else {
            return Err(OrdinalError::DivisionByZero);
        };
        let mut quotient = Vec::new();
        let mut idx = 0;
        // each ω^α·c with α above k's leading exponent is k·ω^γ·c where
        // γ solves exp(k) + γ = α
        while idx < self.terms.len() && self.terms[idx].exponent > head.exponent {
            let t = &self.terms[idx];
            quotient.push(Term {
                exponent: left_sub(&head.exponent, &t.exponent),
                coefficient: t.coefficient,
            });
            idx += 1;
        }
        let low = Ordinal {
            terms: self.terms[idx..].to_vec(),
        };
        let rem = if low < *k {
            low
        } else {
            let mut n = low.terms[0].coefficient / head.coefficient;
            let mut kn = k.mul(&Ordinal::from(n))?;
            while kn > low {
                n -= 1;
                kn = k.mul(&Ordinal::from(n))?;
            }
            quotient.push(Term {
                exponent: Ordinal::zero(),
                coefficient: n,
            });
            left_sub(&kn, &low)
        };
        Ok((Ordinal { terms: quotient }, rem))
    }
}

/// The unique `x` with `b + x = a`; requires `b ≤ a`.
pub(crate) fn left_sub(b: &Ordinal, a: &Ordinal) -> Ordinal {
    debug_assert!(b <= a, "left_sub needs {b} <= {a}");
    let common = b
        .terms
        .iter()
        .zip(&a.terms)
        .take_while(|(x, y)| x == y)
        .count();
    if common == b.terms.len() {
        return Ordinal {
            terms: a.terms[common..].to_vec(),
        };
    }
    let (bt, at) = (&b.terms[common], &a.terms[common]);
    let mut terms = Vec::new();
    if bt.exponent == at.exponent {
        terms.push(Term {
            exponent: at.exponent.clone(),
            coefficient: at.coefficient - bt.coefficient,
        });
        terms.extend(a.terms[common + 1..].iter().cloned());
    } else {
        terms.extend(a.terms[common..].iter().cloned());
    }
    Ordinal { terms }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Ordinal {
        Ordinal::monomial(Ordinal::zero(), n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;

    /// Panics when the result exceeds the term limit; use [`Ordinal::add`]
    /// to handle that case.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::add(self, rhs).expect("ordinal addition")
    }
}

impl std::ops::Mul for &Ordinal {
    type Output = Ordinal;

    /// Panics when the result exceeds the term limit; use [`Ordinal::mul`]
    /// to handle that case.
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::mul(self, rhs).expect("ordinal multiplication")
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            if t.exponent == Ordinal::one() {
                f.write_str("w")?;
            } else if let Some(n) = t.exponent.as_finite() {
                write!(f, "w^{n}")?;
            } else if t.exponent == Ordinal::omega() {
                f.write_str("w^w")?;
            } else {
                write!(f, "w^({})", t.exponent)?;
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        parse(s).unwrap()
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(o("w").cmp(&o("3")), Ordering::Greater);
        assert_eq!(o("w^2+1").cmp(&o("w^2+1")), Ordering::Equal);
        assert_eq!(o("w^w").cmp(&o("w*5")), Ordering::Greater);
        assert!(o("w*2") < o("w*2 + 1"));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(o("1").add(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w+1").mul(&o("w")).unwrap(), o("w^2"));
        assert_eq!(Ordinal::omega_pow(Ordinal::zero()), Ordinal::one());
        assert_eq!(o("w+1").mul(&o("2")).unwrap(), o("w*2+1"));
        assert_eq!(o("w").add(&o("1")).unwrap(), o("w+1"));
        assert_ne!(o("w+1"), o("w"));
        assert_eq!(o("2").mul(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w").mul(&o("2")).unwrap(), o("w*2"));
    }

    #[test]
    fn r_examples() {
        assert_eq!(o("0").r(), o("0"));
        assert_eq!(o("w^w*3 + w^2").r(), o("2"));
        assert_eq!(o("5").r(), o("0"));
        assert_eq!(o("w^w").r_iter(2), o("1"));
        assert_eq!(o("w^(w^3)+w").r_iter(0), o("w^(w^3)+w"));
        assert_eq!(Ordinal::omega_tower(3).r_iter(4), o("0"));
    }

    #[test]
    fn div_rem_examples() {
        assert_eq!(o("w^2+w*3+5").div_rem(&o("w")).unwrap(), (o("w+3"), o("5")));
        let a = o("w^w*2 + w + 4");
        assert_eq!(a.div_rem(&o("1")).unwrap(), (a.clone(), o("0")));
        assert_eq!(o("w").div_rem(&o("w^2")).unwrap(), (o("0"), o("w")));
        assert_eq!(o("w").div_rem(&o("0")), Err(OrdinalError::DivisionByZero));
        // finite division
        assert_eq!(o("17").div_rem(&o("5")).unwrap(), (o("3"), o("2")));
        // divisor with a tail larger than the dividend's tail
        assert_eq!(
            o("w*2 + 1").div_rem(&o("w + 5")).unwrap(),
            (o("1"), o("w + 1"))
        );
    }

    #[test]
    fn successor_and_limit() {
        assert!(o("w*2").is_limit());
        assert!(o("w+1").is_successor());
        assert_eq!(o("w+1").pred().unwrap(), o("w"));
        assert!(!o("0").is_limit() && !o("0").is_successor());
        assert!(o("0").pred().is_err());
        assert!(o("w").pred().is_err());
    }

    #[test]
    fn coefficient_overflow_is_reported() {
        let big = Ordinal::from(u64::MAX);
        assert_eq!(big.add(&o("1")), Err(OrdinalError::CoefficientOverflow));
        assert_eq!(
            o("w").mul(&big).unwrap(),
            Ordinal::monomial(o("1"), u64::MAX)
        );
        assert_eq!(big.mul(&o("2")), Err(OrdinalError::CoefficientOverflow));
    }

    #[test]
    fn from_terms_checks_normal_form() {
        assert!(Ordinal::from_terms(vec![(o("1"), 2), (o("0"), 1)]).is_some());
        assert!(Ordinal::from_terms(vec![(o("0"), 1), (o("1"), 1)]).is_none());
        assert!(Ordinal::from_terms(vec![(o("1"), 0)]).is_none());
    }
}
