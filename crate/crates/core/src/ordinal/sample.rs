//! Random ordinals for sweeps and property tests.

use rand::Rng;

use super::{Ordinal, Term};

/// A random ordinal strictly below `bound`; `bound` must be nonzero.
///
/// Picks a CNF prefix of `bound`, lowers the next coefficient and appends
/// a random tail below the corresponding power of ω.
pub fn below<R: Rng + ?Sized>(rng: &mut R, bound: &Ordinal) -> Ordinal {
    assert!(!bound.is_zero(), "nothing lies below 0");
    let cut = rng.gen_range(0..bound.terms.len());
    let mut terms: Vec<Term> = bound.terms[..cut].to_vec();
    let pivot = &bound.terms[cut];
    let c = rng.gen_range(0..pivot.coefficient);
    if c > 0 {
        terms.push(Term {
            exponent: pivot.exponent.clone(),
            coefficient: c,
        });
    }
    terms.extend(below_power(rng, &pivot.exponent).terms);
    Ordinal { terms }
}

/// A random ordinal below `ω^e`, possibly 0.
pub fn below_power<R: Rng + ?Sized>(rng: &mut R, e: &Ordinal) -> Ordinal {
    if e.is_zero() {
        return Ordinal::zero();
    }
    let k = rng.gen_range(0..=3);
    let mut exps: Vec<Ordinal> = (0..k).map(|_| below(rng, e)).collect();
    exps.sort_by(|a, b| b.cmp(a));
    exps.dedup();
    Ordinal {
        terms: exps
            .into_iter()
            .map(|exponent| Term {
                exponent,
                coefficient: rng.gen_range(1..=4),
            })
            .collect(),
    }
}

/// A random point of the interval `[1, top]`; returns `top` itself with
/// probability 1/8.
pub fn in_interval<R: Rng + ?Sized>(rng: &mut R, top: &Ordinal) -> Ordinal {
    assert!(!top.is_zero(), "[1, 0] is empty");
    if rng.gen_ratio(1, 8) {
        return top.clone();
    }
    let x = below(rng, top);
    if x.is_zero() {
        Ordinal::one()
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bound = crate::ordinal::parse("w^(w^2 + 1)*2 + w^3 + 4").unwrap();
        for _ in 0..500 {
            let x = below(&mut rng, &bound);
            assert!(x < bound);
            assert!(Ordinal::from_terms(
                x.terms()
                    .iter()
                    .map(|t| (t.exponent.clone(), t.coefficient))
                    .collect()
            )
            .is_some());
            let y = in_interval(&mut rng, &bound);
            assert!(!y.is_zero() && y <= bound);
        }
    }
}
