//! Rank-preserving extensions, ℓ-extensions, ℓ-maximality and `τ⁺`.
//!
//! All ranks of a finite space are natural numbers, so condition (ℓ)
//! constrains every point and (lm) constrains none. [`LimitHook`] lets a
//! caller declare some finite ranks to be treated as limits so that both
//! code paths do real work.

use super::{all_topologies, rank_of_set, FiniteSpace, TopError};
use crate::bits;

/// Ranks to be treated as limit ordinals. The default treats none.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LimitHook {
    pretend: u64,
}

impl LimitHook {
    pub fn pretend(ranks: &[usize]) -> LimitHook {
        LimitHook {
            pretend: bits::from_slice(ranks),
        }
    }

    pub fn is_limit(&self, rank: usize) -> bool {
        rank < 64 && bits::contains(self.pretend, rank)
    }
}

pub fn is_rank_preserving_extension(s: &FiniteSpace, t: &FiniteSpace) -> bool {
    if !s.is_subtopology_of(t) {
        return false;
    }
    match (s.ranks(), t.ranks()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

pub fn is_l_extension(s: &FiniteSpace, t: &FiniteSpace) -> bool {
    is_l_extension_with(s, t, &LimitHook::default())
}

/// Rank-preserving, and every `t`-open `U` around a point `x` of
/// non-limit rank contains an `s`-open set around `x`.
pub fn is_l_extension_with(s: &FiniteSpace, t: &FiniteSpace, hook: &LimitHook) -> bool {
    if !is_rank_preserving_extension(s, t) {
        return false;
    }
    let ranks = s.ranks().expect("checked scattered above");
    t.opens().iter().all(|&u| {
        bits::members(u)
            .filter(|&x| !hook.is_limit(ranks[x]))
            .all(|x| {
                s.opens()
                    .iter()
                    .any(|&v| bits::contains(v, x) && bits::is_subset(v, u))
            })
    })
}

fn finer_topologies(s: &FiniteSpace) -> Result<Vec<FiniteSpace>, TopError> {
    Ok(all_topologies(s.size())?
        .iter()
        .filter(|t| s.is_subtopology_of(t))
        .cloned()
        .collect())
}

/// Every rank-preserving extension of `s`, including `s`.
pub fn extensions(s: &FiniteSpace) -> Result<Vec<FiniteSpace>, TopError> {
    Ok(finer_topologies(s)?
        .into_iter()
        .filter(|t| is_rank_preserving_extension(s, t))
        .collect())
}

pub fn l_extensions(s: &FiniteSpace) -> Result<Vec<FiniteSpace>, TopError> {
    l_extensions_with(s, &LimitHook::default())
}

/// Every ℓ-extension of `s`, including `s`.
pub fn l_extensions_with(s: &FiniteSpace, hook: &LimitHook) -> Result<Vec<FiniteSpace>, TopError> {
    Ok(finer_topologies(s)?
        .into_iter()
        .filter(|t| is_l_extension_with(s, t, hook))
        .collect())
}

/// No proper rank-preserving extension.
pub fn is_maximal(s: &FiniteSpace) -> Result<bool, TopError> {
    Ok(extensions(s)?.len() == 1)
}

/// The rank-preserving extensions of `s` that are themselves maximal.
pub fn maximal_extensions(s: &FiniteSpace) -> Result<Vec<FiniteSpace>, TopError> {
    let all = extensions(s)?;
    Ok(all
        .iter()
        .filter(|t| !all.iter().any(|u| u != *t && t.is_subtopology_of(u)))
        .cloned()
        .collect())
}

pub fn is_l_maximal_by_def(s: &FiniteSpace) -> Result<bool, TopError> {
    is_l_maximal_by_def_with(s, &LimitHook::default())
}

/// No strictly finer topology is an ℓ-extension.
pub fn is_l_maximal_by_def_with(s: &FiniteSpace, hook: &LimitHook) -> Result<bool, TopError> {
    s.cb_sequence()?;
    Ok(l_extensions_with(s, hook)?.len() == 1)
}

pub fn is_l_maximal_by_criterion(s: &FiniteSpace) -> Result<bool, TopError> {
    is_l_maximal_by_criterion_with(s, &LimitHook::default())
}

/// Condition (lm): for `x` of limit rank `λ` and open `V ⊆ O_λ`, either
/// `V ∪ {x}` is open or some neighborhood `U` of `x` has `ρ(V ∩ U) < λ`.
pub fn is_l_maximal_by_criterion_with(s: &FiniteSpace, hook: &LimitHook) -> Result<bool, TopError> {
    let ranks = s.ranks()?;
    for x in 0..s.size() {
        let lambda = ranks[x];
        if !hook.is_limit(lambda) {
            continue;
        }
        let below = (0..s.size())
            .filter(|&y| ranks[y] < lambda)
            .fold(0u64, |acc, y| acc | bits::singleton(y));
        for &v in s.opens().iter().filter(|&&v| bits::is_subset(v, below)) {
            let absorbed = s.is_open(v | bits::singleton(x));
            let bounded = s
                .opens()
                .iter()
                .filter(|&&u| bits::contains(u, x))
                .any(|&u| rank_of_set(&ranks, v & u) < lambda);
            if !absorbed && !bounded {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `τ⁺`: generated by `τ` and every derived set `d(A)`.
pub fn plus_topology(s: &FiniteSpace) -> FiniteSpace {
    let derived: Vec<u64> = if s.size() <= 16 {
        bits::all_subsets(s.size()).map(|a| s.d(a)).collect()
    } else {
        // d is additive, and unions of generators are already open
        (0..s.size()).map(|x| s.d(bits::singleton(x))).collect()
    };
    FiniteSpace::generated(s.size(), s.opens().iter().copied().chain(derived))
}

/// The topology generated by `τ` and the sets `d^{β+1}X` for `β < ρ(X)`.
pub fn plus_by_derivatives(s: &FiniteSpace) -> Result<FiniteSpace, TopError> {
    let seq = s.cb_sequence()?;
    Ok(FiniteSpace::generated(
        s.size(),
        s.opens().iter().copied().chain(seq[1..].iter().copied()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_extension_examples() {
        let s = FiniteSpace::sierpinski();
        assert!(is_rank_preserving_extension(&s, &s));
        assert!(is_l_extension(&s, &s));
        assert!(!is_rank_preserving_extension(&s, &FiniteSpace::discrete(2)));
        let d = FiniteSpace::discrete(3);
        assert_eq!(l_extensions(&d).unwrap(), vec![d.clone()]);
        assert_eq!(extensions(&d).unwrap(), vec![d]);
        let l = l_extensions(&s).unwrap();
        assert!(l.contains(&s));
        assert!(l.iter().all(|t| t.ranks().unwrap()[1] == 1));
    }

    #[test]
    fn plus_examples() {
        assert_eq!(
            plus_topology(&FiniteSpace::left(3)),
            FiniteSpace::discrete(3)
        );
        assert_eq!(
            plus_topology(&FiniteSpace::discrete(2)),
            FiniteSpace::discrete(2)
        );
        assert_eq!(
            plus_topology(&FiniteSpace::sierpinski()),
            FiniteSpace::discrete(2)
        );
    }

    #[test]
    fn plus_generators_agree_above_sixteen_points() {
        // a chain of 17 points split into a left part and a discrete part
        let s = FiniteSpace::sum(&[FiniteSpace::left(9), FiniteSpace::discrete(8)]);
        let by_singletons = FiniteSpace::generated(
            s.size(),
            s.opens()
                .iter()
                .copied()
                .chain((0..s.size()).map(|x| s.d(bits::singleton(x)))),
        );
        assert_eq!(plus_topology(&s), by_singletons);
    }

    #[test]
    fn maximal_extensions_are_maximal() {
        for s in crate::finitetop::scattered_topologies(3).unwrap() {
            for t in maximal_extensions(&s).unwrap() {
                assert!(is_rank_preserving_extension(&s, &t));
                assert!(is_maximal(&t).unwrap());
            }
        }
    }

    #[test]
    fn pretend_limit_makes_criterion_bite() {
        // left(3) with rank 2 treated as a limit: V = {0} ⊆ O_2 is open,
        // {0, 2} is not, and every neighborhood of 2 contains {0, 1}
        let s = FiniteSpace::left(3);
        let hook = LimitHook::pretend(&[2]);
        assert!(is_l_maximal_by_criterion_with(&s, &hook).unwrap());
        assert_eq!(
            is_l_maximal_by_def_with(&s, &hook).unwrap(),
            is_l_maximal_by_criterion_with(&s, &hook).unwrap()
        );
    }
}
