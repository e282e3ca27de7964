//! Explicit derivative-like operators and the Magari frame correspondence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FiniteSpace, TopError};
use crate::bits;

/// An operator on subsets of `0..size`, tabulated: `table[A]` is `δ(A)`
/// with `A` read as a bitmask index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaOperator {
    size: usize,
    table: Vec<u64>,
}

/// JSON shape `{"size":3,"table":{"[0,2]":[1],...}}`; absent keys map to ∅.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDelta {
    pub size: usize,
    pub table: BTreeMap<String, Vec<usize>>,
}

/// Tabulation is exponential in the carrier size.
const MAX_TABLE_POINTS: usize = 16;

impl DeltaOperator {
    pub fn from_fn(size: usize, f: impl Fn(u64) -> u64) -> Result<DeltaOperator, TopError> {
        if size > MAX_TABLE_POINTS {
            return Err(TopError::TooLarge(size));
        }
        let full = bits::full(size);
        Ok(DeltaOperator {
            size,
            table: bits::all_subsets(size).map(|a| f(a) & full).collect(),
        })
    }

    /// The operator that is additive and sends `{x}` to `singletons[x]`.
    pub fn additive(singletons: &[u64]) -> Result<DeltaOperator, TopError> {
        DeltaOperator::from_fn(singletons.len(), |a| {
            bits::members(a).fold(0, |acc, x| acc | singletons[x])
        })
    }

    /// `d_τ` of a space, tabulated.
    pub fn of_space(s: &FiniteSpace) -> Result<DeltaOperator, TopError> {
        DeltaOperator::from_fn(s.size(), |a| s.d(a))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, a: u64) -> u64 {
        self.table[(a & bits::full(self.size)) as usize]
    }

    /// `δ∅ = ∅`, `δ(A ∪ B) = δA ∪ δB` and `δA = δ(A ∖ δA)`.
    pub fn is_magari(&self) -> bool {
        if self.apply(0) != 0 {
            return false;
        }
        let subsets: Vec<u64> = bits::all_subsets(self.size).collect();
        let additive = subsets.iter().all(|&a| {
            subsets
                .iter()
                .all(|&b| self.apply(a | b) == self.apply(a) | self.apply(b))
        });
        additive
            && subsets
                .iter()
                .all(|&a| self.apply(a) == self.apply(a & !self.apply(a)))
    }

    /// The topology whose closed sets are the `A` with `δA ⊆ A`.
    pub fn to_space(&self) -> Result<FiniteSpace, TopError> {
        if !self.is_magari() {
            return Err(TopError::NotMagari);
        }
        let full = bits::full(self.size);
        let opens = bits::all_subsets(self.size)
            .filter(|&a| bits::is_subset(self.apply(a), a))
            .map(|closed| full & !closed);
        FiniteSpace::new(self.size, opens)
    }

    pub fn to_raw(&self) -> RawDelta {
        let key = |a: u64| serde_json::to_string(&bits::to_vec(a)).expect("plain vector");
        RawDelta {
            size: self.size,
            table: bits::all_subsets(self.size)
                .filter(|&a| self.apply(a) != 0)
                .map(|a| (key(a), bits::to_vec(self.apply(a))))
                .collect(),
        }
    }

    pub fn from_raw(raw: &RawDelta) -> Result<DeltaOperator, TopError> {
        if raw.size > MAX_TABLE_POINTS {
            return Err(TopError::TooLarge(raw.size));
        }
        let mut table = vec![0u64; 1 << raw.size];
        for (k, v) in &raw.table {
            let a: Vec<usize> =
                serde_json::from_str(k).map_err(|_| TopError::OutOfCarrier(vec![]))?;
            if let Some(&bad) = a.iter().chain(v).find(|&&p| p >= raw.size) {
                return Err(TopError::OutOfCarrier(vec![bad]));
            }
            table[bits::from_slice(&a) as usize] = bits::from_slice(v);
        }
        Ok(DeltaOperator {
            size: raw.size,
            table,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_not_magari() {
        let id = DeltaOperator::from_fn(2, |a| a).unwrap();
        assert!(!id.is_magari());
        assert_eq!(id.to_space(), Err(TopError::NotMagari));
    }

    #[test]
    fn scattered_spaces_give_magari_operators() {
        let s = FiniteSpace::left(3);
        let d = DeltaOperator::of_space(&s).unwrap();
        assert!(d.is_magari());
        assert_eq!(d.to_space().unwrap(), s);
        assert!(!DeltaOperator::of_space(&FiniteSpace::indiscrete(2))
            .unwrap()
            .is_magari());
    }

    #[test]
    fn json_round_trip() {
        let d = DeltaOperator::of_space(&FiniteSpace::sierpinski()).unwrap();
        let raw = d.to_raw();
        assert_eq!(raw.table.get("[0]"), Some(&vec![1]));
        let text = serde_json::to_string(&raw).unwrap();
        let back: RawDelta = serde_json::from_str(&text).unwrap();
        assert_eq!(DeltaOperator::from_raw(&back).unwrap(), d);
    }
}
