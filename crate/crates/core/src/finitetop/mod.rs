//! Finite topological spaces: derived sets, Cantor–Bendixson ranks, d-maps,
//! ℓ-extensions, the `τ⁺` operation, GLP-spaces, Magari frames and
//! d-products.
//!
//! Points are `0..size` and sets are `u64` masks. Every finite topology is
//! Alexandrov, so each point has a least open neighborhood; those are cached
//! next to the explicit open family.

mod enumerate;
mod extension;
mod magari;
mod maps;
mod poly;
mod product;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;

pub use enumerate::{
    all_topologies, glp_polyspaces, random_scattered, random_topology, scattered_topologies,
    topologies_by_closure, ENUMERATION_CAP,
};
pub use extension::{
    extensions, is_l_extension, is_l_extension_with, is_l_maximal_by_criterion,
    is_l_maximal_by_criterion_with, is_l_maximal_by_def, is_l_maximal_by_def_with, is_maximal,
    is_rank_preserving_extension, l_extensions, l_extensions_with, maximal_extensions,
    plus_by_derivatives, plus_topology, LimitHook,
};
pub use magari::{DeltaOperator, RawDelta};
pub use maps::{
    check_d_map, is_continuous, is_d_map, is_open_map, is_pointwise_discrete, MapFailure,
};
pub use poly::{
    check_jn_morphism, is_jn_morphism, satisfies_star, JnFailure, PolySpace, RawPolySpace,
};
pub use product::{d_product, glp_d_product, prod_plus_target, DProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopError {
    #[error("carrier of {0} points exceeds the 64-point limit")]
    TooLarge(usize),
    #[error("set {0:?} is not a subset of the carrier")]
    OutOfCarrier(Vec<usize>),
    #[error("the family must contain the empty set and the carrier")]
    MissingBounds,
    #[error("not closed under union: {0:?} and {1:?}")]
    NotClosedUnion(Vec<usize>, Vec<usize>),
    #[error("not closed under intersection: {0:?} and {1:?}")]
    NotClosedIntersection(Vec<usize>, Vec<usize>),
    #[error("space is not scattered; {0:?} has no isolated point")]
    NotScattered(Vec<usize>),
    #[error("carriers differ: {0} vs {1} points")]
    CarrierMismatch(usize, usize),
    #[error("enumeration over {size} points exceeds the cap of {cap}")]
    OverCap { size: usize, cap: usize },
    #[error("operator is not a Magari operator")]
    NotMagari,
    #[error("polyspaces have different numbers of topologies: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("formula uses modality {used} but only {available} topologies are given")]
    ModalityOutOfRange { used: usize, available: usize },
}

/// A topology on `0..size`, stored as its full open family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    size: usize,
    opens: Vec<u64>,
    nbhd: Vec<u64>,
}

/// JSON shape `{"size":3,"opens":[[],[0],[0,1],[0,1,2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSpace {
    pub size: usize,
    pub opens: Vec<Vec<usize>>,
}

impl FiniteSpace {
    /// Validates that `opens` is a topology on `0..size`.
    pub fn new(size: usize, opens: impl IntoIterator<Item = u64>) -> Result<FiniteSpace, TopError> {
        if size > bits::MAX_POINTS {
            return Err(TopError::TooLarge(size));
        }
        let full = bits::full(size);
        let mut opens: Vec<u64> = opens.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        if let Some(&bad) = opens.iter().find(|&&u| u & !full != 0) {
            return Err(TopError::OutOfCarrier(bits::to_vec(bad)));
        }
        if opens.first() != Some(&0) || opens.last() != Some(&full) {
            return Err(TopError::MissingBounds);
        }
        let family: HashSet<u64> = opens.iter().copied().collect();
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !family.contains(&(a | b)) {
                    return Err(TopError::NotClosedUnion(bits::to_vec(a), bits::to_vec(b)));
                }
                if !family.contains(&(a & b)) {
                    return Err(TopError::NotClosedIntersection(
                        bits::to_vec(a),
                        bits::to_vec(b),
                    ));
                }
            }
        }
        Ok(FiniteSpace::from_sorted_opens(size, opens))
    }

    fn from_sorted_opens(size: usize, opens: Vec<u64>) -> FiniteSpace {
        let full = bits::full(size);
        let nbhd = (0..size)
            .map(|x| {
                opens
                    .iter()
                    .filter(|&&u| bits::contains(u, x))
                    .fold(full, |acc, &u| acc & u)
            })
            .collect();
        FiniteSpace { size, opens, nbhd }
    }

    /// The topology whose least neighborhood of `x` is `nbhd[x]`. Each
    /// `nbhd[x]` must contain `x`, and `y ∈ nbhd[x]` must imply
    /// `nbhd[y] ⊆ nbhd[x]`.
    pub(crate) fn from_nbhds(size: usize, nbhd: Vec<u64>) -> FiniteSpace {
        debug_assert!((0..size).all(|x| bits::contains(nbhd[x], x)));
        let mut opens = unions_of(&nbhd);
        opens.sort_unstable();
        FiniteSpace { size, opens, nbhd }
    }

    /// The least topology containing every generator.
    pub fn generated(size: usize, generators: impl IntoIterator<Item = u64>) -> FiniteSpace {
        let full = bits::full(size);
        let mut nbhd = vec![full; size];
        for g in generators {
            let g = g & full;
            for x in bits::members(g) {
                nbhd[x] &= g;
            }
        }
        FiniteSpace::from_nbhds(size, nbhd)
    }

    pub fn discrete(size: usize) -> FiniteSpace {
        FiniteSpace::from_nbhds(size, (0..size).map(bits::singleton).collect())
    }

    pub fn indiscrete(size: usize) -> FiniteSpace {
        FiniteSpace::from_nbhds(size, vec![bits::full(size); size])
    }

    /// The ordinal `k` with its left topology: opens are initial segments.
    pub fn left(k: usize) -> FiniteSpace {
        FiniteSpace::from_nbhds(k, (0..k).map(|x| bits::full(x + 1)).collect())
    }

    /// Opens `∅, {0}, {0,1}`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::left(2)
    }

    /// Upsets of a transitive relation: the least neighborhood of `x` is
    /// `{x} ∪ succ[x]`.
    pub fn upsets(succ: &[u64]) -> FiniteSpace {
        FiniteSpace::from_nbhds(
            succ.len(),
            succ.iter()
                .enumerate()
                .map(|(x, s)| s | bits::singleton(x))
                .collect(),
        )
    }

    /// Topological sum; points of later parts are shifted past earlier ones.
    pub fn sum(parts: &[FiniteSpace]) -> FiniteSpace {
        let mut nbhd = Vec::new();
        let mut offset = 0;
        for p in parts {
            nbhd.extend(p.nbhd.iter().map(|u| u << offset));
            offset += p.size;
        }
        FiniteSpace::from_nbhds(offset, nbhd)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> u64 {
        bits::full(self.size)
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    /// Least open set containing `x`.
    pub fn nbhd(&self, x: usize) -> u64 {
        self.nbhd[x]
    }

    pub fn is_open(&self, a: u64) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    pub fn is_subtopology_of(&self, other: &FiniteSpace) -> bool {
        self.size == other.size && self.opens.iter().all(|&u| other.is_open(u))
    }

    /// Limit points of `a`.
    pub fn d(&self, a: u64) -> u64 {
        (0..self.size)
            .filter(|&x| self.nbhd[x] & !bits::singleton(x) & a != 0)
            .fold(0, |acc, x| acc | bits::singleton(x))
    }

    /// `X ∖ d(X ∖ a)`: points with a punctured neighborhood inside `a`.
    pub fn d_tilde(&self, a: u64) -> u64 {
        self.full() & !self.d(self.full() & !a)
    }

    /// Isolated points of the whole space.
    pub fn iso(&self) -> u64 {
        self.full() & !self.d(self.full())
    }

    /// Whether `a` is discrete as a subspace.
    pub fn is_discrete_subset(&self, a: u64) -> bool {
        bits::members(a).all(|x| self.nbhd[x] & a == bits::singleton(x))
    }

    pub fn is_scattered(&self) -> bool {
        self.perfect_kernel() == 0
    }

    fn perfect_kernel(&self) -> u64 {
        let mut cur = self.full();
        loop {
            let next = self.d(cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// `[X, dX, d²X, …, ∅]`.
    pub fn cb_sequence(&self) -> Result<Vec<u64>, TopError> {
        let kernel = self.perfect_kernel();
        if kernel != 0 {
            return Err(TopError::NotScattered(bits::to_vec(kernel)));
        }
        let mut seq = vec![self.full()];
        while *seq.last().unwrap() != 0 {
            let next = self.d(*seq.last().unwrap());
            seq.push(next);
        }
        Ok(seq)
    }

    /// `ρ(x)` for every point.
    pub fn ranks(&self) -> Result<Vec<usize>, TopError> {
        let seq = self.cb_sequence()?;
        Ok((0..self.size)
            .map(|x| seq[1..].iter().filter(|&&s| bits::contains(s, x)).count())
            .collect())
    }

    pub fn rank_of(&self, x: usize) -> Result<usize, TopError> {
        Ok(self.ranks()?[x])
    }

    /// Least `α` with `d^α X = ∅`.
    pub fn rank(&self) -> Result<usize, TopError> {
        Ok(self.cb_sequence()?.len() - 1)
    }

    /// `d^α X`, empty once `α` reaches the rank.
    pub fn derivative(&self, alpha: usize) -> Result<u64, TopError> {
        Ok(self.cb_sequence()?.get(alpha).copied().unwrap_or(0))
    }

    /// The subspace on `a`, renumbered in increasing order.
    pub fn subspace(&self, a: u64) -> FiniteSpace {
        let pts = bits::to_vec(a);
        let compress = |set: u64| -> u64 {
            pts.iter()
                .enumerate()
                .filter(|(_, &p)| bits::contains(set, p))
                .fold(0, |acc, (i, _)| acc | bits::singleton(i))
        };
        FiniteSpace::from_nbhds(
            pts.len(),
            pts.iter().map(|&p| compress(self.nbhd[p])).collect(),
        )
    }

    pub fn to_raw(&self) -> RawSpace {
        RawSpace {
            size: self.size,
            opens: self.opens.iter().map(|&u| bits::to_vec(u)).collect(),
        }
    }

    pub fn from_raw(raw: &RawSpace) -> Result<FiniteSpace, TopError> {
        if raw.size > bits::MAX_POINTS {
            return Err(TopError::TooLarge(raw.size));
        }
        let mut opens = Vec::with_capacity(raw.opens.len());
        for u in &raw.opens {
            if u.iter().any(|&p| p >= raw.size) {
                return Err(TopError::OutOfCarrier(u.clone()));
            }
            opens.push(bits::from_slice(u));
        }
        FiniteSpace::new(raw.size, opens)
    }
}

/// Every union of members of `basis`, including the empty union.
fn unions_of(basis: &[u64]) -> Vec<u64> {
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut out = vec![0];
    let mut distinct: Vec<u64> = basis.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for b in distinct {
        for i in 0..out.len() {
            let u = out[i] | b;
            if seen.insert(u) {
                out.push(u);
            }
        }
    }
    out
}

/// `ρ(A)`: least ordinal above the rank of every point of `a`.
pub(crate) fn rank_of_set(ranks: &[usize], a: u64) -> usize {
    bits::members(a).map(|x| ranks[x] + 1).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_examples() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.opens(), &[0b00, 0b01, 0b11]);
        assert_eq!(s.d(0b01), 0b10);
        assert_eq!(s.d(0), 0);
        assert_eq!(FiniteSpace::left(3).d(0b001), 0b110);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FiniteSpace::left(3).ranks().unwrap(), vec![0, 1, 2]);
        assert_eq!(FiniteSpace::discrete(4).ranks().unwrap(), vec![0; 4]);
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.ranks().unwrap(), vec![0, 1]);
        assert_eq!(s.rank().unwrap(), 2);
        assert_eq!(s.cb_sequence().unwrap(), vec![0b11, 0b10, 0]);
        assert!(matches!(
            FiniteSpace::indiscrete(2).ranks(),
            Err(TopError::NotScattered(_))
        ));
    }

    #[test]
    fn scattered_agrees_with_definition() {
        // every nonempty subset has an isolated point
        for size in 1..=3 {
            for s in all_topologies(size).unwrap().iter() {
                let by_def = bits::all_subsets(size)
                    .filter(|&a| a != 0)
                    .all(|a| bits::members(a).any(|x| s.nbhd(x) & a == bits::singleton(x)));
                assert_eq!(s.is_scattered(), by_def);
            }
        }
    }

    #[test]
    fn validation_rejects_non_topologies() {
        assert_eq!(FiniteSpace::new(2, [0b01]), Err(TopError::MissingBounds));
        assert!(matches!(
            FiniteSpace::new(3, [0, 0b001, 0b010, 0b111]),
            Err(TopError::NotClosedUnion(..))
        ));
        assert!(matches!(
            FiniteSpace::new(3, [0, 0b011, 0b110, 0b111]),
            Err(TopError::NotClosedIntersection(..))
        ));
        assert!(matches!(
            FiniteSpace::new(1, [0, 0b11]),
            Err(TopError::OutOfCarrier(_))
        ));
    }

    #[test]
    fn generated_matches_explicit() {
        let g = FiniteSpace::generated(3, [0b011, 0b110]);
        assert_eq!(
            g,
            FiniteSpace::new(3, [0, 0b010, 0b011, 0b110, 0b111]).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let s = FiniteSpace::left(3);
        let text = serde_json::to_string(&s.to_raw()).unwrap();
        assert_eq!(text, r#"{"size":3,"opens":[[],[0],[0,1],[0,1,2]]}"#);
        let back: RawSpace = serde_json::from_str(&text).unwrap();
        assert_eq!(FiniteSpace::from_raw(&back).unwrap(), s);
    }

    #[test]
    fn subspace_and_sum() {
        let l = FiniteSpace::left(3);
        assert_eq!(l.subspace(0b110), FiniteSpace::sierpinski());
        let s = FiniteSpace::sum(&[FiniteSpace::sierpinski(), FiniteSpace::discrete(1)]);
        assert_eq!(s.ranks().unwrap(), vec![0, 1, 0]);
    }
}
