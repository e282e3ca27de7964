//! Continuity, openness and d-maps, checked over explicit open families.

use super::FiniteSpace;
use crate::bits;

/// First clause a map fails, with the offending set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapFailure {
    NotTotal,
    /// Preimage of this open set of the target is not open.
    NotContinuous(Vec<usize>),
    /// Image of this open set of the source is not open.
    NotOpen(Vec<usize>),
    /// This fiber is not a discrete subspace.
    NotPointwiseDiscrete(Vec<usize>),
}

pub(crate) fn image(f: &[usize], a: u64) -> u64 {
    bits::members(a).fold(0, |acc, x| acc | bits::singleton(f[x]))
}

pub(crate) fn preimage(f: &[usize], b: u64) -> u64 {
    f.iter()
        .enumerate()
        .filter(|(_, &y)| bits::contains(b, y))
        .fold(0, |acc, (x, _)| acc | bits::singleton(x))
}

fn total(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> bool {
    f.len() == x.size() && f.iter().all(|&v| v < y.size())
}

pub fn is_continuous(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> bool {
    total(x, y, f) && y.opens().iter().all(|&v| x.is_open(preimage(f, v)))
}

pub fn is_open_map(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> bool {
    total(x, y, f) && x.opens().iter().all(|&u| y.is_open(image(f, u)))
}

pub fn is_pointwise_discrete(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> bool {
    total(x, y, f) && (0..y.size()).all(|v| fiber_is_discrete(x, preimage(f, bits::singleton(v))))
}

/// Every point of `fiber` has an open set meeting `fiber` only in itself.
fn fiber_is_discrete(x: &FiniteSpace, fiber: u64) -> bool {
    bits::members(fiber).all(|p| x.opens().iter().any(|&u| u & fiber == bits::singleton(p)))
}

pub fn check_d_map(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> Result<(), MapFailure> {
    if !total(x, y, f) {
        return Err(MapFailure::NotTotal);
    }
    if let Some(&v) = y.opens().iter().find(|&&v| !x.is_open(preimage(f, v))) {
        return Err(MapFailure::NotContinuous(bits::to_vec(v)));
    }
    if let Some(&u) = x.opens().iter().find(|&&u| !y.is_open(image(f, u))) {
        return Err(MapFailure::NotOpen(bits::to_vec(u)));
    }
    if let Some(v) = (0..y.size()).find(|&v| !fiber_is_discrete(x, preimage(f, bits::singleton(v))))
    {
        return Err(MapFailure::NotPointwiseDiscrete(bits::to_vec(preimage(
            f,
            bits::singleton(v),
        ))));
    }
    Ok(())
}

/// Continuous, open and pointwise discrete.
pub fn is_d_map(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> bool {
    check_d_map(x, y, f).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_map_examples() {
        let s = FiniteSpace::sierpinski();
        let ranks = s.ranks().unwrap();
        let omega = FiniteSpace::left(s.rank().unwrap());
        assert!(is_d_map(&s, &omega, &ranks));
        assert!(is_d_map(&s, &s, &[0, 1]));
        assert_eq!(
            check_d_map(&s, &FiniteSpace::discrete(1), &[0, 0]),
            Err(MapFailure::NotPointwiseDiscrete(vec![0, 1]))
        );
    }

    #[test]
    fn clause_witnesses() {
        let s = FiniteSpace::sierpinski();
        let d = FiniteSpace::discrete(2);
        // identity from Sierpiński onto the discrete space is open but not continuous
        assert_eq!(
            check_d_map(&s, &d, &[0, 1]),
            Err(MapFailure::NotContinuous(vec![1]))
        );
        assert_eq!(
            check_d_map(&d, &s, &[0, 1]),
            Err(MapFailure::NotOpen(vec![1]))
        );
        assert!(!is_d_map(&s, &d, &[0]));
    }
}
