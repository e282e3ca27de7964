//! Small helpers for subsets of a finite carrier encoded as `u64` masks.
//!
//! Every finite structure in this crate (worlds of a J-tree, points of a
//! finite space) is indexed `0..size` with `size <= 64`.

/// Largest carrier any mask-based structure accepts.
pub const MAX_POINTS: usize = 64;

/// Mask with the low `size` bits set.
pub fn full(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

pub fn singleton(x: usize) -> u64 {
    1u64 << x
}

pub fn contains(set: u64, x: usize) -> bool {
    set >> x & 1 == 1
}

pub fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

/// Iterates the members of `set` in increasing order.
pub fn members(set: u64) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(x)
        }
    })
}

pub fn to_vec(set: u64) -> Vec<usize> {
    members(set).collect()
}

pub fn from_slice(points: &[usize]) -> u64 {
    points.iter().fold(0, |acc, &x| acc | singleton(x))
}

/// All subsets of the carrier `0..size`, in increasing mask order.
pub fn all_subsets(size: usize) -> impl Iterator<Item = u64> {
    assert!(size < 64, "subset enumeration needs size < 64");
    0..(1u64 << size)
}

/// All subsets of `set`, including the empty set and `set` itself.
pub fn subsets_of(set: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set {
            None
        } else {
            Some((cur.wrapping_sub(set)) & set)
        };
        Some(cur)
    })
}
