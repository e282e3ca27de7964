//! Exhaustive and random generation of finite topologies.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use super::{FiniteSpace, PolySpace, TopError};
use crate::bits;

/// Largest carrier for which all topologies are enumerated.
pub const ENUMERATION_CAP: usize = 5;

/// All topologies on `size` points, one per preorder (`x ≤ y` iff
/// `y` lies in the least neighborhood of `x`). Cached.
pub fn all_topologies(size: usize) -> Result<Arc<Vec<FiniteSpace>>, TopError> {
    if size > ENUMERATION_CAP {
        return Err(TopError::OverCap {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<FiniteSpace>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&size) {
        return Ok(hit.clone());
    }
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|x| (0..size).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut nbhd: Vec<u64> = (0..size).map(bits::singleton).collect();
        for i in bits::members(mask) {
            let (x, y) = pairs[i];
            nbhd[x] |= bits::singleton(y);
        }
        let transitive =
            (0..size).all(|x| bits::members(nbhd[x]).all(|y| bits::is_subset(nbhd[y], nbhd[x])));
        if transitive {
            out.push(FiniteSpace::from_nbhds(size, nbhd));
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(size, out.clone());
    Ok(out)
}

/// All topologies on `size ≤ 4` points, found by testing every family of
/// subsets for the topology axioms. Independent of [`all_topologies`].
pub fn topologies_by_closure(size: usize) -> Result<Vec<FiniteSpace>, TopError> {
    if size > 4 {
        return Err(TopError::OverCap { size, cap: 4 });
    }
    let full = bits::full(size);
    // candidate members other than ∅ and the carrier
    let middle: Vec<u64> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << middle.len()) {
        let family = std::iter::once(0)
            .chain(bits::members(choice).map(|i| middle[i]))
            .chain(std::iter::once(full));
        if let Ok(space) = FiniteSpace::new(size, family) {
            out.push(space);
        }
    }
    Ok(out)
}

pub fn scattered_topologies(size: usize) -> Result<Vec<FiniteSpace>, TopError> {
    Ok(all_topologies(size)?
        .iter()
        .filter(|s| s.is_scattered())
        .cloned()
        .collect())
}

/// A random topology: a random relation closed to a preorder.
pub fn random_topology<R: Rng + ?Sized>(rng: &mut R, size: usize) -> FiniteSpace {
    let mut nbhd: Vec<u64> = (0..size).map(bits::singleton).collect();
    for x in 0..size {
        for y in 0..size {
            if x != y && rng.gen_ratio(1, 4) {
                nbhd[x] |= bits::singleton(y);
            }
        }
    }
    close(&mut nbhd);
    FiniteSpace::from_nbhds(size, nbhd)
}

/// A random scattered topology: a random strict order under a random
/// relabeling.
pub fn random_scattered<R: Rng + ?Sized>(rng: &mut R, size: usize) -> FiniteSpace {
    let mut perm: Vec<usize> = (0..size).collect();
    for i in (1..size).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut nbhd: Vec<u64> = (0..size).map(bits::singleton).collect();
    for i in 0..size {
        for j in 0..i {
            if rng.gen_ratio(1, 3) {
                nbhd[perm[i]] |= bits::singleton(perm[j]);
            }
        }
    }
    close(&mut nbhd);
    FiniteSpace::from_nbhds(size, nbhd)
}

fn close(nbhd: &mut [u64]) {
    loop {
        let mut changed = false;
        for x in 0..nbhd.len() {
            let grown = bits::members(nbhd[x]).fold(nbhd[x], |acc, y| acc | nbhd[y]);
            if grown != nbhd[x] {
                nbhd[x] = grown;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Every GLP-space `(τ_0, …, τ_n)` on `size` points, built one topology at
/// a time from the scattered topologies and filtered by the GLP clauses.
pub fn glp_polyspaces(size: usize, n: usize) -> Result<Vec<PolySpace>, TopError> {
    let scattered = scattered_topologies(size)?;
    let mut partial: Vec<Vec<FiniteSpace>> = scattered.iter().map(|s| vec![s.clone()]).collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for chain in &partial {
            let last = chain.last().unwrap();
            for s in &scattered {
                let ok = last.is_subtopology_of(s)
                    && bits::all_subsets(size).all(|a| s.is_open(last.d(a)));
                if ok {
                    let mut c = chain.clone();
                    c.push(s.clone());
                    next.push(c);
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(PolySpace::new).collect()
}
