//! Enumeration of tree-like J_n-frames up to isomorphism.
//!
//! A J_n-frame that forms a single 0-sheet is a finite tree, ordered by
//! `R_0`, of 1-sheets, and each 1-sheet is itself such a frame for
//! `R_1..R_n`. Frames are generated from that recursive shape, so every
//! isomorphism class appears exactly once without a dedupe pass.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::JTree;
use crate::bits;

/// Shape of a sheet at some level. A level-0 shape is a bare world; a
/// shape at level `L ≥ 1` is a root sheet of level `L-1` together with
/// the subtrees hanging below it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Shape {
    label: Option<Arc<Shape>>,
    children: Vec<Arc<Shape>>,
    size: usize,
}

type Key = (usize, usize, bool);

fn shape_cache() -> &'static Mutex<HashMap<Key, Arc<Vec<Arc<Shape>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<Arc<Shape>>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All shapes at `level` on `size` worlds. With `pointed`, the root sheet
/// must recursively have a single root world.
fn shapes(level: usize, size: usize, pointed: bool) -> Arc<Vec<Arc<Shape>>> {
    let key = (level, size, pointed);
    if let Some(hit) = shape_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let mut out = Vec::new();
    if level == 0 {
        if size == 1 {
            out.push(Arc::new(Shape {
                label: None,
                children: vec![],
                size: 1,
            }));
        }
    } else {
        for label_size in 1..=size {
            let labels = shapes(level - 1, label_size, pointed);
            if labels.is_empty() {
                continue;
            }
            for kids in forests(level, size - label_size) {
                for label in labels.iter() {
                    out.push(Arc::new(Shape {
                        label: Some(label.clone()),
                        children: kids.clone(),
                        size,
                    }));
                }
            }
        }
    }
    let out = Arc::new(out);
    shape_cache().lock().unwrap().insert(key, out.clone());
    out
}

/// Multisets of unpointed level-`level` shapes with total size `size`,
/// each listed once as a non-increasing sequence.
fn forests(level: usize, size: usize) -> Vec<Vec<Arc<Shape>>> {
    // every candidate tree, ordered by (size, index) descending
    let mut pool: Vec<Arc<Shape>> = Vec::new();
    for s in 1..=size {
        pool.extend(shapes(level, s, false).iter().cloned());
    }
    let mut out = Vec::new();
    fn go(
        pool: &[Arc<Shape>],
        max_index: usize,
        remaining: usize,
        acc: &mut Vec<Arc<Shape>>,
        out: &mut Vec<Vec<Arc<Shape>>>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for i in (0..max_index).rev() {
            if pool[i].size <= remaining {
                acc.push(pool[i].clone());
                go(pool, i + 1, remaining - pool[i].size, acc, out);
                acc.pop();
            }
        }
    }
    go(&pool, pool.len(), size, &mut Vec::new(), &mut out);
    out
}

/// Lays a shape out on fresh worlds starting at `offset`, adding its
/// edges to `succ` (which has `n+1` relations). Returns the worlds used.
fn materialize(shape: &Shape, level: usize, n: usize, succ: &mut [Vec<u64>], offset: usize) -> u64 {
    let Some(label) = &shape.label else {
        return bits::singleton(offset);
    };
    let k = n + 1 - level;
    let root = materialize(label, level - 1, n, succ, offset);
    let mut next = offset + label.size;
    let mut below = 0u64;
    for child in &shape.children {
        below |= materialize(child, level, n, succ, next);
        next += child.size;
    }
    for x in bits::members(root) {
        succ[k][x] |= below;
    }
    root | below
}

fn build(n: usize, parts: &[Arc<Shape>]) -> JTree {
    let size: usize = parts.iter().map(|p| p.size).sum();
    let mut succ = vec![vec![0u64; size]; n + 1];
    let mut offset = 0;
    for p in parts {
        materialize(p, n + 1, n, &mut succ, offset);
        offset += p.size;
    }
    JTree::from_parts_unchecked(n, succ)
}

/// Every tree-like J_n-frame on `size` worlds, one per isomorphism class.
pub fn enumerate_jtrees(n: usize, size: usize) -> Vec<JTree> {
    assert!((1..=bits::MAX_POINTS).contains(&size));
    forests(n + 1, size).iter().map(|f| build(n, f)).collect()
}

/// Tree-like J_n-frames on `size` worlds with a single world that nothing
/// points to; world 0 is that root. Cached per `(n, size)`.
pub fn enumerate_rooted_jtrees(n: usize, size: usize) -> Arc<Vec<JTree>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<JTree>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(n, size)) {
        return hit.clone();
    }
    assert!((1..=bits::MAX_POINTS).contains(&size));
    let out: Arc<Vec<JTree>> = Arc::new(
        shapes(n + 1, size, true)
            .iter()
            .map(|s| build(n, std::slice::from_ref(s)))
            .collect(),
    );
    cache.lock().unwrap().insert((n, size), out.clone());
    out
}

/// Lexicographically least adjacency encoding over all relabelings.
/// Exponential in the frame size; meant for small frames.
pub fn canonical_code(t: &JTree) -> Vec<u64> {
    let size = t.size();
    let mut perm: Vec<usize> = (0..size).collect();
    let mut best: Option<Vec<u64>> = None;
    let encode = |perm: &[usize]| -> Vec<u64> {
        // perm[new] = old
        let mut inv = vec![0; size];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut code = Vec::with_capacity((t.n() + 1) * size);
        for rel in t.succ_masks() {
            for &old in perm {
                code.push(
                    bits::members(rel[old]).fold(0u64, |acc, y| acc | bits::singleton(inv[y])),
                );
            }
        }
        code
    };
    loop {
        let code = encode(&perm);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_jtrees(0, 2).len(), 2);
        for n in 0..4 {
            assert_eq!(enumerate_jtrees(n, 1).len(), 1);
            assert_eq!(enumerate_rooted_jtrees(n, 1).len(), 1);
        }
        // rooted forests of R_0 alone are the rooted unlabeled trees
        let rooted: Vec<usize> = (1..=6)
            .map(|s| enumerate_rooted_jtrees(0, s).len())
            .collect();
        assert_eq!(rooted, vec![1, 1, 2, 4, 9, 20]);
    }

    #[test]
    fn generated_frames_validate_and_are_distinct() {
        for n in 0..3 {
            for size in 1..=4 {
                let all = enumerate_jtrees(n, size);
                let mut codes = HashSet::new();
                for t in &all {
                    assert!(t.violations().is_empty(), "{:?}", t.to_raw());
                    assert!(codes.insert(canonical_code(t)));
                }
                for t in enumerate_rooted_jtrees(n, size).iter() {
                    assert_eq!(t.root(), Some(0));
                }
            }
        }
    }

    /// Brute force: every relation family on `size` worlds, filtered by
    /// validation and collapsed by canonical code.
    fn brute_force_count(n: usize, size: usize) -> usize {
        let slots: Vec<(usize, usize)> = (0..size)
            .flat_map(|x| (0..size).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        let total = slots.len() * (n + 1);
        let mut codes = HashSet::new();
        for mask in 0u64..(1 << total) {
            let mut succ = vec![vec![0u64; size]; n + 1];
            for bit in bits::members(mask) {
                let (x, y) = slots[bit % slots.len()];
                succ[bit / slots.len()][x] |= bits::singleton(y);
            }
            let t = JTree::from_parts_unchecked(n, succ);
            if t.violations().is_empty() {
                codes.insert(canonical_code(&t));
            }
        }
        codes.len()
    }

    #[test]
    fn matches_brute_force_enumeration() {
        for (n, size) in [
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (1, 3),
            (2, 2),
            (2, 3),
        ] {
            assert_eq!(
                enumerate_jtrees(n, size).len(),
                brute_force_count(n, size),
                "n={n} size={size}"
            );
        }
    }
}
