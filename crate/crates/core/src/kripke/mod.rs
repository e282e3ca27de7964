//! Finite tree-like J-frames, Kripke models over them, model checking and
//! the bounded countermodel search that decides J and (via `M⁺`) GLP.

mod decide;
mod enumerate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;
use crate::formula::compiled::Compiled;
use crate::formula::Formula;

pub use decide::{
    decide_glp, decide_j, default_bound, Countermodel, DecideError, SearchConfig, Verdict,
    DEFAULT_MAX_SIZE, HARD_MAX_SIZE,
};
pub use enumerate::{canonical_code, enumerate_jtrees, enumerate_rooted_jtrees};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame violates the J-tree conditions: {}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("index {k} exceeds the frame's top modality {n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("formula uses modality {used} but the frame only has R_0..R_{n}")]
    ModalityOutOfRange { used: usize, n: usize },
    #[error("frames are limited to {} worlds", bits::MAX_POINTS)]
    TooLarge,
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// One failed frame condition, with witnesses named by world.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownWorld {
        name: String,
    },
    DuplicateWorld {
        name: String,
    },
    BadRelationKey {
        key: String,
    },
    NotTransitive {
        k: usize,
        x: String,
        y: String,
        z: String,
    },
    NotWellFounded {
        k: usize,
        x: String,
    },
    /// `x R_n y` with `n > m`, but `x` and `y` disagree on `R_m`-successor `z`.
    Condition2 {
        m: usize,
        n: usize,
        x: String,
        y: String,
        z: String,
    },
    /// `x R_m y`, `y R_n z` with `n > m`, but not `x R_m z`.
    Condition3 {
        m: usize,
        n: usize,
        x: String,
        y: String,
        z: String,
    },
    NotTreeLike {
        k: usize,
        detail: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownWorld { name } => write!(f, "unknown world {name}"),
            Violation::DuplicateWorld { name } => write!(f, "duplicate world {name}"),
            Violation::BadRelationKey { key } => write!(f, "bad relation key {key:?}"),
            Violation::NotTransitive { k, x, y, z } => {
                write!(f, "R_{k} not transitive: {x}->{y}->{z}")
            }
            Violation::NotWellFounded { k, x } => {
                write!(f, "R_{k} not dually well-founded: {x} reaches itself")
            }
            Violation::Condition2 { m, n, x, y, z } => write!(
                f,
                "condition 2: {x} R_{n} {y} but they disagree on R_{m}-successor {z}"
            ),
            Violation::Condition3 { m, n, x, y, z } => write!(
                f,
                "condition 3: {x} R_{m} {y} R_{n} {z} without {x} R_{m} {z}"
            ),
            Violation::NotTreeLike { k, detail } => {
                write!(f, "not tree-like at level {k}: {detail}")
            }
        }
    }
}

/// JSON shape of a frame: `{"n":1,"worlds":["a","b"],"rel":{"0":[["a","b"]],"1":[]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFrame {
    pub n: usize,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub rel: BTreeMap<String, Vec<(String, String)>>,
}

/// A finite tree-like J_n-frame: worlds `0..size` and relations `R_0..R_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JTree {
    n: usize,
    names: Vec<String>,
    /// `succ[k][x]` is the set of `R_k`-successors of `x`.
    succ: Vec<Vec<u64>>,
}

impl JTree {
    /// Builds and validates a frame from successor masks.
    pub fn new(n: usize, names: Vec<String>, succ: Vec<Vec<u64>>) -> Result<JTree, FrameError> {
        if names.len() > bits::MAX_POINTS {
            return Err(FrameError::TooLarge);
        }
        assert_eq!(succ.len(), n + 1, "need one relation per modality 0..=n");
        let t = JTree { n, names, succ };
        let violations = t.violations();
        if violations.is_empty() {
            Ok(t)
        } else {
            Err(FrameError::Invalid(violations))
        }
    }

    /// Builds from edge lists over world indices.
    pub fn from_edges(
        n: usize,
        size: usize,
        edges: &[Vec<(usize, usize)>],
    ) -> Result<JTree, FrameError> {
        let mut succ = vec![vec![0u64; size]; n + 1];
        for (k, list) in edges.iter().enumerate() {
            for &(x, y) in list {
                succ[k][x] |= bits::singleton(y);
            }
        }
        JTree::new(n, default_names(size), succ)
    }

    pub(crate) fn from_parts_unchecked(n: usize, succ: Vec<Vec<u64>>) -> JTree {
        let size = succ.first().map_or(0, Vec::len);
        JTree {
            n,
            names: default_names(size),
            succ,
        }
    }

    pub fn from_raw(raw: &RawFrame) -> Result<JTree, FrameError> {
        let (tree, mut violations) = JTree::lower_raw(raw)?;
        violations.extend(tree.violations());
        if violations.is_empty() {
            Ok(tree)
        } else {
            Err(FrameError::Invalid(violations))
        }
    }

    fn lower_raw(raw: &RawFrame) -> Result<(JTree, Vec<Violation>), FrameError> {
        if raw.worlds.len() > bits::MAX_POINTS {
            return Err(FrameError::TooLarge);
        }
        let mut violations = Vec::new();
        let mut index = BTreeMap::new();
        for (i, w) in raw.worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                violations.push(Violation::DuplicateWorld { name: w.clone() });
            }
        }
        let mut succ = vec![vec![0u64; raw.worlds.len()]; raw.n + 1];
        for (key, pairs) in &raw.rel {
            let Some(k) = key.parse::<usize>().ok().filter(|&k| k <= raw.n) else {
                violations.push(Violation::BadRelationKey { key: key.clone() });
                continue;
            };
            for (x, y) in pairs {
                match (index.get(x), index.get(y)) {
                    (Some(&i), Some(&j)) => succ[k][i] |= bits::singleton(j),
                    (None, _) => violations.push(Violation::UnknownWorld { name: x.clone() }),
                    (_, None) => violations.push(Violation::UnknownWorld { name: y.clone() }),
                }
            }
        }
        let tree = JTree {
            n: raw.n,
            names: raw.worlds.clone(),
            succ,
        };
        Ok((tree, violations))
    }

    /// Every violated condition of a raw frame; empty when it is a valid
    /// tree-like J-frame.
    pub fn validate(raw: &RawFrame) -> Vec<Violation> {
        match JTree::lower_raw(raw) {
            Ok((tree, mut v)) => {
                v.extend(tree.violations());
                v
            }
            Err(_) => vec![Violation::NotTreeLike {
                k: 0,
                detail: format!("more than {} worlds", bits::MAX_POINTS),
            }],
        }
    }

    pub fn to_raw(&self) -> RawFrame {
        let rel = (0..=self.n)
            .map(|k| {
                let pairs = (0..self.size())
                    .flat_map(|x| {
                        bits::members(self.succ[k][x])
                            .map(move |y| (x, y))
                            .collect::<Vec<_>>()
                    })
                    .map(|(x, y)| (self.names[x].clone(), self.names[y].clone()))
                    .collect();
                (k.to_string(), pairs)
            })
            .collect();
        RawFrame {
            n: self.n,
            worlds: self.names.clone(),
            rel,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|w| w == name)
    }

    pub fn with_names(mut self, names: Vec<String>) -> JTree {
        assert_eq!(names.len(), self.size());
        self.names = names;
        self
    }

    pub fn full(&self) -> u64 {
        bits::full(self.size())
    }

    /// `R_k(x)` as a mask.
    pub fn successors(&self, k: usize, x: usize) -> u64 {
        self.succ[k][x]
    }

    pub fn related(&self, k: usize, x: usize, y: usize) -> bool {
        bits::contains(self.succ[k][x], y)
    }

    /// `δ_k(A) = {x : ∃y∈A, x R_k y}`.
    pub fn diamond(&self, k: usize, a: u64) -> u64 {
        if k > self.n {
            return 0;
        }
        let mut out = 0;
        for x in 0..self.size() {
            if self.succ[k][x] & a != 0 {
                out |= bits::singleton(x);
            }
        }
        out
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let size = self.size();
        let name = |x: usize| self.names[x].clone();
        for k in 0..=self.n {
            for x in 0..size {
                for y in bits::members(self.succ[k][x]) {
                    for z in bits::members(self.succ[k][y]) {
                        if !self.related(k, x, z) {
                            out.push(Violation::NotTransitive {
                                k,
                                x: name(x),
                                y: name(y),
                                z: name(z),
                            });
                        }
                    }
                }
            }
            let closure = transitive_closure(&self.succ[k]);
            for (x, reach) in closure.iter().enumerate() {
                if bits::contains(*reach, x) {
                    out.push(Violation::NotWellFounded { k, x: name(x) });
                }
            }
        }
        for m in 0..=self.n {
            for n in m + 1..=self.n {
                for x in 0..size {
                    for y in bits::members(self.succ[n][x]) {
                        let diff = self.succ[m][x] ^ self.succ[m][y];
                        for z in bits::members(diff) {
                            out.push(Violation::Condition2 {
                                m,
                                n,
                                x: name(x),
                                y: name(y),
                                z: name(z),
                            });
                        }
                    }
                    for y in bits::members(self.succ[m][x]) {
                        for z in bits::members(self.succ[n][y]) {
                            if !self.related(m, x, z) {
                                out.push(Violation::Condition3 {
                                    m,
                                    n,
                                    x: name(x),
                                    y: name(y),
                                    z: name(z),
                                });
                            }
                        }
                    }
                }
            }
        }
        out.extend(self.tree_violations());
        out
    }

    fn tree_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for k in 0..=self.n {
            let subs = self.sheet_partition(k + 1);
            for sheet in self.sheet_partition(k) {
                let inside: Vec<usize> = (0..subs.len())
                    .filter(|&i| bits::is_subset(subs[i], sheet))
                    .collect();
                // sheet-level R_k
                let above = |b: usize| -> Vec<usize> {
                    inside
                        .iter()
                        .copied()
                        .filter(|&a| bits::members(subs[a]).any(|x| self.succ[k][x] & subs[b] != 0))
                        .collect()
                };
                let mut roots = 0;
                for &b in &inside {
                    let preds = above(b);
                    if preds.contains(&b) {
                        out.push(Violation::NotTreeLike {
                            k,
                            detail: format!(
                                "R_{k} inside the {}-sheet of {}",
                                k + 1,
                                self.names[subs[b].trailing_zeros() as usize]
                            ),
                        });
                        continue;
                    }
                    if preds.is_empty() {
                        roots += 1;
                    }
                    for &a in &preds {
                        for x in bits::members(subs[a]) {
                            if !bits::is_subset(subs[b], self.succ[k][x]) {
                                out.push(Violation::NotTreeLike {
                                    k,
                                    detail: format!(
                                        "{} does not see the whole {}-sheet of {}",
                                        self.names[x],
                                        k + 1,
                                        self.names[subs[b].trailing_zeros() as usize]
                                    ),
                                });
                            }
                        }
                    }
                    for (i, &a) in preds.iter().enumerate() {
                        for &c in &preds[i + 1..] {
                            let rep_a = subs[a].trailing_zeros() as usize;
                            let rep_c = subs[c].trailing_zeros() as usize;
                            let comparable = self.succ[k][rep_a] & subs[c] != 0
                                || self.succ[k][rep_c] & subs[a] != 0;
                            if !comparable {
                                out.push(Violation::NotTreeLike {
                                    k,
                                    detail: format!(
                                        "the {}-sheet of {} has incomparable R_{k}-predecessors {} and {}",
                                        k + 1,
                                        self.names[subs[b].trailing_zeros() as usize],
                                        self.names[rep_a],
                                        self.names[rep_c]
                                    ),
                                });
                            }
                        }
                    }
                }
                if roots != 1 {
                    out.push(Violation::NotTreeLike {
                        k,
                        detail: format!(
                            "the {k}-sheet of {} has {roots} root sheets",
                            self.names[sheet.trailing_zeros() as usize]
                        ),
                    });
                }
            }
        }
        out
    }

    /// Classes of the equivalence generated by `R_k ∪ … ∪ R_n`; `k = n+1`
    /// gives singletons. Ordered by least member.
    pub(crate) fn sheet_partition(&self, k: usize) -> Vec<u64> {
        let size = self.size();
        let mut parent: Vec<usize> = (0..size).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for j in k..=self.n {
            for x in 0..size {
                for y in bits::members(self.succ[j][x]) {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut classes: BTreeMap<usize, u64> = BTreeMap::new();
        for x in 0..size {
            let r = find(&mut parent, x);
            *classes.entry(r).or_default() |= bits::singleton(x);
        }
        let mut out: Vec<u64> = classes.into_values().collect();
        out.sort_by_key(|s| s.trailing_zeros());
        out
    }

    /// The `k`-sheets: equivalence classes of the closure of `R_k ∪ R_{k+1} ∪ …`.
    pub fn sheets(&self, k: usize) -> Result<Vec<Vec<usize>>, FrameError> {
        self.check_index(k)?;
        Ok(self
            .sheet_partition(k)
            .into_iter()
            .map(bits::to_vec)
            .collect())
    }

    fn check_index(&self, k: usize) -> Result<(), FrameError> {
        if k > self.n {
            Err(FrameError::IndexOutOfRange { k, n: self.n })
        } else {
            Ok(())
        }
    }

    fn incoming_from(&self, k: usize) -> u64 {
        let mut hit = 0;
        for j in k..=self.n {
            for x in 0..self.size() {
                hit |= self.succ[j][x];
            }
        }
        hit
    }

    /// Hereditary `k`-roots: worlds with no incoming `R_j` for any `j ≥ k`.
    pub fn hereditary_roots(&self, k: usize) -> Result<Vec<usize>, FrameError> {
        self.check_index(k)?;
        Ok(bits::to_vec(self.hereditary_root_mask(k)))
    }

    /// Same as [`hereditary_roots`](Self::hereditary_roots) but allows
    /// `k = n+1`, where every world qualifies.
    pub(crate) fn hereditary_root_mask(&self, k: usize) -> u64 {
        self.full() & !self.incoming_from(k)
    }

    /// `R*_k(w) = R_k(w) ∪ … ∪ R_n(w)`.
    pub fn rstar(&self, k: usize, w: usize) -> Result<u64, FrameError> {
        self.check_index(k)?;
        Ok((k..=self.n).fold(0, |acc, j| acc | self.succ[j][w]))
    }

    /// Worlds reachable from `w` by a nonempty path in `R_k ∪ … ∪ R_n`.
    pub fn rstar_closure(&self, k: usize, w: usize) -> Result<u64, FrameError> {
        self.check_index(k)?;
        let union: Vec<u64> = (0..self.size())
            .map(|x| (k..=self.n).fold(0, |acc, j| acc | self.succ[j][x]))
            .collect();
        Ok(transitive_closure(&union)[w])
    }

    /// Length of the longest `R_k`-chain starting at `w`; this is the
    /// Cantor–Bendixson rank of `w` in the `R_k`-upset topology.
    pub fn height(&self, k: usize, w: usize) -> usize {
        fn go(t: &JTree, k: usize, w: usize, memo: &mut [Option<usize>]) -> usize {
            if let Some(h) = memo[w] {
                return h;
            }
            let h = bits::members(t.succ[k][w])
                .map(|y| 1 + go(t, k, y, memo))
                .max()
                .unwrap_or(0);
            memo[w] = Some(h);
            h
        }
        if k > self.n {
            return 0;
        }
        go(self, k, w, &mut vec![None; self.size()])
    }

    /// The unique world with no incoming edges, if the frame is rooted.
    pub fn root(&self) -> Option<usize> {
        let roots = self.hereditary_root_mask(0);
        (roots.count_ones() == 1 && self.sheet_partition(0).len() == 1)
            .then(|| roots.trailing_zeros() as usize)
    }

    /// The subframe on the worlds reachable from `w` (including `w`),
    /// renumbered in increasing order of the original indices.
    pub fn generated_subframe(&self, w: usize) -> JTree {
        let keep = bits::singleton(w) | self.rstar_closure(0, w).unwrap_or(0);
        self.restrict(keep)
    }

    /// Restriction to the worlds in `keep`, preserving their order.
    pub fn restrict(&self, keep: u64) -> JTree {
        let old: Vec<usize> = bits::to_vec(keep);
        let pos = |x: usize| old.iter().position(|&o| o == x);
        let succ = (0..=self.n)
            .map(|k| {
                old.iter()
                    .map(|&x| {
                        bits::members(self.succ[k][x] & keep)
                            .filter_map(pos)
                            .fold(0u64, |acc, y| acc | bits::singleton(y))
                    })
                    .collect()
            })
            .collect();
        JTree {
            n: self.n,
            names: old.iter().map(|&x| self.names[x].clone()).collect(),
            succ,
        }
    }

    /// The same worlds and `R_1..R_n`, renumbered as `R_0..R_{n-1}`.
    pub fn drop_bottom(&self) -> JTree {
        assert!(self.n >= 1, "no relation above R_0");
        JTree {
            n: self.n - 1,
            names: self.names.clone(),
            succ: self.succ[1..].to_vec(),
        }
    }

    pub(crate) fn succ_masks(&self) -> &[Vec<u64>] {
        &self.succ
    }
}

fn default_names(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("w{i}")).collect()
}

fn transitive_closure(succ: &[u64]) -> Vec<u64> {
    let mut reach = succ.to_vec();
    loop {
        let mut changed = false;
        for x in 0..reach.len() {
            let mut r = reach[x];
            for y in bits::members(reach[x]) {
                r |= reach[y];
            }
            if r != reach[x] {
                reach[x] = r;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// A frame with a valuation of propositional variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub frame: JTree,
    pub valuation: BTreeMap<String, u64>,
}

impl KripkeModel {
    pub fn new(frame: JTree, valuation: BTreeMap<String, u64>) -> KripkeModel {
        let full = frame.full();
        let valuation = valuation.into_iter().map(|(k, v)| (k, v & full)).collect();
        KripkeModel { frame, valuation }
    }

    /// Truth set of `f`.
    pub fn eval(&self, f: &Formula) -> Result<u64, FrameError> {
        let table = self.truth_table(f)?;
        Ok(table.last().map(|(_, v)| *v).unwrap_or(0))
    }

    /// Truth set of every distinct subformula of `f`, innermost first.
    pub fn truth_table(&self, f: &Formula) -> Result<Vec<(Formula, u64)>, FrameError> {
        if let Some(used) = f.max_modality() {
            if used > self.frame.n {
                return Err(FrameError::ModalityOutOfRange {
                    used,
                    n: self.frame.n,
                });
            }
        }
        let c = Compiled::new(f);
        let val: Vec<u64> = c
            .vars
            .iter()
            .map(|v| self.valuation.get(v).copied().unwrap_or(0))
            .collect();
        let sets = c.eval(self.frame.full(), &val, |k, a| self.frame.diamond(k, a));
        Ok(c.subformulas.into_iter().zip(sets).collect())
    }
}
