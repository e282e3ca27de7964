//! Bounded countermodel search over rooted J_n-trees.
//!
//! Valuations are evaluated 64 at a time: each world carries a `u64`
//! whose bit `l` is the truth value under the `l`-th valuation of the
//! current chunk.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use super::{enumerate_rooted_jtrees, FrameError, JTree, KripkeModel};
use crate::bits;
use crate::formula::compiled::{Compiled, Node};
use crate::formula::Formula;

/// Largest frame size searched unless the caller asks for more.
pub const DEFAULT_MAX_SIZE: usize = 5;
/// Frames beyond this size are never enumerated.
pub const HARD_MAX_SIZE: usize = 7;
/// Per-frame valuation space is capped at `2^MAX_VALUATION_BITS`.
const MAX_VALUATION_BITS: usize = 30;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("countermodel failed re-verification: {0}")]
    Unverified(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest frame size to try; `None` uses the size estimate.
    pub bound: Option<usize>,
    pub max_size: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bound: None,
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

impl SearchConfig {
    pub fn with_bound(bound: usize) -> SearchConfig {
        SearchConfig {
            bound: Some(bound),
            max_size: bound.min(HARD_MAX_SIZE),
        }
    }

    /// Searches up to the size estimate, as far as [`HARD_MAX_SIZE`] allows.
    pub fn exhaustive() -> SearchConfig {
        SearchConfig {
            bound: None,
            max_size: HARD_MAX_SIZE,
        }
    }
}

/// Frame-size estimate `2^(|sub(f)|·(n+1))`, or `None` if it overflows.
pub fn default_bound(f: &Formula) -> Option<usize> {
    let n = f.max_modality().unwrap_or(0);
    let exp = f.subformulas().len().checked_mul(n + 1)?;
    (exp < 63).then(|| 1usize << exp)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: KripkeModel,
    pub world: usize,
    /// The formula that fails at `world`.
    pub formula: Formula,
    pub truth: Vec<(Formula, u64)>,
}

impl Countermodel {
    pub fn to_json(&self) -> serde_json::Value {
        let frame = &self.model.frame;
        let set = |mask: u64| -> Vec<&str> { bits::members(mask).map(|w| frame.name(w)).collect() };
        let valuation: BTreeMap<&str, Vec<&str>> = self
            .model
            .valuation
            .iter()
            .map(|(k, v)| (k.as_str(), set(*v)))
            .collect();
        let truth: Vec<serde_json::Value> = self
            .truth
            .iter()
            .map(|(f, v)| json!({"formula": f.to_string(), "worlds": set(*v)}))
            .collect();
        json!({
            "frame": frame.to_raw(),
            "valuation": valuation,
            "world": frame.name(self.world),
            "formula": self.formula.to_string(),
            "truth": truth,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No countermodel on frames of up to `searched_up_to` worlds.
    /// `complete` holds when that reaches the size estimate.
    Valid {
        searched_up_to: usize,
        estimate: Option<usize>,
        complete: bool,
    },
    Countermodel(Box<Countermodel>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Countermodel(c) => Some(c),
            Verdict::Valid { .. } => None,
        }
    }
}

/// Searches rooted J_n-trees (n = the formula's top modality) for a
/// world refuting `f`.
pub fn decide_j(f: &Formula, config: &SearchConfig) -> Result<Verdict, DecideError> {
    let n = f.max_modality().unwrap_or(0);
    let compiled = Compiled::new(f);
    let estimate = default_bound(f);
    let target = config
        .bound
        .or(estimate)
        .unwrap_or(usize::MAX)
        .min(config.max_size)
        .min(HARD_MAX_SIZE);
    let vars = compiled.vars.len();
    let mut searched = 0;
    for size in 1..=target {
        if vars * size > MAX_VALUATION_BITS {
            break;
        }
        let frames = enumerate_rooted_jtrees(n, size);
        let hit = frames
            .par_iter()
            .find_map_first(|t| refute_on(&compiled, t).map(|v| (t.clone(), v)));
        if let Some((frame, valuation)) = hit {
            return Ok(Verdict::Countermodel(Box::new(verify(
                f, &compiled, frame, valuation,
            )?)));
        }
        searched = size;
    }
    Ok(Verdict::Valid {
        searched_up_to: searched,
        estimate,
        complete: estimate.is_some_and(|e| searched >= e),
    })
}

/// Decides GLP through `J ⊢ M⁺(f) → f`. A countermodel refutes
/// `M⁺(f) → f` at the frame's root.
pub fn decide_glp(f: &Formula, config: &SearchConfig) -> Result<Verdict, DecideError> {
    let verdict = decide_j(&f.glp_to_j(), config)?;
    if let Verdict::Countermodel(c) = &verdict {
        let plus = c.model.eval(&f.m_plus())?;
        if !bits::contains(plus, c.world) {
            return Err(DecideError::Unverified("M⁺ fails at the root".into()));
        }
    }
    Ok(verdict)
}

fn verify(
    f: &Formula,
    compiled: &Compiled,
    frame: JTree,
    valuation: Vec<u64>,
) -> Result<Countermodel, DecideError> {
    let valuation = compiled.vars.iter().cloned().zip(valuation).collect();
    let model = KripkeModel::new(frame, valuation);
    let truth = model.truth_table(f)?;
    let root_value = truth.last().map_or(0, |(_, v)| *v);
    if bits::contains(root_value, 0) {
        return Err(DecideError::Unverified(format!(
            "{f} holds at the root under the reported valuation"
        )));
    }
    Ok(Countermodel {
        model,
        world: 0,
        formula: f.clone(),
        truth,
    })
}

// Lane patterns for the low six valuation bits.
const LANES: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// First valuation (as per-variable masks) refuting the formula at world 0.
fn refute_on(c: &Compiled, t: &JTree) -> Option<Vec<u64>> {
    let size = t.size();
    let bits_needed = c.vars.len() * size;
    let (chunks, live) = if bits_needed >= 6 {
        (1u64 << (bits_needed - 6), !0u64)
    } else {
        (1, (1u64 << (1u64 << bits_needed)) - 1)
    };
    let succ = t.succ_masks();
    let mut val = vec![0u64; c.nodes.len() * size];
    for chunk in 0..chunks {
        for (i, node) in c.nodes.iter().enumerate() {
            let (done, rest) = val.split_at_mut(i * size);
            let out = &mut rest[..size];
            let at = |j: usize, w: usize| done[j * size + w];
            for (w, slot) in out.iter_mut().enumerate() {
                *slot = match *node {
                    Node::Bottom => 0,
                    Node::Var(v) => {
                        let b = v * size + w;
                        if b < 6 {
                            LANES[b]
                        } else if (chunk >> (b - 6)) & 1 == 1 {
                            !0
                        } else {
                            0
                        }
                    }
                    Node::Not(a) => !at(a, w),
                    Node::And(a, b) => at(a, w) & at(b, w),
                    Node::Or(a, b) => at(a, w) | at(b, w),
                    Node::Implies(a, b) => !at(a, w) | at(b, w),
                    Node::Box(k, a) => bits::members(succ[k][w]).fold(!0, |acc, y| acc & at(a, y)),
                    Node::Diamond(k, a) => {
                        bits::members(succ[k][w]).fold(0, |acc, y| acc | at(a, y))
                    }
                };
            }
        }
        let root = c.root();
        let failing = live & !val[root * size];
        if failing != 0 {
            let index = chunk * 64 + u64::from(failing.trailing_zeros());
            let masks = (0..c.vars.len())
                .map(|v| {
                    (0..size)
                        .filter(|w| (index >> (v * size + w)) & 1 == 1)
                        .fold(0u64, |acc, w| acc | bits::singleton(w))
                })
                .collect();
            return Some(masks);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn j(s: &str) -> Verdict {
        decide_j(&parse(s).unwrap(), &SearchConfig::default()).unwrap()
    }

    fn glp(s: &str) -> Verdict {
        decide_glp(&parse(s).unwrap(), &SearchConfig::default()).unwrap()
    }

    #[test]
    fn j_examples() {
        assert!(j("[0]([0]p -> p) -> [0]p").is_valid());
        assert!(j("[0]p -> [1][0]p").is_valid());
        let c = j("[0]p -> [1]p");
        let c = c.countermodel().expect("J lacks monotonicity");
        assert!(!bits::contains(c.model.eval(&c.formula).unwrap(), c.world));
    }

    #[test]
    fn glp_examples() {
        assert!(glp("[0]p -> [1]p").is_valid());
        assert!(glp("<0>p -> [1]<0>p").is_valid());
        assert!(glp("[1]p -> [0]p").countermodel().is_some());
        assert!(glp("[0]false").countermodel().is_some());
    }

    #[test]
    fn countermodel_is_smallest() {
        let v = j("[0]false");
        assert_eq!(v.countermodel().unwrap().model.frame.size(), 2);
    }

    #[test]
    fn bounds() {
        assert_eq!(default_bound(&parse("p").unwrap()), Some(2));
        assert_eq!(default_bound(&parse("[1]p").unwrap()), Some(16));
        let v = decide_j(&parse("p | ~p").unwrap(), &SearchConfig::with_bound(3)).unwrap();
        assert_eq!(
            v,
            Verdict::Valid {
                searched_up_to: 3,
                estimate: Some(8),
                complete: false
            }
        );
    }

    #[test]
    fn lane_evaluation_matches_model_checking() {
        // every valuation on every rooted frame of size <= 3
        let f = parse("[0](p -> <1>q) | [1]~q").unwrap();
        let c = Compiled::new(&f);
        for size in 1..=3 {
            for t in enumerate_rooted_jtrees(1, size).iter() {
                let lane = refute_on(&c, t);
                let mut brute = None;
                'outer: for a in bits::all_subsets(size) {
                    for b in bits::all_subsets(size) {
                        let m = KripkeModel::new(
                            t.clone(),
                            BTreeMap::from([("p".to_string(), a), ("q".to_string(), b)]),
                        );
                        if !bits::contains(m.eval(&f).unwrap(), 0) {
                            brute = Some(vec![a, b]);
                            break 'outer;
                        }
                    }
                }
                assert_eq!(lane.is_some(), brute.is_some());
            }
        }
    }
}
