//! Polytopological spaces, neighborhood semantics and J_n-morphisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::maps::{check_d_map, image, is_open_map, preimage, MapFailure};
use super::{plus_topology, FiniteSpace, RawSpace, TopError};
use crate::bits;
use crate::formula::compiled::Compiled;
use crate::formula::Formula;
use crate::kripke::JTree;

/// `(X, τ_0, …, τ_n)` on a common carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolySpace {
    size: usize,
    topologies: Vec<FiniteSpace>,
}

/// JSON shape `{"size":m,"topologies":[opens, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPolySpace {
    pub size: usize,
    pub topologies: Vec<Vec<Vec<usize>>>,
}

impl PolySpace {
    pub fn new(topologies: Vec<FiniteSpace>) -> Result<PolySpace, TopError> {
        let size = topologies.first().map_or(0, FiniteSpace::size);
        if let Some(t) = topologies.iter().find(|t| t.size() != size) {
            return Err(TopError::CarrierMismatch(size, t.size()));
        }
        Ok(PolySpace { size, topologies })
    }

    /// `(τ, τ⁺, τ⁺⁺, …)` with `n+1` topologies.
    pub fn naturally_generated(base: &FiniteSpace, n: usize) -> PolySpace {
        let mut ts = vec![base.clone()];
        for _ in 0..n {
            let next = plus_topology(ts.last().unwrap());
            ts.push(next);
        }
        PolySpace {
            size: base.size(),
            topologies: ts,
        }
    }

    /// A J_n-tree with `σ_i` the `R_i`-upsets.
    pub fn of_jtree(t: &JTree) -> PolySpace {
        let ts = (0..=t.n())
            .map(|k| {
                let succ: Vec<u64> = (0..t.size()).map(|x| t.successors(k, x)).collect();
                FiniteSpace::upsets(&succ)
            })
            .collect();
        PolySpace {
            size: t.size(),
            topologies: ts,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Index of the top topology.
    pub fn n(&self) -> usize {
        self.topologies.len().saturating_sub(1)
    }

    pub fn topologies(&self) -> &[FiniteSpace] {
        &self.topologies
    }

    /// Each `τ_k` scattered, `τ_k ⊆ τ_{k+1}`, and every `d_{τ_k}(A)` open
    /// in `τ_{k+1}`.
    pub fn is_glp_space(&self) -> bool {
        self.topologies.iter().all(FiniteSpace::is_scattered)
            && self.topologies.windows(2).all(|w| {
                w[0].is_subtopology_of(&w[1])
                    && bits::all_subsets(self.size).all(|a| w[1].is_open(w[0].d(a)))
            })
    }

    /// Truth set of `f` with `⟨k⟩` read as `d_{τ_k}`.
    pub fn eval(&self, valuation: &BTreeMap<String, u64>, f: &Formula) -> Result<u64, TopError> {
        Ok(self
            .truth_table(valuation, f)?
            .last()
            .map_or(0, |(_, v)| *v))
    }

    pub fn truth_table(
        &self,
        valuation: &BTreeMap<String, u64>,
        f: &Formula,
    ) -> Result<Vec<(Formula, u64)>, TopError> {
        if let Some(used) = f.max_modality() {
            if used >= self.topologies.len() {
                return Err(TopError::ModalityOutOfRange {
                    used,
                    available: self.topologies.len(),
                });
            }
        }
        let c = Compiled::new(f);
        let val: Vec<u64> = c
            .vars
            .iter()
            .map(|v| valuation.get(v).copied().unwrap_or(0))
            .collect();
        let full = bits::full(self.size);
        let sets = c.eval(full, &val, |k, a| self.topologies[k].d(a));
        Ok(c.subformulas.into_iter().zip(sets).collect())
    }

    /// A valuation falsifying `f` somewhere, searching all assignments.
    pub fn refuting_valuation(
        &self,
        f: &Formula,
    ) -> Result<Option<BTreeMap<String, u64>>, TopError> {
        let vars = f.variables();
        let count = 1u64 << (vars.len() * self.size);
        for code in 0..count {
            let valuation: BTreeMap<String, u64> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), (code >> (i * self.size)) & bits::full(self.size)))
                .collect();
            if self.eval(&valuation, f)? != bits::full(self.size) {
                return Ok(Some(valuation));
            }
        }
        Ok(None)
    }

    pub fn to_raw(&self) -> RawPolySpace {
        RawPolySpace {
            size: self.size,
            topologies: self.topologies.iter().map(|t| t.to_raw().opens).collect(),
        }
    }

    pub fn from_raw(raw: &RawPolySpace) -> Result<PolySpace, TopError> {
        let ts = raw
            .topologies
            .iter()
            .map(|opens| {
                FiniteSpace::from_raw(&RawSpace {
                    size: raw.size,
                    opens: opens.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ts.is_empty() {
            return Ok(PolySpace {
                size: raw.size,
                topologies: ts,
            });
        }
        PolySpace::new(ts)
    }
}

/// The first failed clause of the J_n-morphism definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JnFailure {
    Arity {
        spaces: usize,
        relations: usize,
    },
    NotTotal,
    /// (j₁): not a d-map for the top topology.
    J1(MapFailure),
    /// (j₂): image of this `τ_k`-open set is not an `R_k`-upset.
    J2 {
        k: usize,
        open: Vec<usize>,
    },
    /// (j₃): this preimage is not `τ_k`-open.
    J3 {
        k: usize,
        root: usize,
        set: Vec<usize>,
    },
    /// (j₄): the fiber over `root` is not `τ_k`-discrete.
    J4 {
        k: usize,
        root: usize,
        fiber: Vec<usize>,
    },
}

pub fn check_jn_morphism(p: &PolySpace, t: &JTree, f: &[usize]) -> Result<(), JnFailure> {
    if p.topologies.len() != t.n() + 1 {
        return Err(JnFailure::Arity {
            spaces: p.topologies.len(),
            relations: t.n() + 1,
        });
    }
    if f.len() != p.size || f.iter().any(|&w| w >= t.size()) {
        return Err(JnFailure::NotTotal);
    }
    let target = PolySpace::of_jtree(t);
    let n = t.n();
    check_d_map(&p.topologies[n], &target.topologies[n], f).map_err(JnFailure::J1)?;
    for k in 0..=n {
        let (src, dst) = (&p.topologies[k], &target.topologies[k]);
        if !is_open_map(src, dst, f) {
            let bad = src
                .opens()
                .iter()
                .find(|&&u| !dst.is_open(image(f, u)))
                .copied()
                .unwrap_or(0);
            return Err(JnFailure::J2 {
                k,
                open: bits::to_vec(bad),
            });
        }
    }
    for k in 0..n {
        let tau = &p.topologies[k];
        for w in bits::members(t.hereditary_root_mask(k + 1)) {
            let star = t.rstar(k, w).expect("k < n");
            for set in [preimage(f, star), preimage(f, star | bits::singleton(w))] {
                if !tau.is_open(set) {
                    return Err(JnFailure::J3 {
                        k,
                        root: w,
                        set: bits::to_vec(set),
                    });
                }
            }
            let fiber = preimage(f, bits::singleton(w));
            if !tau.is_discrete_subset(fiber) {
                return Err(JnFailure::J4 {
                    k,
                    root: w,
                    fiber: bits::to_vec(fiber),
                });
            }
        }
    }
    Ok(())
}

pub fn is_jn_morphism(p: &PolySpace, t: &JTree, f: &[usize]) -> bool {
    check_jn_morphism(p, t, f).is_ok()
}

/// Condition (*): for `k < n` and each hereditary `(k+1)`-root `w`,
/// `f⁻¹(R*_k(w) ∪ {w}) ⊆ d̃_k(f⁻¹(R*_k(w)))`.
pub fn satisfies_star(p: &PolySpace, t: &JTree, f: &[usize]) -> bool {
    (0..t.n()).all(|k| {
        let tau = &p.topologies[k];
        bits::members(t.hereditary_root_mask(k + 1)).all(|w| {
            let star = t.rstar(k, w).expect("k < n");
            bits::is_subset(
                preimage(f, star | bits::singleton(w)),
                tau.d_tilde(preimage(f, star)),
            )
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn glp_space_examples() {
        let all_discrete = PolySpace::new(vec![FiniteSpace::discrete(3); 3]).unwrap();
        assert!(all_discrete.is_glp_space());
        let natural = PolySpace::naturally_generated(&FiniteSpace::left(4), 2);
        assert!(natural.is_glp_space());
        let bad =
            PolySpace::new(vec![FiniteSpace::discrete(2), FiniteSpace::sierpinski()]).unwrap();
        assert!(!bad.is_glp_space());
    }

    #[test]
    fn eval_examples() {
        let p = PolySpace::new(vec![FiniteSpace::discrete(3)]).unwrap();
        let none = BTreeMap::new();
        assert_eq!(p.eval(&none, &parse("[0]false").unwrap()).unwrap(), 0b111);
        let s = PolySpace::new(vec![FiniteSpace::left(3)]).unwrap();
        let lob = parse("[0]([0]p -> p) -> [0]p").unwrap();
        assert_eq!(s.refuting_valuation(&lob).unwrap(), None);
        assert!(matches!(
            s.eval(&none, &parse("[1]p").unwrap()),
            Err(TopError::ModalityOutOfRange {
                used: 1,
                available: 1
            })
        ));
    }

    #[test]
    fn identity_on_a_tree_is_a_morphism() {
        let t = JTree::from_edges(1, 3, &[vec![(0, 1), (0, 2)], vec![(1, 2)]]).unwrap();
        let p = PolySpace::of_jtree(&t);
        assert_eq!(check_jn_morphism(&p, &t, &[0, 1, 2]), Ok(()));
        assert!(satisfies_star(&p, &t, &[0, 1, 2]));
    }

    #[test]
    fn openness_failure_has_witness() {
        // a single R_0 edge; the discrete space maps onto it but {0} ↦ {a}
        // is not an upset
        let t = JTree::from_edges(0, 2, &[vec![(0, 1)]]).unwrap();
        let p = PolySpace::new(vec![FiniteSpace::discrete(2)]).unwrap();
        assert_eq!(
            check_jn_morphism(&p, &t, &[0, 1]),
            Err(JnFailure::J1(MapFailure::NotOpen(vec![0])))
        );
        let t = JTree::from_edges(1, 2, &[vec![(0, 1)], vec![]]).unwrap();
        let p = PolySpace::new(vec![FiniteSpace::discrete(2), FiniteSpace::discrete(2)]).unwrap();
        assert_eq!(
            check_jn_morphism(&p, &t, &[0, 1]),
            Err(JnFailure::J2 {
                k: 0,
                open: vec![0]
            })
        );
    }
}
