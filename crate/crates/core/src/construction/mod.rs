//! Compiles a finite tree-like J_n-frame into an ordinal model
//! `f: [1, λ] ↠ T` with `λ < ε₀`.
//!
//! The topologies on `[1, λ]` are ℓ-maximal extensions that exist only by
//! a choice argument, so a model is kept as its computable skeleton: the
//! recipe, `λ`, and the map `f`. Ranks in `τ_k` are `r^{k+1}`.
//!
//! The recursion runs on the original tree. A subproblem is a set of
//! worlds, a root, and a level `k`: relations `R_k, …, R_n` are in play and
//! `R_k` acts as the bottom relation.

mod check;
mod json;

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::bits;
use crate::formula::Formula;
use crate::kripke::{decide_glp, DecideError, JTree, KripkeModel, SearchConfig, Verdict};
use crate::ordinal::{left_sub, sample, Ordinal, OrdinalError};

pub use check::{CheckFailure, CheckReport};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("the frame has no single root")]
    NotRooted,
    #[error("R_{k}-successors of world {root} do not split into subtrees")]
    Decomposition { k: usize, root: usize },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("{alpha} lies outside [1, {lambda}]")]
    OutOfRange { alpha: Ordinal, lambda: Ordinal },
    #[error(transparent)]
    Decide(#[from] DecideError),
}

/// The construction tree. Worlds are indices into the source tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    /// `λ = 1`, `f(1) = root`.
    Single { root: usize },
    /// Concatenation `[1, λ₁] ⊔ … ⊔ [1, λ_l]` as `[1, λ₁ + … + λ_l]`.
    Sum { parts: Vec<Recipe>, lambda: Ordinal },
    /// `λ = κ·ω` with `κ` the sum `parts`; `f(κ·q + β) = g(β)` and
    /// `f(λ) = root`.
    GlIter {
        parts: Box<Recipe>,
        root: usize,
        lambda: Ordinal,
    },
    /// `λ = ω^μ`, `f = f₁ ∘ r` after reindexing.
    ///
    /// With `shifted`, `[1, λ₁]` is read as `[0, μ]` (`μ = λ₁ − 1` if
    /// finite, else `λ₁`) and `f(α) = f₁(1 + r(α))`. Without it `μ = λ₁`
    /// and `f(α) = f₁(r(α))`, defined only where `r(α) ≥ 1`.
    Lift {
        inner: Box<Recipe>,
        root: usize,
        shifted: bool,
        lambda: Ordinal,
    },
    /// `λ = κ·ω^{λ₀}`: the d-product of `x` (on `[1, κ]`) with the lift
    /// `y` (on `[1, ω^{λ₀}]`).
    DProd {
        x: Box<Recipe>,
        y: Box<Recipe>,
        root: usize,
        lambda: Ordinal,
    },
}

impl Recipe {
    pub fn lambda(&self) -> Ordinal {
        match self {
            Recipe::Single { .. } => Ordinal::one(),
            Recipe::Sum { lambda, .. }
            | Recipe::GlIter { lambda, .. }
            | Recipe::Lift { lambda, .. }
            | Recipe::DProd { lambda, .. } => lambda.clone(),
        }
    }

    /// `κ` for the product-like recipes.
    pub fn kappa(&self) -> Option<Ordinal> {
        match self {
            Recipe::GlIter { parts, .. } => Some(parts.lambda()),
            Recipe::DProd { x, .. } => Some(x.lambda()),
            _ => None,
        }
    }

    pub fn root(&self) -> Option<usize> {
        match self {
            Recipe::Single { root }
            | Recipe::GlIter { root, .. }
            | Recipe::Lift { root, .. }
            | Recipe::DProd { root, .. } => Some(*root),
            Recipe::Sum { .. } => None,
        }
    }

    fn sum(parts: Vec<Recipe>) -> Result<Recipe, OrdinalError> {
        let mut lambda = Ordinal::zero();
        for p in &parts {
            lambda = lambda.add(&p.lambda())?;
        }
        Ok(Recipe::Sum { parts, lambda })
    }

    fn lift(inner: Recipe, root: usize, shifted: bool) -> Result<Recipe, OrdinalError> {
        let l1 = inner.lambda();
        let mu = match l1.as_finite() {
            Some(k) if shifted => Ordinal::from(k - 1),
            _ => l1,
        };
        Ok(Recipe::Lift {
            lambda: Ordinal::try_omega_pow(&mu)?,
            inner: Box::new(inner),
            root,
            shifted,
        })
    }

    /// `f(α)`; the caller guarantees `1 ≤ α ≤ λ`.
    fn eval(&self, alpha: &Ordinal) -> Result<usize, OrdinalError> {
        match self {
            Recipe::Single { root } => Ok(*root),
            Recipe::Sum { parts, .. } => {
                let mut offset = Ordinal::zero();
                for p in parts {
                    let end = offset.add(&p.lambda())?;
                    if *alpha <= end {
                        return p.eval(&left_sub(&offset, alpha));
                    }
                    offset = end;
                }
                unreachable!("alpha is at most the sum")
            }
            Recipe::GlIter {
                parts,
                root,
                lambda,
            } => {
                if alpha == lambda {
                    return Ok(*root);
                }
                let kappa = parts.lambda();
                let (_, rem) = alpha.div_rem(&kappa)?;
                parts.eval(if rem.is_zero() { &kappa } else { &rem })
            }
            Recipe::Lift { inner, shifted, .. } => {
                let r = alpha.r();
                if *shifted {
                    inner.eval(&Ordinal::one().add(&r)?)
                } else {
                    debug_assert!(!r.is_zero(), "unshifted lift read at an isolated point");
                    inner.eval(&r)
                }
            }
            Recipe::DProd { x, y, .. } => {
                let kappa = x.lambda();
                let (q, rem) = alpha.div_rem(&kappa)?;
                if !rem.is_zero() {
                    x.eval(&rem)
                } else if q.is_successor() {
                    x.eval(&kappa)
                } else {
                    y.eval(&q)
                }
            }
        }
    }

    /// One preimage per world in the image, found by walking the recipe.
    fn witnesses(&self, out: &mut BTreeMap<usize, Ordinal>) -> Result<(), OrdinalError> {
        let mut local = BTreeMap::new();
        match self {
            Recipe::Single { root } => {
                local.insert(*root, Ordinal::one());
            }
            Recipe::Sum { parts, .. } => {
                let mut offset = Ordinal::zero();
                for p in parts {
                    let mut inner = BTreeMap::new();
                    p.witnesses(&mut inner)?;
                    for (w, a) in inner {
                        local.entry(w).or_insert(offset.add(&a)?);
                    }
                    offset = offset.add(&p.lambda())?;
                }
            }
            Recipe::GlIter {
                parts,
                root,
                lambda,
            } => {
                parts.witnesses(&mut local)?;
                local.insert(*root, lambda.clone());
            }
            Recipe::Lift { inner, shifted, .. } => {
                let mut sub = BTreeMap::new();
                inner.witnesses(&mut sub)?;
                for (w, g) in sub {
                    // r(ω^e) = e
                    let e = if *shifted {
                        left_sub(&Ordinal::one(), &g)
                    } else {
                        g
                    };
                    local.entry(w).or_insert(Ordinal::try_omega_pow(&e)?);
                }
            }
            Recipe::DProd { x, y, .. } => {
                x.witnesses(&mut local)?;
                let kappa = x.lambda();
                let mut sub = BTreeMap::new();
                y.witnesses(&mut sub)?;
                for (w, q) in sub {
                    if let std::collections::btree_map::Entry::Vacant(e) = local.entry(w) {
                        e.insert(kappa.mul(&q)?);
                    }
                }
            }
        }
        for (w, a) in local {
            out.entry(w).or_insert(a);
        }
        Ok(())
    }
}

/// A finite J_n-tree with its ordinal model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalModel {
    tree: JTree,
    recipe: Recipe,
    lambda: Ordinal,
}

impl OrdinalModel {
    pub fn tree(&self) -> &JTree {
        &self.tree
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    pub fn lambda(&self) -> &Ordinal {
        &self.lambda
    }

    pub fn root(&self) -> usize {
        self.recipe.root().expect("models are rooted")
    }

    /// `f(α)` for `1 ≤ α ≤ λ`.
    pub fn eval_map(&self, alpha: &Ordinal) -> Result<usize, ConstructionError> {
        if alpha.is_zero() || *alpha > self.lambda {
            return Err(ConstructionError::OutOfRange {
                alpha: alpha.clone(),
                lambda: self.lambda.clone(),
            });
        }
        Ok(self.recipe.eval(alpha)?)
    }

    /// For each world, an ordinal mapped to it.
    pub fn witnesses(&self) -> Result<BTreeMap<usize, Ordinal>, ConstructionError> {
        let mut out = BTreeMap::new();
        self.recipe.witnesses(&mut out)?;
        Ok(out)
    }

    /// `count` random points of `[1, λ]`.
    pub fn samples<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<Ordinal> {
        (0..count)
            .map(|_| sample::in_interval(rng, &self.lambda))
            .collect()
    }
}

pub fn build(t: &JTree) -> Result<OrdinalModel, ConstructionError> {
    let root = t.root().ok_or(ConstructionError::NotRooted)?;
    let recipe = build_at(t, t.full(), root, 0)?;
    Ok(OrdinalModel {
        tree: t.clone(),
        lambda: recipe.lambda(),
        recipe,
    })
}

fn build_at(t: &JTree, mask: u64, root: usize, k: usize) -> Result<Recipe, ConstructionError> {
    let below = t.successors(k, root) & mask;
    if below == 0 {
        return Ok(if k == t.n() {
            Recipe::Single { root }
        } else {
            Recipe::lift(build_at(t, mask, root, k + 1)?, root, true)?
        });
    }
    let mut parts = Vec::new();
    for (c, sub) in subtrees(t, mask, root, k)? {
        parts.push(build_at(t, sub, c, k)?);
    }
    let x = Recipe::sum(parts)?;
    let kappa = x.lambda();
    if k == t.n() {
        return Ok(Recipe::GlIter {
            lambda: kappa.mul(&Ordinal::omega())?,
            parts: Box::new(x),
            root,
        });
    }
    let sheet = (upward(t, k + 1, root) | bits::singleton(root)) & mask;
    let y = Recipe::lift(build_at(t, sheet, root, k + 1)?, root, false)?;
    Ok(Recipe::DProd {
        lambda: kappa.mul(&y.lambda())?,
        x: Box::new(x),
        y: Box::new(y),
        root,
    })
}

/// Worlds reachable from `w` by a nonempty `R_k ∪ … ∪ R_n` path.
fn upward(t: &JTree, k: usize, w: usize) -> u64 {
    t.rstar_closure(k, w).expect("level within range")
}

/// The immediate `R_k`-successors of `root` that are hereditary
/// `(k+1)`-roots within `mask`, each with the subtree it generates. These
/// subtrees partition `R_k(root)`.
fn subtrees(
    t: &JTree,
    mask: u64,
    root: usize,
    k: usize,
) -> Result<Vec<(usize, u64)>, ConstructionError> {
    let below = t.successors(k, root) & mask;
    let entered_higher = bits::members(mask).fold(0, |acc, x| {
        ((k + 1)..=t.n()).fold(acc, |acc, j| acc | t.successors(j, x))
    });
    let candidates = below & !entered_higher;
    let deeper = bits::members(candidates).fold(0, |acc, y| acc | t.successors(k, y));
    let mut out = Vec::new();
    let mut covered = 0u64;
    for c in bits::members(candidates & !deeper) {
        let sub = (upward(t, k, c) | bits::singleton(c)) & mask;
        if sub & covered != 0 {
            return Err(ConstructionError::Decomposition { k, root });
        }
        covered |= sub;
        out.push((c, sub));
    }
    if covered != below {
        return Err(ConstructionError::Decomposition { k, root });
    }
    Ok(out)
}

/// Outcome of the countermodel pipeline.
#[derive(Debug, Clone)]
pub enum Refutation {
    /// No finite countermodel within the searched sizes.
    NotRefuted {
        searched_up_to: usize,
        complete: bool,
    },
    Refuted {
        countermodel: KripkeModel,
        world: usize,
        model: OrdinalModel,
    },
}

/// Finite countermodel search followed by [`build`] on the frame found.
pub fn refute(f: &Formula, config: &SearchConfig) -> Result<Refutation, ConstructionError> {
    match decide_glp(f, config)? {
        Verdict::Valid {
            searched_up_to,
            complete,
            ..
        } => Ok(Refutation::NotRefuted {
            searched_up_to,
            complete,
        }),
        Verdict::Countermodel(c) => {
            let model = build(&c.model.frame)?;
            Ok(Refutation::Refuted {
                countermodel: c.model,
                world: c.world,
                model,
            })
        }
    }
}

/// Several models laid end to end on `[1, λ₀ + λ₁ + …]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummedModel {
    models: Vec<OrdinalModel>,
    offsets: Vec<Ordinal>,
    lambda: Ordinal,
}

pub fn recipe_sum(models: Vec<OrdinalModel>) -> Result<SummedModel, ConstructionError> {
    let mut offsets = Vec::with_capacity(models.len());
    let mut lambda = Ordinal::zero();
    for m in &models {
        offsets.push(lambda.clone());
        lambda = lambda.add(m.lambda())?;
    }
    Ok(SummedModel {
        models,
        offsets,
        lambda,
    })
}

impl SummedModel {
    pub fn lambda(&self) -> &Ordinal {
        &self.lambda
    }

    pub fn models(&self) -> &[OrdinalModel] {
        &self.models
    }

    /// The block holding `α` and the world it maps to there.
    pub fn eval_map(&self, alpha: &Ordinal) -> Result<(usize, usize), ConstructionError> {
        if alpha.is_zero() || *alpha > self.lambda {
            return Err(ConstructionError::OutOfRange {
                alpha: alpha.clone(),
                lambda: self.lambda.clone(),
            });
        }
        for (i, (m, off)) in self.models.iter().zip(&self.offsets).enumerate() {
            if *alpha <= off.add(m.lambda())? {
                return Ok((i, m.eval_map(&left_sub(off, alpha))?));
            }
        }
        unreachable!("alpha is at most the total")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::ordinal::parse as ord;

    fn o(text: &str) -> Ordinal {
        ord(text).unwrap()
    }

    fn chain0(h: usize) -> JTree {
        let edges: Vec<(usize, usize)> = (0..=h)
            .flat_map(|i| ((i + 1)..=h).map(move |j| (i, j)))
            .collect();
        JTree::from_edges(0, h + 1, &[edges]).unwrap()
    }

    #[test]
    fn single_node() {
        let m = build(&chain0(0)).unwrap();
        assert_eq!(*m.lambda(), Ordinal::one());
        assert_eq!(m.eval_map(&Ordinal::one()).unwrap(), 0);
        assert!(m.eval_map(&o("2")).is_err());
        assert!(m.eval_map(&Ordinal::zero()).is_err());
    }

    #[test]
    fn one_edge_gives_omega() {
        let m = build(&chain0(1)).unwrap();
        assert_eq!(*m.lambda(), Ordinal::omega());
        for k in 1..20u64 {
            assert_eq!(m.eval_map(&Ordinal::from(k)).unwrap(), 1);
        }
        assert_eq!(m.eval_map(&Ordinal::omega()).unwrap(), 0);
        let w = m.witnesses().unwrap();
        assert_eq!(w[&1], Ordinal::one());
        assert_eq!(w[&0], Ordinal::omega());
    }

    #[test]
    fn chains_of_height_two() {
        let m = build(&chain0(2)).unwrap();
        assert_eq!(*m.lambda(), o("w^2"));
        assert_eq!(m.eval_map(&o("w*3+5")).unwrap(), 2);
        assert_eq!(m.eval_map(&o("w*3")).unwrap(), 1);
        assert_eq!(m.eval_map(&o("w^2")).unwrap(), 0);
    }

    #[test]
    fn chain_lambdas_are_powers() {
        for h in 0..=4 {
            let m = build(&chain0(h)).unwrap();
            assert_eq!(*m.lambda(), Ordinal::omega_pow(Ordinal::from(h as u64)));
        }
    }

    #[test]
    fn upper_edge_lifts() {
        let t = JTree::from_edges(1, 2, &[vec![], vec![(0, 1)]]).unwrap();
        let m = build(&t).unwrap();
        assert_eq!(*m.lambda(), o("w^w"));
        assert_eq!(m.eval_map(&o("w^w")).unwrap(), 0);
        assert_eq!(m.eval_map(&o("w^5")).unwrap(), 1);
        assert_eq!(m.eval_map(&o("1")).unwrap(), 1);
        assert!(matches!(
            m.eval_map(&o("w^(w*2)")),
            Err(ConstructionError::OutOfRange { .. })
        ));
    }

    #[test]
    fn bottom_edge_at_level_one() {
        // the R_0 edge in a J_1-tree goes through the d-product with
        // κ = 1 and κ₀ = ω
        let t = JTree::from_edges(1, 2, &[vec![(0, 1)], vec![]]).unwrap();
        let m = build(&t).unwrap();
        assert_eq!(*m.lambda(), Ordinal::omega());
        assert!(matches!(m.recipe(), Recipe::DProd { .. }));
        assert_eq!(m.eval_map(&o("7")).unwrap(), 1);
        assert_eq!(m.eval_map(&o("w")).unwrap(), 0);
    }

    #[test]
    fn not_rooted() {
        let t = JTree::from_edges(0, 2, &[vec![]]).unwrap();
        assert!(matches!(build(&t), Err(ConstructionError::NotRooted)));
    }

    #[test]
    fn sums_dispatch_by_block() {
        let a = build(&chain0(0)).unwrap();
        let b = build(&chain0(1)).unwrap();
        let s = recipe_sum(vec![a.clone(), b]).unwrap();
        assert_eq!(*s.lambda(), Ordinal::omega());
        assert_eq!(s.eval_map(&o("1")).unwrap(), (0, 0));
        assert_eq!(s.eval_map(&o("2")).unwrap(), (1, 1));
        assert_eq!(s.eval_map(&o("w")).unwrap(), (1, 0));
        let single = recipe_sum(vec![a.clone()]).unwrap();
        assert_eq!(single.eval_map(&o("1")).unwrap(), (0, a.root()));
        let chains: Vec<OrdinalModel> = (1..=3).map(|h| build(&chain0(h)).unwrap()).collect();
        let s = recipe_sum(chains).unwrap();
        assert_eq!(*s.lambda(), o("w^3"));
        assert_eq!(s.eval_map(&o("w")).unwrap(), (0, 0));
        assert_eq!(s.eval_map(&o("w+1")).unwrap(), (1, 2));
        assert_eq!(s.eval_map(&o("w^3")).unwrap(), (2, 0));
    }

    #[test]
    fn refute_pipeline() {
        let cfg = SearchConfig::default();
        match refute(&parse("[0]p -> [1]p").unwrap(), &cfg).unwrap() {
            Refutation::NotRefuted { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
        match refute(&parse("[0]false").unwrap(), &cfg).unwrap() {
            Refutation::Refuted { model, .. } => {
                assert_eq!(model.tree().size(), 2);
                assert_eq!(*model.lambda(), Ordinal::omega());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            refute(&parse("[1]p -> [0]p").unwrap(), &cfg).unwrap(),
            Refutation::Refuted { .. }
        ));
    }
}
