//! Computable necessary conditions on a built model.

use rand::Rng;
use serde::Serialize;

use super::{ConstructionError, OrdinalModel};
use crate::bits;
use crate::ordinal::{sample, Ordinal};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub alpha: Ordinal,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, alpha: &Ordinal, detail: String) {
        self.failures.push(CheckFailure {
            alpha: alpha.clone(),
            detail,
        });
    }
}

/// How far below a sample the local check looks for a good interval.
const LOCAL_OFFSETS: [u64; 4] = [1, 2, 4, 8];
const LOCAL_PROBES: u64 = 4;

impl OrdinalModel {
    /// `r^{n+1}(α)` equals the `R_n`-height of `f(α)` at every sample.
    pub fn check_rank_height(&self, samples: &[Ordinal]) -> Result<CheckReport, ConstructionError> {
        let n = self.n();
        let mut report = CheckReport::default();
        for alpha in samples {
            let w = self.eval_map(alpha)?;
            let rank = alpha.r_iter(n + 1);
            let height = self.tree().height(n, w);
            report.checked += 1;
            if rank != Ordinal::from(height as u64) {
                report.fail(
                    alpha,
                    format!(
                        "r^{}(α) = {rank} but world {} has height {height}",
                        n + 1,
                        self.tree().name(w)
                    ),
                );
            }
        }
        Ok(report)
    }

    /// `f(λ)` is the root, no sample below `λ` maps to the root, and every
    /// world has a structural witness that maps to it.
    pub fn check_suitability(&self, samples: &[Ordinal]) -> Result<CheckReport, ConstructionError> {
        let root = self.root();
        let mut report = CheckReport::default();
        report.checked += 1;
        if self.eval_map(self.lambda())? != root {
            report.fail(self.lambda(), "f(λ) is not the root".into());
        }
        for alpha in samples.iter().filter(|a| *a < self.lambda()) {
            report.checked += 1;
            if self.eval_map(alpha)? == root {
                report.fail(alpha, "maps to the root below λ".into());
            }
        }
        let witnesses = self.witnesses()?;
        for w in 0..self.tree().size() {
            report.checked += 1;
            match witnesses.get(&w) {
                None => report.fail(
                    self.lambda(),
                    format!("no witness for world {}", self.tree().name(w)),
                ),
                Some(alpha) => {
                    let got = self.eval_map(alpha)?;
                    if got != w {
                        report.fail(
                            alpha,
                            format!(
                                "witness for {} maps to {}",
                                self.tree().name(w),
                                self.tree().name(got)
                            ),
                        );
                    }
                }
            }
        }
        Ok(report)
    }

    /// At samples of successor rank `s+1`, with `v` the hereditary 1-root
    /// of `f(α)`'s 1-sheet: some interval `(γ + ω^s·m, α)` maps into
    /// `R*_0(v)`. The interval is probed at random points.
    pub fn check_local_structure<R: Rng + ?Sized>(
        &self,
        samples: &[Ordinal],
        rng: &mut R,
    ) -> Result<CheckReport, ConstructionError> {
        let t = self.tree();
        let roots1 = t.hereditary_root_mask(1);
        let mut report = CheckReport::default();
        for alpha in samples {
            let rank = alpha.r();
            if !rank.is_successor() {
                continue;
            }
            let w = self.eval_map(alpha)?;
            let v = bits::members(roots1)
                .find(|&v| v == w || bits::contains(upward1(t, v), w))
                .expect("every world lies in some 1-sheet");
            let target = t.rstar(0, v).expect("level 0 exists");
            let s = rank.pred()?;
            let gamma = drop_last_unit(alpha);
            let step = Ordinal::omega_pow(s.clone());
            report.checked += 1;
            let mut found = false;
            'offsets: for m0 in LOCAL_OFFSETS {
                for m in (m0 + 1)..=(m0 + LOCAL_PROBES) {
                    let eps = sample::below_power(rng, &s);
                    let base = gamma.add(&step.mul(&Ordinal::from(m))?)?;
                    for probe in [base.clone(), base.add(&eps)?, base.succ()] {
                        if probe >= *alpha {
                            continue;
                        }
                        if !bits::contains(target, self.eval_map(&probe)?) {
                            continue 'offsets;
                        }
                    }
                }
                found = true;
                break;
            }
            if !found {
                report.fail(
                    alpha,
                    format!("no probed interval below α maps into R*_0({})", t.name(v)),
                );
            }
        }
        Ok(report)
    }
}

fn upward1(t: &crate::kripke::JTree, v: usize) -> u64 {
    if t.n() == 0 {
        0
    } else {
        t.rstar_closure(1, v).expect("level 1 exists")
    }
}

/// `γ` with `α = γ + ω^{r(α)}`.
fn drop_last_unit(alpha: &Ordinal) -> Ordinal {
    let mut terms: Vec<(Ordinal, u64)> = alpha
        .terms()
        .iter()
        .map(|t| (t.exponent.clone(), t.coefficient))
        .collect();
    if let Some(last) = terms.last_mut() {
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
    }
    Ordinal::from_terms(terms).expect("still in normal form")
}

#[cfg(test)]
mod tests {
    use super::super::build;
    use super::*;
    use crate::kripke::{enumerate_rooted_jtrees, JTree};
    use crate::ordinal::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hand_examples() {
        let t = JTree::from_edges(1, 2, &[vec![], vec![(0, 1)]]).unwrap();
        let m = build(&t).unwrap();
        let top = parse("w^w").unwrap();
        assert!(m
            .check_rank_height(std::slice::from_ref(&top))
            .unwrap()
            .is_ok());
        assert_eq!(top.r_iter(2), Ordinal::one());
        let single = build(&JTree::from_edges(2, 1, &[vec![], vec![], vec![]]).unwrap()).unwrap();
        assert!(single.check_rank_height(&[Ordinal::one()]).unwrap().is_ok());
        assert!(single.check_suitability(&[]).unwrap().is_ok());
    }

    #[test]
    fn local_structure_on_a_chain() {
        let t = JTree::from_edges(0, 2, &[vec![(0, 1)]]).unwrap();
        let m = build(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = m
            .check_local_structure(&[parse("w").unwrap(), parse("5").unwrap()], &mut rng)
            .unwrap();
        assert!(r.is_ok());
        assert_eq!(r.checked, 1);
    }

    #[test]
    fn small_trees_pass_all_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, max) in [(0, 4), (1, 4), (2, 3)] {
            for size in 1..=max {
                for t in enumerate_rooted_jtrees(n, size).iter() {
                    let m = build(t).unwrap();
                    let samples = m.samples(&mut rng, 60);
                    let rh = m.check_rank_height(&samples).unwrap();
                    assert!(rh.is_ok(), "{:?} {:?}", t.to_raw(), rh.failures);
                    let su = m.check_suitability(&samples).unwrap();
                    assert!(su.is_ok(), "{:?} {:?}", t.to_raw(), su.failures);
                    let lo = m.check_local_structure(&samples, &mut rng).unwrap();
                    assert!(lo.is_ok(), "{:?} {:?}", t.to_raw(), lo.failures);
                }
            }
        }
    }
}
