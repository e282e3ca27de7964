//! Invariant suites over every module, run by `glpwb selftest` and by the
//! test suite. Each suite is exhaustive at small sizes and seeded where it
//! samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits;
use crate::construction::{build, Recipe};
use crate::corpus;
use crate::finitetop::{
    all_topologies, check_jn_morphism, d_product, glp_d_product, glp_polyspaces, is_continuous,
    is_d_map, is_l_extension, is_l_maximal_by_criterion, is_l_maximal_by_def, is_open_map,
    l_extensions, plus_by_derivatives, plus_topology, prod_plus_target, random_scattered,
    random_topology, satisfies_star, scattered_topologies, DeltaOperator, FiniteSpace, JnFailure,
    PolySpace, ENUMERATION_CAP,
};
use crate::formula::compiled::Compiled;
use crate::formula::{parse, random_formula, Formula};
use crate::kripke::{decide_glp, enumerate_rooted_jtrees, JTree, KripkeModel, SearchConfig};
use crate::ordinal::{sample, Ordinal};

/// Keep at most this many failure descriptions per suite.
const KEEP: usize = 5;

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < KEEP {
                self.examples.push(detail());
            }
        }
    }
}

type Suite = fn(&mut SuiteReport, &mut ChaCha8Rng);

pub const SUITES: &[(&str, Suite)] = &[
    ("formula.roundtrip", formula_roundtrip),
    ("formula.reduction", formula_reduction),
    ("ordinal.laws", ordinal_laws),
    ("ordinal.witnesses", ordinal_witnesses),
    ("kripke.soundness", kripke_soundness),
    ("kripke.sheets", kripke_sheets),
    ("kripke.rstar", kripke_rstar),
    ("kripke.corpus", kripke_corpus),
    ("finitetop.d-laws", top_d_laws),
    ("finitetop.cb-pres", top_cb_pres),
    ("finitetop.rank-dmap", top_rank_dmap),
    ("finitetop.lmax", top_lmax),
    ("finitetop.lift-plus", top_lift_plus),
    ("finitetop.product", top_product),
    ("finitetop.pullback", top_pullback),
    ("finitetop.neighbor", top_neighbor),
    ("finitetop.morphism", top_morphism),
    ("construction.lambda", construction_lambda),
    ("construction.checks", construction_checks),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs the named suite, or `None` if no suite has that name.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    let (name, suite) = SUITES.iter().find(|(n, _)| *n == name)?;
    let mut report = SuiteReport {
        name,
        ..SuiteReport::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    suite(&mut report, &mut rng);
    Some(report)
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|(n, _)| run_suite(n, seed).expect("registered"))
        .collect()
}

/// All maps from `0..a` to `0..b`.
fn maps(a: usize, b: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (b as u64).pow(a as u32);
    (0..if b == 0 && a > 0 { 0 } else { total }).map(move |mut code| {
        (0..a)
            .map(|_| {
                let v = (code % b as u64) as usize;
                code /= b as u64;
                v
            })
            .collect()
    })
}

/// `f` holds at every world under every valuation.
fn frame_valid(t: &JTree, f: &Formula) -> bool {
    let c = Compiled::new(f);
    let size = t.size();
    let full = t.full();
    (0..1u64 << (c.vars.len() * size)).all(|code| {
        let val: Vec<u64> = (0..c.vars.len())
            .map(|i| (code >> (i * size)) & full)
            .collect();
        c.eval(full, &val, |k, a| t.diamond(k, a))[c.root()] == full
    })
}

fn sample_formulas(rng: &mut ChaCha8Rng, count: usize, nodes: usize, top: usize) -> Vec<Formula> {
    (0..count)
        .map(|_| random_formula(rng, nodes, top, &["p", "q"]))
        .collect()
}

fn formula_roundtrip(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for f in sample_formulas(rng, 300, 16, 3) {
        let text = f.to_string();
        rep.check(parse(&text).as_ref() == Ok(&f), || {
            format!("{text} does not parse back")
        });
        let json = f.to_json();
        rep.check(Formula::from_json(&json).as_ref() == Ok(&f), || {
            format!("{text} JSON")
        });
    }
}

fn formula_reduction(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for f in sample_formulas(rng, 300, 14, 3) {
        let boxes = f.box_subformulas();
        let n = f.reduction_depth();
        let highest = boxes.iter().map(|(m, _)| *m).max().unwrap_or(0);
        let mp = f.m_plus();
        rep.check(mp.max_modality() == Some(highest), || {
            format!("M+ modality for {f}")
        });
        if !boxes.is_empty() {
            rep.check(mp.max_modality() <= f.max_modality(), || {
                format!("M+ exceeds {f}")
            });
        }
        let m = f.m_formula();
        // diamonds abbreviate ¬[k]¬, so sizes are taken after expansion
        let bound = boxes.len() * (n + 1) * (f.expand_diamonds().size() + 3);
        rep.check(boxes.is_empty() || m.size() <= bound, || {
            format!("|M| = {} above {bound} for {f}", m.size())
        });
        let mut conjuncts = Vec::new();
        flatten_and(&m, &mut conjuncts);
        let shaped = m.is_top()
            || conjuncts.iter().all(|c| match c {
                Formula::Implies(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Formula::Box(i, x), Formula::Box(k, y)) => x == y && i < k && *k <= n,
                    _ => false,
                },
                _ => false,
            });
        rep.check(shaped, || format!("M({f}) has an unexpected conjunct"));
    }
}

fn flatten_and<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        other => out.push(other),
    }
}

/// `ω^(ω^ω)`.
fn sample_bound() -> Ordinal {
    Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::omega()))
}

/// Associativity, left distributivity, division and order laws on one
/// triple; returns the first law that fails.
pub fn ordinal_triple_laws(a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Result<(), String> {
    let fail = |law: &str| Err(format!("{law} fails for a={a}, b={b}, c={c}"));
    let e = |x: Result<Ordinal, _>| x.map_err(|err| format!("{err}"));
    if e(e(a.add(b))?.add(c))? != e(a.add(&e(b.add(c))?))? {
        return fail("additive associativity");
    }
    if e(e(a.mul(b))?.mul(c))? != e(a.mul(&e(b.mul(c))?))? {
        return fail("multiplicative associativity");
    }
    if e(a.mul(&e(b.add(c))?))? != e(e(a.mul(b))?.add(&e(a.mul(c))?))? {
        return fail("left distributivity");
    }
    if !b.is_zero() {
        let (q, r) = a.div_rem(b).map_err(|err| format!("{err}"))?;
        if e(e(b.mul(&q))?.add(&r))? != *a || r >= *b {
            return fail("division");
        }
    }
    let trich = [a < b, a == b, a > b].iter().filter(|x| **x).count();
    if trich != 1 {
        return fail("trichotomy");
    }
    if a <= b && b <= c && a > c {
        return fail("transitivity");
    }
    Ok(())
}

fn ordinal_laws(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let bound = sample_bound();
    for _ in 0..2000 {
        let (a, b, c) = (
            sample::below(rng, &bound),
            sample::below(rng, &bound),
            sample::below(rng, &bound),
        );
        let res = ordinal_triple_laws(&a, &b, &c);
        rep.check(res.is_ok(), || res.unwrap_err());
    }
}

fn ordinal_witnesses(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let w = Ordinal::omega();
    let one = Ordinal::one();
    let two = Ordinal::from(2);
    rep.check(one.add(&w) == Ok(w.clone()), || "1+ω ≠ ω".into());
    rep.check(w.add(&one) != Ok(w.clone()), || "ω+1 = ω".into());
    rep.check(two.mul(&w) == Ok(w.clone()), || "2·ω ≠ ω".into());
    rep.check(w.mul(&two) != Ok(w.clone()), || "ω·2 = ω".into());
    let bound = sample_bound();
    for _ in 0..1000 {
        let b = sample::below(rng, &bound);
        let p = Ordinal::omega_pow(b.clone());
        rep.check(p.r() == b, || format!("r(ω^{b}) ≠ {b}"));
        rep.check(b.r() <= b, || format!("r({b}) > {b}"));
    }
}

fn j_instances() -> Vec<Formula> {
    corpus::axiom_instances()
        .into_iter()
        .filter(|i| i.schema != "monotone")
        .map(|i| i.formula)
        .collect()
}

fn kripke_soundness(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let instances = j_instances();
    for n in 0..=2 {
        let usable: Vec<&Formula> = instances
            .iter()
            .filter(|f| f.max_modality().is_none_or(|m| m <= n))
            .collect();
        for size in 1..=4 {
            for t in enumerate_rooted_jtrees(n, size).iter() {
                for _ in 0..12 {
                    let f = usable[rng.gen_range(0..usable.len())];
                    let val = f
                        .variables()
                        .into_iter()
                        .map(|v| (v, rng.gen::<u64>() & t.full()))
                        .collect();
                    let model = KripkeModel::new(t.clone(), val);
                    rep.check(model.eval(f).ok() == Some(t.full()), || {
                        format!("{f} fails on {:?}", t.to_raw())
                    });
                }
            }
        }
    }
}

fn kripke_sheets(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    for size in 1..=4 {
        for t in enumerate_rooted_jtrees(1, size).iter() {
            for k in 0..t.n() {
                for sheet in t.sheets(k + 1).expect("in range") {
                    for &x in &sheet {
                        for &y in &sheet {
                            for m in 0..=k {
                                rep.check(!t.related(m, x, y), || {
                                    format!("R_{m} inside a {}-sheet of {:?}", k + 1, t.to_raw())
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}

fn kripke_rstar(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    for n in 0..=2 {
        for size in 1..=4 {
            for t in enumerate_rooted_jtrees(n, size).iter() {
                for k in 0..=n {
                    for w in 0..size {
                        rep.check(t.rstar(k, w) == t.rstar_closure(k, w), || {
                            format!("R*_{k}({w}) on {:?}", t.to_raw())
                        });
                    }
                }
            }
        }
    }
}

fn kripke_corpus(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    let cfg = SearchConfig::default();
    for inst in corpus::axiom_instances().iter().step_by(7) {
        let v = decide_glp(&inst.formula, &cfg);
        rep.check(matches!(v, Ok(ref v) if v.is_valid()), || {
            format!("{} instance {} not valid", inst.schema, inst.formula)
        });
    }
    for f in corpus::non_theorems() {
        let ok = match decide_glp(&f, &cfg) {
            Ok(v) => v.countermodel().is_some_and(|c| {
                c.model
                    .eval(&c.formula)
                    .is_ok_and(|set| !bits::contains(set, c.world))
            }),
            Err(_) => false,
        };
        rep.check(ok, || format!("{f} has no verified countermodel"));
    }
}

fn spaces_up_to(size: usize) -> Vec<FiniteSpace> {
    (0..=size)
        .flat_map(|s| {
            all_topologies(s)
                .expect("under cap")
                .iter()
                .cloned()
                .collect::<Vec<_>>()
        })
        .collect()
}

fn scattered_up_to(size: usize) -> Vec<FiniteSpace> {
    (1..=size)
        .flat_map(|s| scattered_topologies(s).expect("under cap"))
        .collect()
}

fn top_d_laws(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let mut spaces = spaces_up_to(4);
    spaces.extend((0..40).map(|_| random_topology(rng, 5)));
    spaces.extend((0..40).map(|_| random_scattered(rng, 5)));
    for s in &spaces {
        let scattered = s.is_scattered();
        rep.check(s.d(0) == 0, || "d∅ ≠ ∅".into());
        for a in bits::all_subsets(s.size()) {
            let da = s.d(a);
            // ddA ⊆ A ∪ dA in every space; ddA ⊆ dA needs T_D, which
            // scattered spaces are
            rep.check(bits::is_subset(s.d(da), a | da), || {
                format!("ddA ⊄ A∪dA, A={a:b}")
            });
            if scattered {
                rep.check(bits::is_subset(s.d(da), da), || {
                    format!("ddA ⊄ dA, A={a:b}")
                });
                rep.check(s.d(a & !da) == da, || format!("d(A∖dA) ≠ dA, A={a:b}"));
            }
            for b in bits::all_subsets(s.size()) {
                rep.check(s.d(a | b) == da | s.d(b), || {
                    format!("d not additive at {a:b},{b:b}")
                });
            }
        }
    }
}

fn d_maps_between(x: &FiniteSpace, y: &FiniteSpace) -> Vec<Vec<usize>> {
    maps(x.size(), y.size())
        .filter(|f| is_d_map(x, y, f))
        .collect()
}

fn preimage(f: &[usize], b: u64) -> u64 {
    (0..f.len())
        .filter(|&i| bits::contains(b, f[i]))
        .fold(0, |acc, i| acc | bits::singleton(i))
}

fn top_cb_pres(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    let spaces = scattered_up_to(3);
    for x in &spaces {
        for y in &spaces {
            for f in d_maps_between(x, y) {
                let depth = x.size().max(y.size()) + 1;
                for alpha in 0..=depth {
                    let dx = x.derivative(alpha).expect("scattered");
                    let dy = y.derivative(alpha).expect("scattered");
                    rep.check(dx == preimage(&f, dy), || {
                        format!("d^{alpha} not preserved by {f:?}")
                    });
                }
            }
        }
    }
}

fn top_rank_dmap(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    for x in scattered_up_to(3) {
        let ranks = x.ranks().expect("scattered");
        // the rank map onto `left(ρ(X))` is a d-map, and the only one into any left(k)
        let rank = x.rank().expect("scattered");
        rep.check(is_d_map(&x, &FiniteSpace::left(rank), &ranks), || {
            format!("rank map is not a d-map on {:?}", x.to_raw())
        });
        for k in 1..=4 {
            let target = FiniteSpace::left(k);
            for f in d_maps_between(&x, &target) {
                rep.check(f == ranks, || {
                    format!("d-map {f:?} into left({k}) is not ρ")
                });
            }
        }
    }
}

fn top_lmax(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    for s in scattered_up_to(4) {
        let by_def = is_l_maximal_by_def(&s).expect("under cap");
        let by_crit = is_l_maximal_by_criterion(&s).expect("scattered");
        rep.check(by_def == by_crit, || {
            format!("ℓ-maximality disagrees on {:?}", s.to_raw())
        });
        if !by_def {
            continue;
        }
        let plus = plus_topology(&s);
        rep.check(plus_by_derivatives(&s).as_ref() == Ok(&plus), || {
            format!("τ⁺ ≠ τ + derivatives on {:?}", s.to_raw())
        });
        let expected: Vec<Ordinal> = s
            .ranks()
            .expect("scattered")
            .into_iter()
            .map(|r| Ordinal::from(r as u64).r())
            .collect();
        let got: Option<Vec<Ordinal>> = plus
            .ranks()
            .ok()
            .map(|v| v.into_iter().map(|r| Ordinal::from(r as u64)).collect());
        rep.check(got.as_ref() == Some(&expected), || {
            format!("ρ⁺ ≠ r∘ρ on {:?}", s.to_raw())
        });
    }
}

fn top_lift_plus(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    let spaces = scattered_up_to(3);
    for x in spaces
        .iter()
        .filter(|x| is_l_maximal_by_def(x).unwrap_or(false))
    {
        let xp = plus_topology(x);
        for y in &spaces {
            let yp = plus_topology(y);
            for f in d_maps_between(x, y) {
                rep.check(is_d_map(&xp, &yp, &f), || {
                    format!("{f:?} is not a d-map after plus")
                });
            }
        }
    }
}

fn l_maximal(s: &FiniteSpace) -> bool {
    if s.size() <= ENUMERATION_CAP {
        is_l_maximal_by_def(s).expect("under cap")
    } else {
        is_l_maximal_by_criterion(s).expect("scattered")
    }
}

/// Checks every clause of the d-product suite for one pair.
pub fn check_d_product(x: &FiniteSpace, y: &FiniteSpace) -> Result<(), String> {
    let p = d_product(x, y).map_err(|e| e.to_string())?;
    let iso = y.iso();
    let dy = y.d(y.full());
    let z0 = p.z0();
    if p.space.size() != x.size() * iso.count_ones() as usize + dy.count_ones() as usize {
        return Err("carrier size".into());
    }
    let (Ok(rz), Ok(rx), Ok(rank_x), Ok(rdy)) =
        (p.space.ranks(), x.ranks(), x.rank(), y.subspace(dy).ranks())
    else {
        return Err("not scattered".into());
    };
    for z in 0..p.space.size() {
        let want = match p.pi0[z] {
            Some(xi) => rx[xi],
            None => rank_x + rdy[z - bits::members(z0).count()],
        };
        if rz[z] != want {
            return Err(format!("rank of point {z} is {} not {want}", rz[z]));
        }
    }
    if !is_continuous(&p.space, y, &p.pi1) || !is_open_map(&p.space, y, &p.pi1) {
        return Err("π₁ not continuous and open".into());
    }
    let pi0: Vec<usize> = p.pi0.iter().flatten().copied().collect();
    if !is_d_map(&p.space.subspace(z0), x, &pi0) {
        return Err("π₀ not a d-map on Z₀".into());
    }
    for xl in l_extensions(x).map_err(|e| e.to_string())? {
        for yl in l_extensions(y).map_err(|e| e.to_string())? {
            let q = d_product(&xl, &yl).map_err(|e| e.to_string())?;
            if !is_l_extension(&p.space, &q.space) {
                return Err("product of ℓ-extensions is not an ℓ-extension".into());
            }
        }
    }
    if l_maximal(x) && l_maximal(y) && rank_x > 0 {
        if !l_maximal(&p.space) {
            return Err("product of ℓ-maximal spaces is not ℓ-maximal".into());
        }
        let target = prod_plus_target(x, y).map_err(|e| e.to_string())?;
        if plus_topology(&p.space) != target {
            return Err("(X⊗Y)⁺ differs from (X⁺×iso Y) ⊔ (dY)⁺".into());
        }
    }
    Ok(())
}

fn top_product(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    let spaces = scattered_up_to(3);
    for x in &spaces {
        for y in &spaces {
            let res = check_d_product(x, y);
            rep.check(res.is_ok(), || {
                format!("{:?} ⊗ {:?}: {}", x.to_raw(), y.to_raw(), res.unwrap_err())
            });
        }
    }
    let small: Vec<PolySpace> = (1..=2)
        .flat_map(|s| glp_polyspaces(s, 1).expect("under cap"))
        .collect();
    for p in &small {
        for q in &small {
            let ok = glp_d_product(p, q).is_ok_and(|r| r.is_glp_space());
            rep.check(ok, || "GLP d-product is not a GLP-space".into());
        }
    }
}

fn top_pullback(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    let spaces = scattered_up_to(3);
    for x in &spaces {
        let xs: Vec<FiniteSpace> = l_extensions(x)
            .expect("under cap")
            .into_iter()
            .filter(l_maximal)
            .collect();
        for y in &spaces {
            let ys: Vec<FiniteSpace> = l_extensions(y)
                .expect("under cap")
                .into_iter()
                .filter(l_maximal)
                .collect();
            for f in d_maps_between(x, y) {
                for yl in &ys {
                    rep.check(xs.iter().any(|xl| is_d_map(xl, yl, &f)), || {
                        format!("no ℓ-maximal lift of {f:?}")
                    });
                }
            }
        }
    }
}

/// Operator-semantics validity of `f` under `ops` (one per modality).
fn valid_under(ops: &[DeltaOperator], f: &Formula) -> bool {
    let size = ops[0].size();
    let full = bits::full(size);
    let c = Compiled::new(f);
    (0..1u64 << (c.vars.len() * size)).all(|code| {
        let val: Vec<u64> = (0..c.vars.len())
            .map(|i| (code >> (i * size)) & full)
            .collect();
        c.eval(full, &val, |k, a| ops[k].apply(a))[c.root()] == full
    })
}

fn top_neighbor(rep: &mut SuiteReport, _: &mut ChaCha8Rng) {
    // GLP-spaces validate the axioms
    let instances: Vec<Formula> = corpus::axiom_instances()
        .into_iter()
        .step_by(9)
        .map(|i| i.formula)
        .collect();
    for size in 1..=3 {
        for p in glp_polyspaces(size, 2).expect("under cap") {
            for f in &instances {
                rep.check(p.refuting_valuation(f).is_ok_and(|v| v.is_none()), || {
                    format!("{f} fails on a GLP-space")
                });
            }
        }
    }
    // operator pairs validating monotonicity and negative introspection are
    // exactly the GLP-spaces
    let mono = parse("[0]p -> [1]p").expect("fixed");
    let neg = parse("<0>p -> [1]<0>p").expect("fixed");
    for size in 1..=3 {
        let magari: Vec<DeltaOperator> = (0..1u64 << (size * size))
            .filter_map(|code| {
                let singles: Vec<u64> = (0..size)
                    .map(|x| (code >> (x * size)) & bits::full(size))
                    .collect();
                DeltaOperator::additive(&singles).ok()
            })
            .filter(DeltaOperator::is_magari)
            .collect();
        rep.check(
            magari.len() == scattered_topologies(size).expect("cap").len(),
            || format!("{} Magari operators on {size} points", magari.len()),
        );
        for d0 in &magari {
            for d1 in &magari {
                let ops = [d0.clone(), d1.clone()];
                let axioms = valid_under(&ops, &mono) && valid_under(&ops, &neg);
                let (Ok(t0), Ok(t1)) = (d0.to_space(), d1.to_space()) else {
                    rep.check(false, || "Magari operator without a space".into());
                    continue;
                };
                let faithful = DeltaOperator::of_space(&t0).as_ref() == Ok(d0)
                    && DeltaOperator::of_space(&t1).as_ref() == Ok(d1);
                rep.check(faithful, || "δ ≠ d of its space".into());
                let glp = PolySpace::new(vec![t0, t1]).is_ok_and(|p| p.is_glp_space());
                rep.check(axioms == glp, || {
                    format!("axioms {axioms} but GLP-space {glp} on {size} points")
                });
            }
        }
    }
}

fn top_morphism(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let mut formulas: Vec<Formula> = corpus::bodies();
    formulas.extend(corpus::non_theorems());
    formulas.extend(sample_formulas(rng, 30, 8, 2));
    for n in 0..=2 {
        let usable: Vec<&Formula> = formulas
            .iter()
            .filter(|f| f.max_modality().is_none_or(|m| m <= n))
            .collect();
        for psize in 1..=3 {
            let spaces = glp_polyspaces(psize, n).expect("under cap");
            for tsize in 1..=psize {
                for t in enumerate_rooted_jtrees(n, tsize).iter() {
                    for p in &spaces {
                        for f in maps(psize, tsize) {
                            if bits::from_slice(&f) != t.full() {
                                continue;
                            }
                            let res = check_jn_morphism(p, t, &f);
                            let clauses12 = matches!(
                                res,
                                Ok(()) | Err(JnFailure::J3 { .. }) | Err(JnFailure::J4 { .. })
                            );
                            if clauses12 {
                                rep.check(res.is_ok() == satisfies_star(p, t, &f), || {
                                    format!("(j3)&(j4) vs (*) disagree for {f:?}")
                                });
                            }
                            if res.is_err() {
                                continue;
                            }
                            for phi in &usable {
                                let on_space = p.refuting_valuation(phi).is_ok_and(|v| v.is_none());
                                let on_tree = frame_valid(t, &phi.glp_to_j());
                                rep.check(on_space == on_tree, || {
                                    format!("{phi}: space {on_space}, tree {on_tree}, map {f:?}")
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}

fn chain0(h: usize) -> JTree {
    let edges: Vec<(usize, usize)> = (0..=h)
        .flat_map(|i| ((i + 1)..=h).map(move |j| (i, j)))
        .collect();
    JTree::from_edges(0, h + 1, &[edges]).expect("chains are trees")
}

fn construction_lambda(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for h in 0..=4 {
        let want = Ordinal::omega_pow(Ordinal::from(h as u64));
        let got = build(&chain0(h)).map(|m| m.lambda().clone());
        rep.check(got.as_ref().ok() == Some(&want), || {
            format!("chain of height {h}: {got:?}")
        });
    }
    // periodicity of the GL iteration: f(κ·q + β) = f(β)
    for size in 2..=5 {
        for t in enumerate_rooted_jtrees(0, size).iter() {
            let Ok(m) = build(t) else {
                rep.check(false, || format!("build failed on {:?}", t.to_raw()));
                continue;
            };
            let Some(kappa) = m.recipe().kappa() else {
                continue;
            };
            for _ in 0..10 {
                let beta = sample::in_interval(rng, &kappa);
                let q = Ordinal::from(rng.gen_range(1..6u64));
                let alpha = kappa.mul(&q).and_then(|x| x.add(&beta));
                let same = alpha
                    .ok()
                    .and_then(|a| m.eval_map(&a).ok())
                    .zip(m.eval_map(&beta).ok())
                    .is_some_and(|(u, v)| u == v);
                rep.check(same, || format!("periodicity at κ·{q}+{beta}"));
            }
        }
    }
}

fn construction_checks(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for (n, max) in [(0, 5), (1, 4), (2, 3)] {
        for size in 1..=max {
            for t in enumerate_rooted_jtrees(n, size).iter() {
                let Ok(m) = build(t) else {
                    rep.check(false, || format!("build failed on {:?}", t.to_raw()));
                    continue;
                };
                let samples = m.samples(rng, 40);
                for r in [
                    m.check_rank_height(&samples),
                    m.check_suitability(&samples),
                    m.check_local_structure(&samples, rng),
                ] {
                    let ok = r.as_ref().is_ok_and(|r| r.is_ok());
                    rep.check(ok, || format!("{:?} on {:?}", r, t.to_raw()));
                }
                // the limit blocks of a d-product land in the root's 1-sheet
                if let Recipe::DProd { x, y, root, .. } = m.recipe() {
                    let kappa = x.lambda();
                    let sheet =
                        bits::singleton(*root) | t.rstar_closure(1, *root).expect("n ≥ 1 here");
                    let Recipe::Lift { inner, .. } = y.as_ref() else {
                        rep.check(false, || "d-product without a lift".into());
                        continue;
                    };
                    for _ in 0..10 {
                        let g = sample::in_interval(rng, &inner.lambda());
                        let q = Ordinal::omega_pow(g);
                        let w = kappa.mul(&q).ok().and_then(|z| m.eval_map(&z).ok());
                        rep.check(w.is_some_and(|w| bits::contains(sheet, w)), || {
                            format!("κ·{q} leaves the 1-sheet")
                        });
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for r in run_all(2024) {
            assert!(r.passed(), "{}: {:?}", r.name, r.examples);
            assert!(r.checked > 0, "{} checked nothing", r.name);
        }
    }

    #[test]
    fn maps_count() {
        assert_eq!(maps(3, 2).count(), 8);
        assert_eq!(maps(0, 3).count(), 1);
        assert_eq!(maps(2, 0).count(), 0);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 0).is_none());
    }
}
