//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! print.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use glpwb::bits;
use glpwb::construction::build;
use glpwb::corpus;
use glpwb::finitetop::{
    all_topologies, glp_polyspaces, is_l_maximal_by_criterion, is_l_maximal_by_def, plus_topology,
    scattered_topologies, topologies_by_closure, DeltaOperator, FiniteSpace, PolySpace,
};
use glpwb::formula::{random_formula, Formula};
use glpwb::kripke::{
    decide_glp, decide_j, enumerate_rooted_jtrees, JTree, KripkeModel, RawFrame, SearchConfig,
    Verdict,
};
use glpwb::ordinal::{sample, Ordinal};
use glpwb::selftest::{check_d_product, ordinal_triple_laws};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20240601;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn decision_corpus() -> Outcome {
    let cfg = SearchConfig::default();
    let instances = corpus::axiom_instances();
    for inst in &instances {
        let v = decide_glp(&inst.formula, &cfg).map_err(|e| e.to_string())?;
        ensure(v.is_valid(), || {
            format!("{} instance {} refuted", inst.schema, inst.formula)
        })?;
    }
    let non = corpus::non_theorems();
    for f in &non {
        let v = decide_glp(f, &cfg).map_err(|e| e.to_string())?;
        let c = v
            .countermodel()
            .ok_or_else(|| format!("{f} declared valid"))?;
        let truth = c.model.eval(&c.formula).map_err(|e| e.to_string())?;
        ensure(!bits::contains(truth, c.world), || {
            format!("{f}: countermodel does not refute")
        })?;
    }
    Ok(format!(
        "{} instances valid, {} non-theorems refuted",
        instances.len(),
        non.len()
    ))
}

fn reduction_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = SearchConfig::default();
    let spaces: Vec<PolySpace> = (1..=3)
        .flat_map(|s| glp_polyspaces(s, 2).expect("under cap"))
        .collect();
    let (mut refuted, mut space_refuted) = (0, 0);
    for _ in 0..200 {
        let f = random_formula(&mut rng, 12, 2, &["p", "q"]);
        let glp = decide_glp(&f, &cfg).map_err(|e| e.to_string())?;
        let j = decide_j(&f.glp_to_j(), &cfg).map_err(|e| e.to_string())?;
        ensure(glp.is_valid() == j.is_valid(), || {
            format!("{f}: GLP and J verdicts differ")
        })?;
        if let Verdict::Countermodel(c) = &glp {
            refuted += 1;
            let truth = c.model.eval(&c.formula).map_err(|e| e.to_string())?;
            ensure(!bits::contains(truth, c.world), || {
                format!("{f}: unverified countermodel")
            })?;
        }
        for p in &spaces {
            if p.refuting_valuation(&f)
                .map_err(|e| e.to_string())?
                .is_some()
            {
                space_refuted += 1;
                ensure(!glp.is_valid(), || {
                    format!("{f}: refuted on a GLP-space, valid in Kripke search")
                })?;
                break;
            }
        }
    }
    Ok(format!(
        "200 formulas, {refuted} Kripke-refuted, {space_refuted} refuted on {} GLP-spaces",
        spaces.len()
    ))
}

fn magari_round_trip() -> Outcome {
    let mut total = 0;
    for size in 0..=4 {
        let all = all_topologies(size).map_err(|e| e.to_string())?;
        let by_closure = topologies_by_closure(size).map_err(|e| e.to_string())?;
        ensure(all.len() == by_closure.len(), || {
            format!("{size} points: enumerators disagree")
        })?;
        total += all.len();
        for s in all.iter() {
            let d = DeltaOperator::of_space(s).map_err(|e| e.to_string())?;
            ensure(d.is_magari() == s.is_scattered(), || {
                format!("{:?}: Magari vs scattered", s.to_raw())
            })?;
            if s.is_scattered() {
                ensure(d.to_space().as_ref() == Ok(s), || {
                    format!("{:?}: opens not recovered", s.to_raw())
                })?;
            }
        }
        let full = bits::full(size);
        let mut magari = 0;
        for code in 0..1u64 << (size * size) {
            let singles: Vec<u64> = (0..size).map(|x| (code >> (x * size)) & full).collect();
            let d = DeltaOperator::additive(&singles).map_err(|e| e.to_string())?;
            if !d.is_magari() {
                continue;
            }
            magari += 1;
            let s = d.to_space().map_err(|e| e.to_string())?;
            ensure(DeltaOperator::of_space(&s).as_ref() == Ok(&d), || {
                "table not recovered".into()
            })?;
        }
        let scattered = scattered_topologies(size).map_err(|e| e.to_string())?.len();
        ensure(magari == scattered, || {
            format!("{size} points: {magari} Magari operators, {scattered} scattered spaces")
        })?;
    }
    Ok(format!("{total} topologies on ≤ 4 points"))
}

fn lmax_criterion() -> Outcome {
    let mut count = 0;
    for size in 1..=4 {
        for s in scattered_topologies(size).map_err(|e| e.to_string())? {
            count += 1;
            let a = is_l_maximal_by_def(&s).map_err(|e| e.to_string())?;
            let b = is_l_maximal_by_criterion(&s).map_err(|e| e.to_string())?;
            ensure(a == b, || {
                format!("{:?}: definition {a}, criterion {b}", s.to_raw())
            })?;
        }
    }
    Ok(format!("{count} scattered spaces agree"))
}

fn d_product_suite() -> Outcome {
    let spaces: Vec<FiniteSpace> = (1..=3)
        .flat_map(|s| scattered_topologies(s).expect("under cap"))
        .collect();
    for x in &spaces {
        for y in &spaces {
            check_d_product(x, y)
                .map_err(|e| format!("{:?} ⊗ {:?}: {e}", x.to_raw(), y.to_raw()))?;
        }
    }
    Ok(format!("{} pairs", spaces.len() * spaces.len()))
}

fn plus_laws() -> Outcome {
    for k in 1..=6 {
        ensure(
            plus_topology(&FiniteSpace::left(k)) == FiniteSpace::discrete(k),
            || format!("left({k})⁺ is not discrete"),
        )?;
    }
    let mut count = 0;
    for size in 1..=4 {
        for s in scattered_topologies(size).map_err(|e| e.to_string())? {
            if !is_l_maximal_by_def(&s).map_err(|e| e.to_string())? {
                continue;
            }
            count += 1;
            let plus = plus_topology(&s).ranks().map_err(|e| e.to_string())?;
            let ranks = s.ranks().map_err(|e| e.to_string())?;
            for (x, (&rp, &r)) in plus.iter().zip(&ranks).enumerate() {
                let want = Ordinal::from(r as u64).r();
                ensure(Ordinal::from(rp as u64) == want, || {
                    format!(
                        "{:?}: point {x} has plus rank {rp}, r(ρ) = {want}",
                        s.to_raw()
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "left(1..6)⁺ discrete; rank law on {count} ℓ-maximal spaces"
    ))
}

fn chain(h: usize) -> JTree {
    let edges: Vec<(usize, usize)> = (0..=h)
        .flat_map(|i| ((i + 1)..=h).map(move |j| (i, j)))
        .collect();
    JTree::from_edges(0, h + 1, &[edges]).expect("chain")
}

fn construction_skeleton() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut models = 0;
    for (n, max) in [(1, 5), (2, 4)] {
        for size in 1..=max {
            for t in enumerate_rooted_jtrees(n, size).iter() {
                let m = build(t).map_err(|e| format!("{:?}: {e}", t.to_raw()))?;
                models += 1;
                let samples = m.samples(&mut rng, 1000);
                let rh = m.check_rank_height(&samples).map_err(|e| e.to_string())?;
                let su = m.check_suitability(&samples).map_err(|e| e.to_string())?;
                ensure(rh.is_ok() && su.is_ok(), || {
                    format!(
                        "{:?}: {:?} {:?}",
                        t.to_raw(),
                        rh.failures.first(),
                        su.failures.first()
                    )
                })?;
            }
        }
    }
    for h in 0..=4 {
        let lambda = build(&chain(h))
            .map_err(|e| e.to_string())?
            .lambda()
            .clone();
        let want = Ordinal::omega_pow(Ordinal::from(h as u64));
        ensure(lambda == want, || {
            format!("chain of height {h}: λ = {lambda}, want {want}")
        })?;
    }
    Ok(format!(
        "{models} models, 1000 samples each; chains give ω^h"
    ))
}

fn run_cli(args: &[&str]) -> Result<(Option<i32>, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_glpwb"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn end_to_end() -> Outcome {
    let (code, out) = run_cli(&["--json", "refute", "[1]p -> [0]p"])?;
    ensure(code == Some(0), || format!("refute exited with {code:?}"))?;
    let v: Value = serde_json::from_str(out.trim()).map_err(|e| e.to_string())?;
    ensure(v["result"] == "refuted" && v["verified"] == true, || {
        format!("unexpected output {out}")
    })?;
    for check in ["rank_height", "suitability", "local_structure"] {
        let failures = v["checks"][check]["failures"].as_array().map(Vec::len);
        ensure(failures == Some(0), || format!("{check} failed: {out}"))?;
    }
    // re-check the countermodel independently of the binary
    let cm = &v["countermodel"];
    let raw: RawFrame = serde_json::from_value(cm["frame"].clone()).map_err(|e| e.to_string())?;
    let t = JTree::from_raw(&raw).map_err(|e| e.to_string())?;
    let valuation: BTreeMap<String, u64> = cm["valuation"]
        .as_object()
        .map(|o| {
            o.iter()
                .map(|(k, ws)| {
                    let set = ws.as_array().into_iter().flatten().fold(0, |acc, w| {
                        acc | w
                            .as_str()
                            .and_then(|w| t.world(w))
                            .map_or(0, bits::singleton)
                    });
                    (k.clone(), set)
                })
                .collect()
        })
        .unwrap_or_default();
    let world = cm["world"]
        .as_str()
        .and_then(|w| t.world(w))
        .ok_or("no world")?;
    let f: Formula = glpwb::formula::parse("[1]p -> [0]p").map_err(|e| e.to_string())?;
    let truth = KripkeModel::new(t, valuation)
        .eval(&f)
        .map_err(|e| e.to_string())?;
    ensure(!bits::contains(truth, world), || {
        "countermodel does not refute".into()
    })?;
    let lambda = v["lambda"].as_str().unwrap_or("?").to_string();

    let (code, out) = run_cli(&["--json", "refute", "[0]p -> [1]p"])?;
    ensure(code == Some(0), || format!("refute exited with {code:?}"))?;
    let v: Value = serde_json::from_str(out.trim()).map_err(|e| e.to_string())?;
    ensure(v["result"] == "none", || format!("unexpected output {out}"))?;
    Ok(format!(
        "[1]p -> [0]p refuted with λ = {lambda}; [0]p -> [1]p none"
    ))
}

fn ordinal_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bound = Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::omega()));
    for _ in 0..10_000 {
        let a = sample::below(&mut rng, &bound);
        let b = sample::below(&mut rng, &bound);
        let c = sample::below(&mut rng, &bound);
        ordinal_triple_laws(&a, &b, &c)?;
    }
    Ok("10000 triples".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("decision corpus", decision_corpus, 60),
        ("reduction fidelity", reduction_fidelity, 600),
        ("Magari round trip", magari_round_trip, 300),
        ("l-maximality criterion", lmax_criterion, 300),
        ("d-product suite", d_product_suite, 300),
        ("plus-topology laws", plus_laws, 300),
        ("construction skeleton", construction_skeleton, 300),
        ("end-to-end refutation", end_to_end, 300),
        ("ordinal arithmetic", ordinal_laws, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(*budget) => {
                Err(format!("{msg}, but over the {budget} s budget"))
            }
            other => other,
        };
        let (status, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        failed += outcome.is_err() as usize;
        println!(
            "criterion {} {name}: {status} ({msg}; {:.1} s)",
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
