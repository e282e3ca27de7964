//! `glpwb`: command-line front end for the GLP workbench.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage error,
//! 3 bounded search inconclusive.

mod input;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glpwb::bits;
use glpwb::construction::{self, OrdinalModel, Refutation};
use glpwb::finitetop::{
    all_topologies, d_product, extensions, glp_polyspaces, is_l_maximal_by_criterion,
    is_l_maximal_by_def, l_extensions, maximal_extensions, plus_topology, scattered_topologies,
    DeltaOperator, FiniteSpace,
};
use glpwb::formula::Formula;
use glpwb::kripke::{decide_glp, decide_j, SearchConfig, Verdict, HARD_MAX_SIZE};
use glpwb::ordinal::Ordinal;
use glpwb::selftest;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "glpwb",
    version,
    about = "Workbench for the provability logic GLP"
)]
struct Cli {
    /// Line-delimited JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Search {
    /// Largest frame size to search.
    #[arg(long)]
    bound: Option<usize>,
    /// Search up to the size estimate; exit 3 if the hard cap stops short.
    #[arg(long, conflicts_with = "bound")]
    exhaustive: bool,
    /// Cap on frame size when no bound is given.
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Args, Clone)]
struct Sampling {
    /// Random ordinals per check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    Glp,
    J,
    Gl,
}

#[derive(Subcommand)]
enum Command {
    /// Decide validity by finite countermodel search.
    Decide {
        #[arg(long, value_enum, default_value = "glp")]
        logic: Logic,
        #[command(flatten)]
        search: Search,
        formula: String,
    },
    /// Print M(φ), M⁺(φ) and the J formula M⁺(φ) → φ.
    Reduce { formula: String },
    /// Print a smallest countermodel, if one is found.
    Countermodel {
        #[arg(long, value_enum, default_value = "glp")]
        logic: Logic,
        #[command(flatten)]
        search: Search,
        formula: String,
    },
    /// Build the ordinal model of a rooted J-tree and run its checks.
    OrdinalModel {
        #[command(flatten)]
        sampling: Sampling,
        /// Frame JSON `{"n", "worlds", "rel"}` or `@path`.
        frame: String,
    },
    /// Ordinal calculator; ordinals in Cantor normal form such as `w^w*3 + 2`.
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
    /// Finite topological spaces.
    Topo {
        #[command(subcommand)]
        op: TopoOp,
    },
    /// Countermodel search, then an ordinal model of the countermodel frame.
    Refute {
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        sampling: Sampling,
        formula: String,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only the named suites.
        #[arg(long)]
        suite: Vec<String>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum OrdOp {
    Add {
        a: String,
        b: String,
    },
    Mul {
        a: String,
        b: String,
    },
    /// ω^a.
    Pow {
        a: String,
    },
    /// Exponent of the last Cantor normal form term.
    R {
        a: String,
    },
    /// Left division: a = b·q + rem with rem < b.
    Div {
        a: String,
        b: String,
    },
    Cmp {
        a: String,
        b: String,
    },
}

#[derive(Subcommand)]
enum TopoOp {
    /// All topologies on `size` points up to equality.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        scattered: bool,
        /// GLP polyspaces with this many topologies minus one.
        #[arg(long, conflicts_with = "scattered")]
        glp: Option<usize>,
    },
    /// Rank-preserving, ℓ- or maximal extensions of a space.
    Extensions {
        space: String,
        #[arg(long, value_enum, default_value = "l")]
        kind: ExtKind,
    },
    /// The topology τ⁺ of a scattered space.
    Plus { space: String },
    /// The d-product X ⊗ Y.
    Dproduct { x: String, y: String },
    /// Check the GLP-space conditions of a polyspace.
    CheckGlp { polyspace: String },
    /// Truth set of a formula under a valuation, or validity over all.
    Eval {
        polyspace: String,
        formula: String,
        /// `{"p": [0, 2], ...}`; without it every valuation is tried.
        #[arg(long)]
        valuation: Option<String>,
    },
    /// Derived-set operator of a space, or the space of a Magari operator.
    Magari {
        space: Option<String>,
        /// Operator table JSON instead of a space.
        #[arg(long, conflicts_with = "space")]
        delta: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtKind {
    RankPreserving,
    L,
    Maximal,
}

struct Out {
    json: bool,
    lines: Vec<String>,
}

impl Out {
    fn emit(&mut self, human: impl IntoIterator<Item = String>, value: Value) {
        if self.json {
            self.lines.push(value.to_string());
        } else {
            self.lines.extend(human);
        }
    }
}

fn search_config(s: &Search) -> Result<SearchConfig, CliError> {
    if let Some(m) = s.max_size.or(s.bound) {
        if m > HARD_MAX_SIZE {
            return Err(CliError::Usage(format!(
                "frame size {m} exceeds the hard maximum {HARD_MAX_SIZE}"
            )));
        }
    }
    let mut cfg = match (s.bound, s.exhaustive) {
        (Some(b), _) => SearchConfig::with_bound(b),
        (None, true) => SearchConfig::exhaustive(),
        (None, false) => SearchConfig::default(),
    };
    if let Some(m) = s.max_size {
        cfg.max_size = m;
    }
    Ok(cfg)
}

fn decide(logic: Logic, f: &Formula, cfg: &SearchConfig) -> Result<Verdict, CliError> {
    let res = match logic {
        Logic::Glp => decide_glp(f, cfg),
        Logic::J => decide_j(f, cfg),
        Logic::Gl => {
            if f.max_modality().is_some_and(|m| m > 0) {
                return Err(CliError::Usage("GL formulas use modality 0 only".into()));
            }
            decide_j(f, cfg)
        }
    };
    res.map_err(|e| CliError::Failed(e.to_string()))
}

/// Exit 3 when an exhaustive search could not reach its estimate.
fn inconclusive(search: &Search, complete: bool) -> bool {
    search.exhaustive && !complete
}

fn valid_text(searched_up_to: usize, estimate: Option<usize>, complete: bool) -> String {
    if complete {
        "valid".to_string()
    } else {
        let est = estimate.map_or("unbounded".to_string(), |e| e.to_string());
        format!("valid (bounded search up to {searched_up_to} worlds; size estimate {est})")
    }
}

fn run_decide(out: &mut Out, logic: Logic, search: &Search, formula: &str) -> Result<u8, CliError> {
    let f = input::formula(formula)?;
    let v = decide(logic, &f, &search_config(search)?)?;
    match v {
        Verdict::Valid {
            searched_up_to,
            estimate,
            complete,
        } => {
            out.emit(
                [valid_text(searched_up_to, estimate, complete)],
                json!({"verdict": "valid", "searched_up_to": searched_up_to,
                       "estimate": estimate, "complete": complete}),
            );
            Ok(if inconclusive(search, complete) { 3 } else { 0 })
        }
        Verdict::Countermodel(c) => {
            let mut text = vec!["countermodel".to_string()];
            text.extend(render::model_text(&c.model, c.world));
            out.emit(
                text,
                json!({"verdict": "countermodel", "countermodel": c.to_json()}),
            );
            Ok(1)
        }
    }
}

fn run_countermodel(
    out: &mut Out,
    logic: Logic,
    search: &Search,
    formula: &str,
) -> Result<u8, CliError> {
    let f = input::formula(formula)?;
    match decide(logic, &f, &search_config(search)?)? {
        Verdict::Countermodel(c) => {
            let mut text = render::model_text(&c.model, c.world);
            for (g, set) in &c.truth {
                text.push(format!(
                    "  {g}: {}",
                    render::worlds(&c.model.frame, *set).join(" ")
                ));
            }
            out.emit(text, c.to_json());
            Ok(0)
        }
        Verdict::Valid {
            searched_up_to,
            complete,
            ..
        } => {
            out.emit(
                [format!("none up to {searched_up_to} worlds")],
                json!({"countermodel": null, "searched_up_to": searched_up_to, "complete": complete}),
            );
            Ok(if inconclusive(search, complete) { 3 } else { 1 })
        }
    }
}

fn run_checks(m: &OrdinalModel, sampling: &Sampling) -> Result<render::Checks, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let samples = m.samples(&mut rng, sampling.samples);
    let fail = |e: construction::ConstructionError| CliError::Failed(e.to_string());
    Ok(render::Checks {
        rank_height: m.check_rank_height(&samples).map_err(fail)?,
        suitability: m.check_suitability(&samples).map_err(fail)?,
        local_structure: m.check_local_structure(&samples, &mut rng).map_err(fail)?,
    })
}

fn model_value(m: &OrdinalModel) -> Result<Value, CliError> {
    m.to_json().map_err(|e| CliError::Failed(e.to_string()))
}

fn run_ordinal_model(out: &mut Out, sampling: &Sampling, frame: &str) -> Result<u8, CliError> {
    let t = input::frame(frame)?;
    let m = construction::build(&t).map_err(|e| CliError::Usage(e.to_string()))?;
    let checks = run_checks(&m, sampling)?;
    let mut text = render::ordinal_model_text(&m);
    text.extend(checks.text());
    out.emit(
        text,
        json!({"model": model_value(&m)?, "checks": checks.json()}),
    );
    Ok(if checks.all_ok() { 0 } else { 1 })
}

fn run_refute(
    out: &mut Out,
    search: &Search,
    sampling: &Sampling,
    formula: &str,
) -> Result<u8, CliError> {
    let f = input::formula(formula)?;
    let r = construction::refute(&f, &search_config(search)?)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    match r {
        Refutation::NotRefuted {
            searched_up_to,
            complete,
        } => {
            out.emit(
                [format!(
                    "none (no countermodel up to {searched_up_to} worlds)"
                )],
                json!({"result": "none", "searched_up_to": searched_up_to, "complete": complete}),
            );
            Ok(if inconclusive(search, complete) { 3 } else { 0 })
        }
        Refutation::Refuted {
            countermodel,
            world,
            model,
        } => {
            let truth = countermodel
                .eval(&f)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            let verified = !bits::contains(truth, world);
            let checks = run_checks(&model, sampling)?;
            let mut text = render::model_text(&countermodel, world);
            text.push(format!("verified: {verified}"));
            text.extend(render::ordinal_model_text(&model));
            text.extend(checks.text());
            out.emit(
                text,
                json!({
                    "result": "refuted",
                    "countermodel": render::model_json(&countermodel, world),
                    "verified": verified,
                    "lambda": model.lambda().to_string(),
                    "model": model_value(&model)?,
                    "checks": checks.json(),
                }),
            );
            Ok(if verified && checks.all_ok() { 0 } else { 1 })
        }
    }
}

fn run_ord(out: &mut Out, op: &OrdOp) -> Result<u8, CliError> {
    let fail = |e: glpwb::ordinal::OrdinalError| CliError::Failed(e.to_string());
    let (text, value) = match op {
        OrdOp::Add { a, b } => {
            let r = input::ord(a)?.add(&input::ord(b)?).map_err(fail)?;
            (r.to_string(), json!({"result": r.to_string()}))
        }
        OrdOp::Mul { a, b } => {
            let r = input::ord(a)?.mul(&input::ord(b)?).map_err(fail)?;
            (r.to_string(), json!({"result": r.to_string()}))
        }
        OrdOp::Pow { a } => {
            let r = Ordinal::try_omega_pow(&input::ord(a)?).map_err(fail)?;
            (r.to_string(), json!({"result": r.to_string()}))
        }
        OrdOp::R { a } => {
            let r = input::ord(a)?.r();
            (r.to_string(), json!({"result": r.to_string()}))
        }
        OrdOp::Div { a, b } => {
            let b = input::ord(b)?;
            if b.is_zero() {
                return Err(CliError::Usage("division by zero".into()));
            }
            let (q, rem) = input::ord(a)?.div_rem(&b).map_err(fail)?;
            (
                format!("{q} rem {rem}"),
                json!({"quotient": q.to_string(), "remainder": rem.to_string()}),
            )
        }
        OrdOp::Cmp { a, b } => {
            let sign = match input::ord(a)?.cmp(&input::ord(b)?) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            (sign.to_string(), json!({"result": sign}))
        }
    };
    out.emit([text], value);
    Ok(0)
}

fn top(e: glpwb::finitetop::TopError) -> CliError {
    CliError::Failed(e.to_string())
}

fn run_topo(out: &mut Out, op: &TopoOp) -> Result<u8, CliError> {
    match op {
        TopoOp::Enumerate {
            size,
            scattered,
            glp,
        } => {
            if let Some(n) = glp {
                let all = glp_polyspaces(*size, *n).map_err(top)?;
                for p in &all {
                    let raw = serde_json::to_value(p.to_raw()).expect("plain data");
                    out.emit([raw.to_string()], raw);
                }
                out.emit(
                    [format!("{} GLP polyspaces", all.len())],
                    json!({"count": all.len()}),
                );
                return Ok(0);
            }
            let all: Vec<FiniteSpace> = if *scattered {
                scattered_topologies(*size).map_err(top)?
            } else {
                all_topologies(*size).map_err(top)?.to_vec()
            };
            for s in &all {
                out.emit([render::space_text(s)], render::space_json(s));
            }
            out.emit(
                [format!("{} topologies", all.len())],
                json!({"count": all.len()}),
            );
        }
        TopoOp::Extensions { space, kind } => {
            let s = input::space(space)?;
            let found = match kind {
                ExtKind::RankPreserving => extensions(&s),
                ExtKind::L => l_extensions(&s),
                ExtKind::Maximal => maximal_extensions(&s),
            }
            .map_err(top)?;
            for e in &found {
                out.emit([render::space_text(e)], render::space_json(e));
            }
            let by_def = is_l_maximal_by_def(&s).map_err(top)?;
            let by_crit = is_l_maximal_by_criterion(&s).map_err(top)?;
            out.emit(
                [
                    format!("{} extensions", found.len()),
                    format!("l-maximal: {by_def} (criterion: {by_crit})"),
                ],
                json!({"count": found.len(), "l_maximal": by_def, "l_maximal_criterion": by_crit}),
            );
        }
        TopoOp::Plus { space } => {
            let s = input::space(space)?;
            if !s.is_scattered() {
                return Err(CliError::Usage("the space is not scattered".into()));
            }
            let p = plus_topology(&s);
            out.emit([render::space_text(&p)], render::space_json(&p));
        }
        TopoOp::Dproduct { x, y } => {
            let (x, y) = (input::space(x)?, input::space(y)?);
            let p = d_product(&x, &y).map_err(top)?;
            let pi0: Vec<Value> = p.pi0.iter().map(|v| json!(v)).collect();
            out.emit(
                [
                    render::space_text(&p.space),
                    format!(
                        "pi0: {}",
                        p.pi0
                            .iter()
                            .map(|v| v.map_or("-".into(), |x| x.to_string()))
                            .collect::<Vec<_>>()
                            .join(" ")
                    ),
                    format!(
                        "pi1: {}",
                        p.pi1
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    ),
                ],
                json!({"space": render::space_json(&p.space), "pi0": pi0, "pi1": p.pi1}),
            );
        }
        TopoOp::CheckGlp { polyspace } => {
            let p = input::polyspace(polyspace)?;
            let ok = p.is_glp_space();
            let word = if ok { "glp-space" } else { "not a glp-space" };
            out.emit([word.to_string()], json!({"glp_space": ok}));
            return Ok(if ok { 0 } else { 1 });
        }
        TopoOp::Eval {
            polyspace,
            formula,
            valuation,
        } => {
            let p = input::polyspace(polyspace)?;
            let f = input::formula(formula)?;
            match valuation {
                Some(v) => {
                    let val = input::valuation(v, p.size())?;
                    let set = p.eval(&val, &f).map_err(top)?;
                    out.emit([render::set(set)], json!({"truth": bits::to_vec(set)}));
                }
                None => match p.refuting_valuation(&f).map_err(top)? {
                    None => out.emit(["valid".to_string()], json!({"valid": true})),
                    Some(val) => {
                        let shown: serde_json::Map<String, Value> = val
                            .iter()
                            .map(|(k, v)| (k.clone(), json!(bits::to_vec(*v))))
                            .collect();
                        let text: Vec<String> = std::iter::once("refuted".to_string())
                            .chain(val.iter().map(|(k, v)| format!("{k}: {}", render::set(*v))))
                            .collect();
                        out.emit(text, json!({"valid": false, "valuation": shown}));
                        return Ok(1);
                    }
                },
            }
        }
        TopoOp::Magari { space, delta } => match (space, delta) {
            (Some(s), _) => {
                let s = input::space(s)?;
                let d = DeltaOperator::of_space(&s).map_err(top)?;
                let magari = d.is_magari();
                out.emit(
                    [
                        format!("magari: {magari}"),
                        serde_json::to_string(&d.to_raw()).expect("plain data"),
                    ],
                    json!({"magari": magari, "delta": d.to_raw()}),
                );
                return Ok(if magari { 0 } else { 1 });
            }
            (None, Some(d)) => {
                let d = input::delta(d)?;
                if !d.is_magari() {
                    out.emit(["magari: false".to_string()], json!({"magari": false}));
                    return Ok(1);
                }
                let s = d.to_space().map_err(top)?;
                out.emit(
                    ["magari: true".to_string(), render::space_text(&s)],
                    json!({"magari": true, "space": render::space_json(&s)}),
                );
            }
            (None, None) => return Err(CliError::Usage("give a space or --delta".into())),
        },
    }
    Ok(0)
}

fn run_selftest(out: &mut Out, seed: u64, suites: &[String], list: bool) -> Result<u8, CliError> {
    if list {
        let names = selftest::suite_names();
        out.emit(
            names.iter().map(|n| n.to_string()),
            json!({"suites": names}),
        );
        return Ok(0);
    }
    let reports = if suites.is_empty() {
        selftest::run_all(seed)
    } else {
        suites
            .iter()
            .map(|s| {
                selftest::run_suite(s, seed)
                    .ok_or_else(|| CliError::Usage(format!("unknown suite {s}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut failed = false;
    for r in &reports {
        failed |= !r.passed();
        let status = if r.passed() { "ok" } else { "FAILED" };
        let mut text = vec![format!(
            "{} {status} ({} checked, {} failed)",
            r.name, r.checked, r.failed
        )];
        text.extend(r.examples.iter().map(|e| format!("  {e}")));
        out.emit(text, serde_json::to_value(r).expect("plain data"));
    }
    Ok(if failed { 1 } else { 0 })
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8, CliError> {
    match &cli.command {
        Command::Decide {
            logic,
            search,
            formula,
        } => run_decide(out, *logic, search, formula),
        Command::Reduce { formula } => {
            let f = input::formula(formula)?;
            let (m, mp, j) = (f.m_formula(), f.m_plus(), f.glp_to_j());
            out.emit(
                [format!("M: {m}"), format!("M+: {mp}"), format!("J: {j}")],
                json!({"m": m.to_string(), "m_plus": mp.to_string(), "j": j.to_string()}),
            );
            Ok(0)
        }
        Command::Countermodel {
            logic,
            search,
            formula,
        } => run_countermodel(out, *logic, search, formula),
        Command::OrdinalModel { sampling, frame } => run_ordinal_model(out, sampling, frame),
        Command::Ord { op } => run_ord(out, op),
        Command::Topo { op } => run_topo(out, op),
        Command::Refute {
            search,
            sampling,
            formula,
        } => run_refute(out, search, sampling, formula),
        Command::Selftest { seed, suite, list } => run_selftest(out, *seed, suite, *list),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out {
        json: cli.json,
        lines: Vec::new(),
    };
    let code = run(&cli, &mut out);
    for line in &out.lines {
        println!("{line}");
    }
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Failed(m) => m,
            };
            if cli.json {
                println!("{}", json!({"error": msg}));
            }
            eprintln!("glpwb: {msg}");
            ExitCode::from(e.code())
        }
    }
}
