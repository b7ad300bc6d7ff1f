use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use levelplan::crosscheck::{replay, run_crosscheck, CrosscheckConfig, Suite};
use levelplan::drawing::{
    build_cluster_regions, degeneracies, draw_from_betweenness_solution, draw_from_ordering, emit_svg,
    independent_crossings, validate_cl_drawing, LevelDrawing,
};
use levelplan::gen::{generate, Bias, GeneratorConfig, Generated, Kind};
use levelplan::io::{
    canonical_json, drawing_to_sidecar, parse_betweenness, parse_document, parse_ordering, serialize_betweenness,
    serialize_document, serialize_ordering, serialize_witness, Document, Instance,
};
use levelplan::model::{is_proper, subdivide_to_proper, validate_instance, ClInstance};
use levelplan::oracles::{solve_betweenness, solve_sefe_exhaustive, solve_tlp_exhaustive, BetweennessInstance, Budget};
use levelplan::reductions::{
    build_cl_hierarchy, clusters_to_trees, decide_proper_cl, decide_proper_tlp, make_level_connected,
    reduce_betweenness_to_tlevel, reduce_tlp_to_sefe, Backend, ReductionProvenance, Role, Source,
};
use levelplan::{Error, Result};

/// Level, T-level and clustered-level planarity toolkit.
///
/// Exit codes: 0 yes/valid, 1 no/invalid, 2 error or budget exceeded.
#[derive(Parser)]
#[command(name = "levelplan", version)]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

/// Defaults come from the oracles, then `LEVELPLAN_BUDGET`
/// (`perm=N,rotation=N,elements=N`), then these flags.
#[derive(Args)]
struct BudgetArgs {
    /// Placement attempts allowed in an ordering search.
    #[arg(long, global = true)]
    max_perm_product: Option<u64>,
    /// Rotation systems an embedding enumeration may visit.
    #[arg(long, global = true)]
    max_rotation_product: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document against its invariants.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Subdivide long edges of a level graph.
    Properize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one construction.
    Reduce {
        which: Reduction,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// With `thm1`: leave out the outer element levels.
        #[arg(long)]
        drop_outer_levels: bool,
    },
    /// Decide an instance; the witness goes to --out when there is one.
    Decide {
        problem: Problem,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "direct")]
        backend: BackendArg,
    },
    /// Draw an instance from a witness and check the drawing.
    Draw {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Exact coordinates and regions.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Compare oracles against reductions on generated instances.
    Crosscheck {
        #[arg(long, value_enum, required_unless_present = "replay")]
        suite: Option<SuiteArg>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where counterexample bundles are written.
        #[arg(long, default_value = "crosscheck-bundles")]
        bundles: PathBuf,
        /// Add wall-clock time to every trial.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-run a bundle instead of generating trials.
        #[arg(long, conflicts_with = "suite")]
        replay: Option<PathBuf>,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0.4)]
        edge_prob: f64,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_enum, default_value = "none")]
        bias: BiasArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    Thm1,
    Thm2,
    Lemma1,
    Lemma3,
    Lemma4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Betweenness,
    Tlp,
    Cl,
    Sefe,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Direct,
    Sefe,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Thm1,
    Thm2,
    Lemma1,
    Lemma34,
    Pipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Betweenness,
    ProperTlevel,
    ProperCl,
    LevelConnectedCl,
}

#[derive(Clone, Copy, ValueEnum)]
enum BiasArg {
    None,
    ForceSat,
    ForceUnsat,
}

const YES: u8 = 0;
const NO: u8 = 1;
const FAILURE: u8 = 2;

fn budget(args: &BudgetArgs) -> Result<Budget> {
    let mut b = Budget::default();
    if let Ok(spec) = std::env::var("LEVELPLAN_BUDGET") {
        b = b.with_overrides(&spec)?;
    }
    if let Some(n) = args.max_perm_product {
        b.max_search_nodes = n;
    }
    if let Some(n) = args.max_rotation_product {
        b.max_rotation_product = n;
    }
    Ok(b)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Documents carry a `kind`; Betweenness files do not.
enum Input {
    Betweenness(BetweennessInstance),
    Doc(Document),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let has_kind = serde_json::from_str::<serde_json::Value>(&text)
        .map(|v| v.get("kind").is_some())
        .unwrap_or(true);
    if has_kind {
        Ok(Input::Doc(parse_document(&text)?))
    } else {
        Ok(Input::Betweenness(parse_betweenness(&text)?))
    }
}

fn wrong_kind(want: &str, got: &Input) -> Error {
    let got = match got {
        Input::Betweenness(_) => "betweenness",
        Input::Doc(d) => d.instance.kind(),
    };
    Error::Parse(format!("expected a {want} instance, got {got}"))
}

fn verdict(planar: bool) -> u8 {
    println!("{}", if planar { "yes" } else { "no" });
    if planar {
        YES
    } else {
        NO
    }
}

fn validate(input: &Path) -> Result<u8> {
    let problems: Vec<String> = match read_input(input) {
        Ok(Input::Betweenness(b)) => b.violations().iter().map(ToString::to_string).collect(),
        Ok(Input::Doc(d)) => match &d.instance {
            Instance::Level(g) => validate_instance(g),
            Instance::TLevel(t) => validate_instance(t),
            Instance::Cl(c) => validate_instance(c),
            Instance::Sefe(s) => validate_instance(s),
        }
        .iter()
        .map(ToString::to_string)
        .collect(),
        Err(Error::Schema(v)) => v,
        Err(e @ (Error::Invalid(_) | Error::Parse(_))) => vec![e.to_string()],
        Err(e) => return Err(e),
    };
    if problems.is_empty() {
        println!("valid");
        Ok(YES)
    } else {
        for p in problems {
            println!("{p}");
        }
        Ok(NO)
    }
}

fn properize(input: &Path, out: Option<&Path>) -> Result<u8> {
    let doc = match read_input(input)? {
        Input::Doc(d) => d,
        other => return Err(wrong_kind("level", &other)),
    };
    let g = doc.instance.graph().ok_or_else(|| Error::Parse("sefe instances have no levels".into()))?;
    if is_proper(g) {
        emit(out, &serialize_document(&doc)?)?;
        return Ok(YES);
    }
    let Instance::Level(g) = &doc.instance else {
        return Err(Error::Parse(format!(
            "only level graphs are subdivided; this {} instance has long edges",
            doc.instance.kind()
        )));
    };
    let (p, map) = subdivide_to_proper(g);
    let mut prov = ReductionProvenance::default();
    for ((a, b), chain) in &map.chains {
        for id in chain {
            let level = p.index_of(id).map(|v| p.level(v));
            prov.roles.insert(
                id.clone(),
                Role {
                    role: "dummy".into(),
                    source: Source {
                        edge: Some(format!("{a}-{b}")),
                        level,
                        ..Source::default()
                    },
                },
            );
        }
    }
    emit(out, &serialize_document(&Document::with_provenance(Instance::Level(p), prov))?)?;
    Ok(YES)
}

fn reduce(which: Reduction, input: &Path, out: Option<&Path>, drop_outer: bool) -> Result<u8> {
    let input = read_input(input)?;
    let doc = match (which, &input) {
        (Reduction::Thm1, Input::Betweenness(b)) => {
            let (t, prov) = reduce_betweenness_to_tlevel(b, drop_outer)?;
            Document::with_provenance(Instance::TLevel(t), prov)
        }
        (Reduction::Thm2, Input::Betweenness(b)) => {
            let (c, prov) = build_cl_hierarchy(b)?;
            Document::with_provenance(Instance::Cl(c), prov)
        }
        (Reduction::Lemma1, Input::Doc(Document { instance: Instance::TLevel(t), .. })) => {
            let (s, prov) = reduce_tlp_to_sefe(t)?;
            Document::with_provenance(Instance::Sefe(s), prov)
        }
        (Reduction::Lemma3, Input::Doc(Document { instance: Instance::Cl(c), .. })) => {
            let (lc, prov) = make_level_connected(c)?;
            Document::with_provenance(Instance::Cl(lc), prov)
        }
        (Reduction::Lemma4, Input::Doc(Document { instance: Instance::Cl(c), .. })) => {
            Document::new(Instance::TLevel(clusters_to_trees(c)?))
        }
        (Reduction::Thm1 | Reduction::Thm2, _) => return Err(wrong_kind("betweenness", &input)),
        (Reduction::Lemma1, _) => return Err(wrong_kind("tlevel", &input)),
        _ => return Err(wrong_kind("cl", &input)),
    };
    emit(out, &serialize_document(&doc)?)?;
    Ok(YES)
}

fn decide(problem: Problem, input: &Path, out: Option<&Path>, backend: BackendArg, budget: &Budget) -> Result<u8> {
    let input = read_input(input)?;
    let backend = match backend {
        BackendArg::Direct => Backend::Direct,
        BackendArg::Sefe => Backend::Sefe,
    };
    let (planar, witness) = match (problem, &input) {
        (Problem::Betweenness, Input::Betweenness(b)) => {
            let order = solve_betweenness(b, budget.max_betweenness_elements)?;
            let w = order.as_ref().map(|o| canonical_json(&json!({ "order": o }))).transpose()?;
            (order.is_some(), w)
        }
        (Problem::Tlp, Input::Doc(Document { instance: Instance::TLevel(t), .. })) => {
            let o = if is_proper(t.graph()) {
                decide_proper_tlp(t, backend, budget)?.certificate
            } else if backend == Backend::Direct {
                solve_tlp_exhaustive(t, budget)?
            } else {
                return Err(Error::Parse("the sefe backend needs a proper instance".into()));
            };
            (o.is_some(), o.as_ref().map(serialize_ordering).transpose()?)
        }
        (Problem::Cl, Input::Doc(Document { instance: Instance::Cl(c), .. })) => {
            let d = decide_proper_cl(c, backend, budget)?;
            (d.planar, d.certificate.as_ref().map(serialize_ordering).transpose()?)
        }
        (Problem::Sefe, Input::Doc(Document { instance: Instance::Sefe(s), .. })) => {
            let w = solve_sefe_exhaustive(s, budget)?;
            (w.is_some(), w.as_ref().map(|w| serialize_witness(s, w)).transpose()?)
        }
        (Problem::Betweenness, _) => return Err(wrong_kind("betweenness", &input)),
        (Problem::Tlp, _) => return Err(wrong_kind("tlevel", &input)),
        (Problem::Cl, _) => return Err(wrong_kind("cl", &input)),
        (Problem::Sefe, _) => return Err(wrong_kind("sefe", &input)),
    };
    if let (Some(path), Some(w)) = (out, witness) {
        fs::write(path, w)?;
    }
    Ok(verdict(planar))
}

fn cl_report(d: &LevelDrawing, c: &ClInstance) -> Result<(LevelDrawing, Vec<String>)> {
    let d = build_cluster_regions(d, c)?;
    let report = validate_cl_drawing(&d, c).iter().map(ToString::to_string).collect();
    Ok((d, report))
}

fn draw(input: &Path, witness: &Path, svg: &Path, sidecar: Option<&Path>) -> Result<u8> {
    let input = read_input(input)?;
    let witness = read(witness)?;
    let (d, report) = match &input {
        Input::Betweenness(b) => {
            let v: serde_json::Value = serde_json::from_str(&witness).map_err(|e| Error::Parse(e.to_string()))?;
            let order: Vec<usize> = v
                .get("order")
                .and_then(|o| serde_json::from_value(o.clone()).ok())
                .ok_or_else(|| Error::Parse("betweenness witness needs {\"order\": [...]}".into()))?;
            let (c, _) = build_cl_hierarchy(b)?;
            cl_report(&draw_from_betweenness_solution(b, &order)?, &c)?
        }
        Input::Doc(doc) => {
            let o = parse_ordering(&witness)?;
            match &doc.instance {
                Instance::Cl(c) => cl_report(&draw_from_ordering(c.graph(), &o)?, c)?,
                Instance::Level(_) | Instance::TLevel(_) => {
                    let g = doc.instance.graph().expect("leveled instance");
                    let d = draw_from_ordering(g, &o)?;
                    let mut report: Vec<String> = independent_crossings(&d)
                        .iter()
                        .map(|((a, b), (c, e))| format!("crossing: {a}-{b} and {c}-{e}"))
                        .collect();
                    report.extend(degeneracies(&d).iter().map(|((a, b), p)| format!("degeneracy: {p} on {a}-{b}")));
                    (d, report)
                }
                Instance::Sefe(_) => return Err(wrong_kind("level, tlevel or cl", &input)),
            }
        }
    };
    fs::write(svg, emit_svg(&d))?;
    if let Some(path) = sidecar {
        fs::write(path, drawing_to_sidecar(&d)?)?;
    }
    if report.is_empty() {
        println!("valid");
        Ok(YES)
    } else {
        for line in report {
            println!("{line}");
        }
        Ok(NO)
    }
}

#[allow(clippy::too_many_arguments)]
fn crosscheck(
    suite: Option<SuiteArg>,
    trials: usize,
    seed: u64,
    bundles: PathBuf,
    timing: bool,
    out: Option<&Path>,
    replay_dir: Option<&Path>,
    budget: Budget,
) -> Result<u8> {
    if let Some(dir) = replay_dir {
        let r = replay(dir, &budget)?;
        println!("{}", canonical_json(&json!({ "suite": r.suite, "recorded": r.recorded, "replayed": r.replayed }))?.trim_end());
        eprintln!("{}", if r.reproduced() { "reproduced" } else { "not reproduced" });
        return Ok(if r.agree() { YES } else { NO });
    }
    let suite = match suite.expect("clap requires --suite") {
        SuiteArg::Thm1 => Suite::Thm1,
        SuiteArg::Thm2 => Suite::Thm2,
        SuiteArg::Lemma1 => Suite::Lemma1,
        SuiteArg::Lemma34 => Suite::Lemma34,
        SuiteArg::Pipeline => Suite::Pipeline,
    };
    let cfg = CrosscheckConfig {
        suite,
        trials,
        seed,
        budget,
        timing,
        bundle_dir: Some(bundles),
    };
    let report = run_crosscheck(&cfg)?;
    emit(out, &report.to_json()?)?;
    let s = &report.summary;
    eprintln!("{suite}: {} agree, {} disagree, {} over budget", s.agree, s.disagree, s.budget);
    Ok(if s.disagree > 0 {
        NO
    } else if s.budget > 0 {
        FAILURE
    } else {
        YES
    })
}

fn run(cli: Cli) -> Result<u8> {
    let budget = budget(&cli.budget)?;
    match cli.command {
        Command::Validate { input } => validate(&input),
        Command::Properize { input, out } => properize(&input, out.as_deref()),
        Command::Reduce {
            which,
            input,
            out,
            drop_outer_levels,
        } => reduce(which, &input, out.as_deref(), drop_outer_levels),
        Command::Decide {
            problem,
            input,
            out,
            backend,
        } => decide(problem, &input, out.as_deref(), backend, &budget),
        Command::Draw {
            input,
            witness,
            svg,
            sidecar,
        } => draw(&input, &witness, &svg, sidecar.as_deref()),
        Command::Crosscheck {
            suite,
            trials,
            seed,
            bundles,
            timing,
            out,
            replay,
        } => crosscheck(suite, trials, seed, bundles, timing, out.as_deref(), replay.as_deref(), budget),
        Command::Gen {
            kind,
            seed,
            n,
            m,
            k,
            width,
            edge_prob,
            depth,
            bias,
            out,
        } => {
            let cfg = GeneratorConfig {
                seed,
                kind: match kind {
                    KindArg::Betweenness => Kind::Betweenness,
                    KindArg::ProperTlevel => Kind::ProperTLevel,
                    KindArg::ProperCl => Kind::ProperCl,
                    KindArg::LevelConnectedCl => Kind::LevelConnectedCl,
                },
                n,
                m,
                k,
                width,
                edge_prob,
                depth,
                bias: match bias {
                    BiasArg::None => Bias::None,
                    BiasArg::ForceSat => Bias::ForceSat,
                    BiasArg::ForceUnsat => Bias::ForceUnsat,
                },
            };
            let text = match generate(&cfg)? {
                Generated::Betweenness(b) => serialize_betweenness(&b)?,
                Generated::Instance(i) => serialize_document(&Document::new(i))?,
            };
            emit(out.as_deref(), &text)?;
            Ok(YES)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { FAILURE } else { YES });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}
