use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use gleafkit::compository::composability_diagnostic;
use gleafkit::gleaf::FinSetSystem;
use gleafkit::metric::{find_unfillable_horn, metric_glue, FiniteMetric, MetricGleaf, M1};
use gleafkit::nerve::{CategorySpec, FinCategory, Nerve, NervePath};
use gleafkit::probability::{deterministic_joint_exists, dist_glue, uniform_on, Dist, Feasibility, ProbGleaf, PO};
use gleafkit::relational::{join_unchecked, natural_join, Relation, RelationGleaf};
use gleafkit::spans::{diamond_horn, fillers, FinLattice, LatticeSpec, NSpan, Spans};
use gleafkit::suite::{run_suite, Instance, Mode, SuiteConfig};
use gleafkit::topology::{common_extension, incompatible_pairs, top_glue, triangle_pieces, FinTopology, TopologyGleaf};
use gleafkit::{Compository, Cover, Error, FinMap, FinSet, Gleaf, Label, MonotoneMap, SimplicialSet};

const THREADS_VAR: &str = "GLEAFKIT_THREADS";

/// Check compository and gleaf laws on finite instances, compose and glue
/// simplices and sections, and reproduce the standard counterexamples.
#[derive(Debug, Parser)]
#[command(name = "gleafkit", version)]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the law suites of an instance and report failures.
    Check(CheckArgs),
    /// Compose two simplices: `A ∘_k B`.
    Compose {
        #[command(flatten)]
        ctx: InstanceArgs,
        a: PathBuf,
        k: usize,
        b: PathBuf,
    },
    /// Glue two local sections over the union of their carriers, or over the
    /// legs given by `--cover`.
    Glue {
        #[command(flatten)]
        ctx: InstanceArgs,
        a: PathBuf,
        b: PathBuf,
        /// JSON file `{"cod": [...], "a": {...}, "b": {...}}` mapping the
        /// points of each section into a common codomain.
        #[arg(long)]
        cover: Option<PathBuf>,
    },
    /// Restrict a simplex or section along a map. The map is either a list
    /// of vertex images such as `0,0,1` or a JSON object from new points to
    /// old points.
    Act {
        #[command(flatten)]
        ctx: InstanceArgs,
        simplex: PathBuf,
        map: String,
    },
    /// Reproduce and certify a counterexample.
    Counterexample {
        which: Which,
        /// Seed for the randomized metric horn search.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Attempts for the randomized metric horn search.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// JSON suite configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    instance: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dims: Option<usize>,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    #[arg(long)]
    instance: String,
    /// Category for the nerve instance (JSON); defaults to the chain 0 -> 1 -> 2 -> 3.
    #[arg(long)]
    category: Option<PathBuf>,
    /// Lattice for the spans instance (JSON); defaults to the diamond.
    #[arg(long)]
    lattice: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    SpanHorn,
    MetricHorn,
    ProbTriple,
    TopologyTriple,
}

/// How a command ended, mapped onto the exit status.
enum Outcome {
    Pass(Value),
    Fail(Value),
}

enum CliError {
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(CliError::Usage(msg) | CliError::Io(msg)) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli.command).and_then(|outcome| emit(cli.out.as_deref(), outcome)) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg) | CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(out: Option<&Path>, outcome: Outcome) -> CliResult<u8> {
    let (value, code) = match outcome {
        Outcome::Pass(v) => (v, 0),
        Outcome::Fail(v) => (v, 1),
    };
    let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(code)
}

fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Check(args) => check(args),
        Command::Compose { ctx, a, k, b } => compose(ctx, a, *k, b).map(Outcome::Pass),
        Command::Glue { ctx, a, b, cover } => glue(ctx, a, b, cover.as_deref()).map(Outcome::Pass),
        Command::Act { ctx, simplex, map } => act(ctx, simplex, map).map(Outcome::Pass),
        Command::Counterexample { which, seed, samples } => counterexample(*which, *seed, *samples),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn check(args: &CheckArgs) -> CliResult<Outcome> {
    let mut config = match &args.config {
        Some(path) => read_json::<SuiteConfig>(path)?,
        None => {
            let instance = args.instance.as_deref().ok_or_else(|| CliError::Usage("--instance or --config is required".into()))?;
            SuiteConfig::new(instance.parse()?, Mode::Both)
        }
    };
    if let Some(i) = &args.instance {
        config.instance = i.parse()?;
    }
    if let Some(m) = &args.mode {
        config.mode = m.parse()?;
    }
    config.dims = args.dims.or(config.dims);
    config.samples = args.samples.or(config.samples);
    config.seed = args.seed.unwrap_or(config.seed);
    let report = run_suite(&config)?;
    let value = to_value(&report);
    Ok(if report.passed() { Outcome::Pass(value) } else { Outcome::Fail(value) })
}

fn category(ctx: &InstanceArgs) -> CliResult<FinCategory> {
    match &ctx.category {
        Some(path) => Ok(FinCategory::from_spec(&read_json::<CategorySpec>(path)?)?),
        None => Ok(FinCategory::chain(3)),
    }
}

fn lattice(ctx: &InstanceArgs) -> CliResult<FinLattice> {
    match &ctx.lattice {
        Some(path) => Ok(FinLattice::from_spec(&read_json::<LatticeSpec>(path)?)?),
        None => Ok(FinLattice::diamond()),
    }
}

fn instance(ctx: &InstanceArgs) -> CliResult<Instance> {
    match ctx.instance.parse()? {
        Instance::Broken => Err(CliError::Usage("the broken instance is only available to check".into())),
        i => Ok(i),
    }
}

fn compose_checked<C: Compository>(c: &C, a: &C::Simplex, k: usize, b: &C::Simplex) -> CliResult<C::Simplex> {
    if let Some(msg) = composability_diagnostic(c, a, k, b)? {
        return Err(CliError::Usage(msg));
    }
    Ok(c.compose(a, k, b)?)
}

fn compose(ctx: &InstanceArgs, a: &Path, k: usize, b: &Path) -> CliResult<Value> {
    match instance(ctx)? {
        Instance::Nerve => {
            let nerve = Nerve::new(category(ctx)?);
            let cat = nerve.category();
            let pa = NervePath::from_json(cat, &read_json(a)?)?;
            let pb = NervePath::from_json(cat, &read_json(b)?)?;
            Ok(compose_checked(&nerve, &pa, k, &pb)?.to_json(cat))
        }
        Instance::Spans => {
            let spans = Spans::new(lattice(ctx)?);
            let l = spans.lattice();
            let sa = NSpan::from_json(l, &read_json(a)?)?;
            let sb = NSpan::from_json(l, &read_json(b)?)?;
            Ok(compose_checked(&spans, &sa, k, &sb)?.to_json(l))
        }
        Instance::Metric => {
            let (ma, mb): (FiniteMetric, FiniteMetric) = (read_json(a)?, read_json(b)?);
            Ok(to_value(&compose_checked(&M1::new(ma.symmetric()), &ma, k, &mb)?))
        }
        Instance::Probability => {
            let (pa, pb): (Dist, Dist) = (read_json(a)?, read_json(b)?);
            Ok(to_value(&compose_checked(&PO::new(pa.outcomes())?, &pa, k, &pb)?))
        }
        i => Err(CliError::Usage(format!("{i} is a gleaf without composition; use glue"))),
    }
}

/// Reads `{"cod": [...], "a": {"p": "q", ...}, "b": {...}}`.
fn read_cover(path: &Path, base_a: &FinSet, base_b: &FinSet) -> CliResult<Cover<FinMap>> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct CoverSpec {
        cod: Vec<Label>,
        a: BTreeMap<Label, Label>,
        b: BTreeMap<Label, Label>,
    }
    let spec: CoverSpec = read_json(path)?;
    let cod: FinSet = spec.cod.into_iter().collect();
    let leg = |map: BTreeMap<Label, Label>, base: &FinSet, side: &str| -> CliResult<FinMap> {
        if &map.keys().cloned().collect::<FinSet>() != base {
            return Err(CliError::Usage(format!("leg {side} must map exactly the points of section {side}")));
        }
        Ok(FinMap::new(map, cod.clone())?)
    };
    Ok(Cover::new(&FinSetSystem, leg(spec.a, base_a, "a")?, leg(spec.b, base_b, "b")?)?)
}

fn glue_with<G: Gleaf<System = FinSetSystem>>(
    g: &G,
    a: &G::Section,
    b: &G::Section,
    cover: Option<&Path>,
    direct: impl Fn(&G::Section, &G::Section) -> gleafkit::Result<G::Section>,
) -> CliResult<Value> {
    let glued = match cover {
        Some(path) => g.glue(&read_cover(path, &g.base(a), &g.base(b))?, a, b)?,
        None => direct(a, b)?,
    };
    Ok(to_value(&glued))
}

fn glue(ctx: &InstanceArgs, a: &Path, b: &Path, cover: Option<&Path>) -> CliResult<Value> {
    match instance(ctx)? {
        Instance::Metric => {
            let (ma, mb): (FiniteMetric, FiniteMetric) = (read_json(a)?, read_json(b)?);
            glue_with(&MetricGleaf::new(ma.symmetric()), &ma, &mb, cover, metric_glue)
        }
        Instance::Probability => glue_with(&ProbGleaf, &read_json(a)?, &read_json(b)?, cover, dist_glue),
        Instance::Relational => glue_with(&RelationGleaf, &read_relation(a)?, &read_relation(b)?, cover, natural_join),
        Instance::Topology => glue_with(&TopologyGleaf, &read_json(a)?, &read_json(b)?, cover, top_glue),
        i => Err(CliError::Usage(format!("{i} glues over simplices; use compose"))),
    }
}

/// Relations come as JSON, or as CSV with a header row of attribute names.
fn read_relation(path: &Path) -> CliResult<Relation> {
    if path.extension().is_some_and(|e| e == "csv") {
        let file = fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        return Ok(Relation::from_csv(file, None)?);
    }
    read_json(path)
}

/// A monotone map into `[cod]` from a list like `0,0,1`.
fn monotone(map: &str, cod: usize) -> CliResult<Option<MonotoneMap>> {
    let parts: Vec<&str> = map.split(',').map(str::trim).collect();
    let Ok(values) = parts.iter().map(|p| p.parse::<usize>()).collect::<Result<Vec<_>, _>>() else {
        return Ok(None);
    };
    if values.is_empty() {
        return Err(CliError::Usage("empty map".into()));
    }
    Ok(Some(MonotoneMap::new(values.len() - 1, cod, values)?))
}

/// A function into `base`, from a vertex list on ordinal bases or a JSON object.
fn function(map: &str, base: &FinSet) -> CliResult<FinMap> {
    if let Some(dim) = base.len().checked_sub(1) {
        if base.iter().enumerate().all(|(i, x)| x.index() == Some(i)) {
            if let Some(m) = monotone(map, dim)? {
                return Ok(FinMap::from_monotone(&m));
            }
        }
    }
    let pairs: BTreeMap<Label, Label> =
        serde_json::from_str(map).map_err(|e| CliError::Usage(format!("map must be a vertex list or a JSON object: {e}")))?;
    Ok(FinMap::new(pairs, base.clone())?)
}

fn act(ctx: &InstanceArgs, simplex: &Path, map: &str) -> CliResult<Value> {
    let need_monotone = |cod: usize| -> CliResult<MonotoneMap> {
        monotone(map, cod)?.ok_or_else(|| CliError::Usage("expected a vertex list such as 0,0,1".into()))
    };
    match instance(ctx)? {
        Instance::Nerve => {
            let nerve = Nerve::new(category(ctx)?);
            let p = NervePath::from_json(nerve.category(), &read_json(simplex)?)?;
            Ok(nerve.act(&p, &need_monotone(p.len())?)?.to_json(nerve.category()))
        }
        Instance::Spans => {
            let spans = Spans::new(lattice(ctx)?);
            let s = NSpan::from_json(spans.lattice(), &read_json(simplex)?)?;
            Ok(spans.act(&s, &need_monotone(s.dim())?)?.to_json(spans.lattice()))
        }
        Instance::Metric => {
            let m: FiniteMetric = read_json(simplex)?;
            let g = MetricGleaf::new(m.symmetric());
            Ok(to_value(&g.restrict(&m, &function(map, &m.point_set())?)?))
        }
        Instance::Probability => {
            let d: Dist = read_json(simplex)?;
            Ok(to_value(&ProbGleaf.restrict(&d, &function(map, &d.var_set())?)?))
        }
        Instance::Relational => {
            let r = read_relation(simplex)?;
            Ok(to_value(&RelationGleaf.restrict(&r, &function(map, &r.attr_set())?)?))
        }
        Instance::Topology => {
            let t: FinTopology = read_json(simplex)?;
            Ok(to_value(&TopologyGleaf.restrict(&t, &function(map, &t.carrier())?)?))
        }
        Instance::Broken => unreachable!("rejected by instance()"),
    }
}

fn counterexample(which: Which, seed: u64, samples: usize) -> CliResult<Outcome> {
    let (certified, value) = match which {
        Which::SpanHorn => {
            let spans = Spans::new(FinLattice::diamond());
            let l = spans.lattice();
            let (a, b, c) = diamond_horn(l)?;
            let searched = spans.enumerate(3).len();
            let with_two_faces = fillers(&spans, 3, &[(0, a.clone()), (1, b.clone())])?.len();
            let with_three_faces = fillers(&spans, 3, &[(0, a.clone()), (1, b.clone()), (3, c.clone())])?.len();
            let value = json!({
                "counterexample": "span-horn",
                "lattice": l.to_spec(),
                "horn": { "d0": a.to_json(l), "d1": b.to_json(l), "d3": c.to_json(l) },
                "verification": {
                    "three_spans_searched": searched,
                    "fillers_matching_d0_d1": with_two_faces,
                    "fillers_matching_d0_d1_d3": with_three_faces,
                },
            });
            (with_two_faces == 0 && with_three_faces == 0, value)
        }
        Which::MetricHorn => {
            let mut found = Vec::new();
            for symmetric in [true, false] {
                let horn = find_unfillable_horn(&M1::new(symmetric), 10, seed, samples)?;
                let entry = match horn {
                    Some(h) => {
                        let conflicts: Vec<Value> = h
                            .union_data()?
                            .closure_conflicts()
                            .into_iter()
                            .map(|(x, y, given, shortest)| json!({ "from": x, "to": y, "given": given, "shortest_path": shortest }))
                            .collect();
                        json!({ "symmetric": symmetric, "horn": { "d0": h.a, "d1": h.b, "d3": h.c }, "verification": { "extension_exists": conflicts.is_empty(), "shortest_path_conflicts": conflicts } })
                    }
                    None => json!({ "symmetric": symmetric, "horn": null, "attempts": samples }),
                };
                found.push(entry);
            }
            let ok = found.iter().all(|e| e["verification"]["extension_exists"] == json!(false));
            (ok, json!({ "counterexample": "metric-horn", "seed": seed, "results": found }))
        }
        Which::ProbTriple => {
            let pair = |x: &str, y: &str, tuples: &[&[&str]]| uniform_on(&[x, y], &["0", "1"], tuples);
            let corr: &[&[&str]] = &[&["0", "0"], &["1", "1"]];
            let anti: &[&[&str]] = &[&["0", "1"], &["1", "0"]];
            let dists = [pair("a", "b", corr)?, pair("b", "c", corr)?, pair("a", "c", anti)?];
            let mut join = dists[0].support();
            for d in &dists[1..] {
                join = join_unchecked(&join, &d.support())?;
            }
            let verdict = deterministic_joint_exists(&dists)?;
            let value = json!({
                "counterexample": "prob-triple",
                "marginals": dists,
                "verification": { "support_join": join, "support_join_size": join.len(), "verdict": verdict },
            });
            (verdict == Feasibility::Infeasible, value)
        }
        Which::TopologyTriple => {
            let pieces = triangle_pieces();
            let incompatible = incompatible_pairs(&pieces)?;
            let search = common_extension(&pieces)?;
            let value = json!({
                "counterexample": "topology-triple",
                "pieces": pieces,
                "verification": {
                    "pairwise_compatible": incompatible.is_empty(),
                    "topologies_searched": search.candidates,
                    "extension": search.witness,
                },
            });
            (incompatible.is_empty() && search.witness.is_none(), value)
        }
    };
    let mut value = value;
    value["certified"] = json!(certified);
    Ok(if certified { Outcome::Pass(value) } else { Outcome::Fail(value) })
}
