//! Configured suite runs, one per instance. The command-line tool and the
//! acceptance tests both go through [`run_suite`].

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compository::{
    exhaustive_workload, facenot_scan, random_workload, run_compository_suite, Compository, FacenotScan, Failure, Report,
    SimplicialSet, SuiteOptions,
};
use crate::error::{bail, Error, Result};
use crate::finset::{FinSet, Label};
use crate::gleaf::{
    compository_to_delta_gleaf, delta_generator_morphisms, finset_morphisms, random_finset_morphism, run_gleaf_suite,
    BicoveringMorphism, GleafOptions, GleafWorkload, ObjectSections,
};
use crate::metric::{random_metric, FiniteMetric, MetricGleaf, M1};
use crate::nerve::{segal_exhaustive, FinCategory, Nerve};
use crate::probability::{Dist, ProbGleaf, PO};
use crate::relational::{uniform_schema, Relation, RelationGleaf};
use crate::simplex::MonotoneMap;
use crate::spans::{FinLattice, Spans};
use crate::topology::{all_topologies, TopologyGleaf};
use crate::FinMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instance {
    Nerve,
    Spans,
    Metric,
    Probability,
    Relational,
    Topology,
    /// A deliberately wrong composition, for checking that failures surface.
    Broken,
}

impl Instance {
    pub const ALL: [Instance; 7] = [
        Instance::Nerve,
        Instance::Spans,
        Instance::Metric,
        Instance::Probability,
        Instance::Relational,
        Instance::Topology,
        Instance::Broken,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Instance::Nerve => "nerve",
            Instance::Spans => "spans",
            Instance::Metric => "metric",
            Instance::Probability => "probability",
            Instance::Relational => "relational",
            Instance::Topology => "topology",
            Instance::Broken => "broken",
        }
    }

    pub fn has_compository(self) -> bool {
        !matches!(self, Instance::Relational | Instance::Topology)
    }

    pub fn has_gleaf(self) -> bool {
        self != Instance::Broken
    }

    /// Default and largest `dims` for the compository and gleaf suites. For
    /// gleaf suites on finite sets, carriers have at most `dims + 1` points.
    fn dims(self, mode: Mode) -> (usize, usize) {
        match (self, mode) {
            (Instance::Nerve, _) => (4, 5),
            (Instance::Spans, _) => (3, 3),
            (Instance::Metric, Mode::Gleaf) => (5, 6),
            (Instance::Metric, _) => (4, 6),
            (Instance::Probability, Mode::Gleaf) => (4, 4),
            (Instance::Probability, _) => (3, 4),
            (Instance::Relational, _) => (2, 2),
            (Instance::Topology, _) => (3, 3),
            (Instance::Broken, _) => (2, 4),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Instance::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown instance {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Compository,
    Gleaf,
    #[default]
    Both,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compository" => Ok(Mode::Compository),
            "gleaf" => Ok(Mode::Gleaf),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// What to check. Unset fields take per-instance defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub instance: Instance,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub dims: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    1
}

pub const DEFAULT_SAMPLES: usize = 500;
const MAX_SAMPLES: usize = 100_000;

impl SuiteConfig {
    pub fn new(instance: Instance, mode: Mode) -> Self {
        SuiteConfig { instance, mode, dims: None, samples: None, seed: default_seed() }
    }

    pub fn with_dims(self, dims: usize) -> Self {
        SuiteConfig { dims: Some(dims), ..self }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        SuiteConfig { samples: Some(samples), ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SuiteConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let i = self.instance;
        match self.mode {
            Mode::Compository if !i.has_compository() => bail!(Domain, "{i} has no compository suite"),
            Mode::Gleaf if !i.has_gleaf() => bail!(Domain, "{i} has no gleaf suite"),
            _ => {}
        }
        if let Some(d) = self.dims {
            for mode in self.modes() {
                let (_, max) = i.dims(mode);
                if d > max {
                    bail!(Domain, "dims = {d} exceeds the cap {max} for the {i} {} suite", mode_name(mode));
                }
            }
        }
        if self.samples.is_some_and(|s| s == 0 || s > MAX_SAMPLES) {
            bail!(Domain, "samples must be between 1 and {MAX_SAMPLES}");
        }
        Ok(())
    }

    fn modes(&self) -> Vec<Mode> {
        let i = self.instance;
        match self.mode {
            Mode::Both => [Mode::Compository, Mode::Gleaf]
                .into_iter()
                .filter(|&m| if m == Mode::Gleaf { i.has_gleaf() } else { i.has_compository() })
                .collect(),
            m => vec![m],
        }
    }

    fn dims_for(&self, mode: Mode) -> usize {
        self.dims.unwrap_or(self.instance.dims(mode).0)
    }

    fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Compository => "compository",
        Mode::Gleaf => "gleaf",
        Mode::Both => "both",
    }
}

/// The reports of one configured run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub samples: usize,
    pub failures: usize,
    pub reports: Vec<Report>,
    /// The common-face condition, which only nerves are expected to satisfy;
    /// it does not count towards `failures`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub facenot: Vec<(String, FacenotScan)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs every suite that `config` selects.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut reports = Vec::new();
    let mut facenot = Vec::new();
    for mode in config.modes() {
        let dims = config.dims_for(mode);
        match (config.instance, mode) {
            (Instance::Nerve, Mode::Compository) => nerve_compository(dims, &mut reports, &mut facenot)?,
            (Instance::Nerve, _) => {
                for (name, cat) in FinCategory::catalogue() {
                    let nerve = Nerve::new(cat);
                    let sections = |j| nerve.paths(j);
                    reports.extend(delta_gleaf(&format!("nerve/{name}"), nerve.clone(), dims, sections)?);
                }
            }
            (Instance::Spans, Mode::Compository) => {
                for (name, spans) in span_instances() {
                    let w = exhaustive_workload(&spans, |n| spans.enumerate(n), dims)?;
                    reports.extend(run_compository_suite(&format!("spans/{name}"), &spans, &w, &SuiteOptions::default()));
                }
            }
            (Instance::Spans, _) => {
                for (name, spans) in span_instances() {
                    let sections = |j| spans.enumerate(j);
                    reports.extend(delta_gleaf(&format!("spans/{name}"), spans.clone(), dims, sections)?);
                }
            }
            (Instance::Metric, Mode::Compository) => {
                for symmetric in [true, false] {
                    let m1 = M1::new(symmetric);
                    let name = metric_name(symmetric);
                    let w = random_workload(&m1, |n, r| Ok(m1.sample(n, r)), config.samples(), dims, dims.min(3), config.seed)?;
                    reports.extend(run_compository_suite(&name, &m1, &w, &SuiteOptions::default()));
                    facenot.push((name, facenot_scan(&m1, &w.pairs)));
                }
            }
            (Instance::Metric, _) => {
                for symmetric in [true, false] {
                    let g = MetricGleaf::new(symmetric);
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    let per = sections_per_object(config);
                    let w = finset_workload(dims + 1, per, config.seed, &mut rng, |rng, c| random_metric(rng, c.clone(), symmetric, true))?;
                    reports.extend(run_gleaf_suite(&metric_name(symmetric), &g, &w, &random_gleaf_options())?);
                }
            }
            (Instance::Probability, Mode::Compository) => {
                let po = PO::with_size(2)?;
                let w = random_workload(&po, |n, r| Ok(po.sample(n, r)), config.samples(), dims, dims.min(2), config.seed)?;
                reports.extend(run_compository_suite("probability/O=2", &po, &w, &SuiteOptions::default()));
            }
            (Instance::Probability, _) => {
                for size in [2, 3] {
                    let outcomes: Vec<String> = (0..size).map(|o| o.to_string()).collect();
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    let per = sections_per_object(config).div_ceil(size - 1);
                    let w = finset_workload(dims + 1, per, config.seed, &mut rng, |rng, c| Dist::random(rng, c.clone(), &outcomes))?;
                    reports.extend(run_gleaf_suite(&format!("probability/O={size}"), &ProbGleaf, &w, &random_gleaf_options())?);
                }
            }
            (Instance::Relational, _) => reports.extend(relational_gleaf(dims + 1, config)?),
            (Instance::Topology, _) => {
                let objects = (0..=dims + 1)
                    .map(|k| {
                        let c = finite(k);
                        Ok(ObjectSections { sections: all_topologies(&c)?, object: c })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let w = GleafWorkload { objects, morphisms: morphisms_up_to(dims + 1, config.seed)? };
                let opts = GleafOptions { canonical_covers: true, ..GleafOptions::default() };
                reports.extend(run_gleaf_suite("topology", &TopologyGleaf, &w, &opts)?);
            }
            (Instance::Broken, _) => {
                let broken = DoubledMetric(M1::new(true));
                let w = random_workload(&broken, |n, r| Ok(broken.0.sample(n, r)), config.samples(), dims, dims.min(2), config.seed)?;
                reports.extend(run_compository_suite("broken", &broken, &w, &SuiteOptions::default()));
            }
        }
    }
    Ok(SuiteReport {
        config: config.clone(),
        samples: reports.iter().map(|r| r.samples).sum(),
        failures: reports.iter().map(|r| r.failures.len()).sum(),
        reports,
        facenot,
    })
}

fn metric_name(symmetric: bool) -> String {
    if symmetric { "metric/symmetric" } else { "metric/directed" }.to_string()
}

fn finite(k: usize) -> FinSet {
    (0..k).map(Label::from).collect()
}

fn span_instances() -> Vec<(&'static str, Spans)> {
    vec![("diamond", Spans::new(FinLattice::diamond())), ("chain3", Spans::new(FinLattice::chain(3)))]
}

fn nerve_compository(dims: usize, reports: &mut Vec<Report>, facenot: &mut Vec<(String, FacenotScan)>) -> Result<()> {
    for (name, cat) in FinCategory::catalogue() {
        let nerve = Nerve::new(cat);
        let instance = format!("nerve/{name}");
        let w = exhaustive_workload(&nerve, |n| nerve.paths(n), dims)?;
        reports.extend(run_compository_suite(&instance, &nerve, &w, &SuiteOptions::default()));
        let segal = segal_exhaustive(&nerve, dims.min(3))?;
        let failures = (0..segal.failures)
            .map(|_| Failure {
                law: "segal_uniqueness".into(),
                input: serde_json::Value::Null,
                lhs: serde_json::Value::Null,
                rhs: serde_json::Value::Null,
            })
            .collect();
        reports.push(Report { instance: instance.clone(), axiom: "segal_uniqueness".into(), samples: segal.pairs, failures });
        facenot.push((instance, facenot_scan(&nerve, &w.pairs)));
    }
    Ok(())
}

/// Runs the gleaf suite of a compository viewed as a gleaf on Δ, with every
/// simplex of dimension at most `dims` and the face and degeneracy morphisms.
fn delta_gleaf<C, F>(instance: &str, c: C, dims: usize, sections: F) -> Result<Vec<Report>>
where
    C: Compository + Sync,
    F: Fn(usize) -> Vec<C::Simplex>,
{
    let objects = (0..=dims).map(|j| ObjectSections { object: j, sections: sections(j) }).collect();
    let w = GleafWorkload { objects, morphisms: delta_generator_morphisms(dims)? };
    let opts = GleafOptions { sections_per_morphism: 64, shrink_pairs_per_cover: usize::MAX, canonical_covers: false };
    run_gleaf_suite(instance, &compository_to_delta_gleaf(c), &w, &opts)
}

fn random_gleaf_options() -> GleafOptions {
    GleafOptions { sections_per_morphism: 4, shrink_pairs_per_cover: 16, canonical_covers: true }
}

/// Every bicovering morphism between sets of at most three points, plus a
/// few seeded random ones between larger sets.
fn morphisms_up_to(max_size: usize, seed: u64) -> Result<Vec<BicoveringMorphism<FinMap>>> {
    static SMALL: OnceLock<Vec<BicoveringMorphism<FinMap>>> = OnceLock::new();
    let small = match SMALL.get() {
        Some(m) => m,
        None => {
            let computed = finset_morphisms(3, 3)?;
            SMALL.get_or_init(|| computed)
        }
    };
    let mut out: Vec<_> = small
        .iter()
        .filter(|m| m.source.a.cod().len() <= max_size && m.target.a.cod().len() <= max_size)
        .cloned()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for target in 4..=max_size {
        for source in 1..=max_size {
            for _ in 0..4 {
                out.extend(random_finset_morphism(&mut rng, source, target, 40));
            }
        }
    }
    Ok(out)
}

/// Sections per object for randomized gleaf suites.
fn sections_per_object(config: &SuiteConfig) -> usize {
    config.samples().div_ceil(50).max(2)
}

fn finset_workload<S>(
    max_size: usize,
    per: usize,
    seed: u64,
    rng: &mut ChaCha8Rng,
    sample: impl Fn(&mut ChaCha8Rng, &FinSet) -> S,
) -> Result<GleafWorkload<FinSet, FinMap, S>> {
    let objects = (0..=max_size)
        .map(|k| {
            let c = finite(k);
            ObjectSections { sections: (0..per).map(|_| sample(rng, &c)).collect(), object: c }
        })
        .collect();
    Ok(GleafWorkload { objects, morphisms: morphisms_up_to(max_size, seed)? })
}

/// Relations over a common domain, every one of them where that is small
/// enough, and seeded random ones otherwise.
fn relational_gleaf(max_attrs: usize, config: &SuiteConfig) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    for domain in [&["a", "b"][..], &["a", "b", "c"]] {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut objects = Vec::new();
        let mut exhaustive = true;
        for k in 0..=max_attrs {
            let c = finite(k);
            let schema = uniform_schema(c.iter().cloned(), domain);
            let space = domain.len().pow(k as u32);
            let sections = if space <= 9 {
                Relation::all(&schema)
            } else {
                exhaustive = false;
                (0..sections_per_object(config) * 4).map(|_| Relation::random(&mut rng, &schema, 1, 2)).collect()
            };
            objects.push(ObjectSections { object: c, sections });
        }
        let w = GleafWorkload { objects, morphisms: morphisms_up_to(max_attrs, config.seed)? };
        let opts = GleafOptions { canonical_covers: true, sections_per_morphism: 32, ..GleafOptions::default() };
        let name = format!("relational/D={}{}", domain.len(), if exhaustive { "" } else { "/sampled" });
        reports.extend(run_gleaf_suite(&name, &RelationGleaf, &w, &opts)?);
    }
    Ok(reports)
}

/// The symmetric metric compository with every composite scaled by two.
/// Its composites no longer restrict to their inputs.
#[derive(Debug, Clone)]
pub struct DoubledMetric(pub M1);

impl SimplicialSet for DoubledMetric {
    type Simplex = FiniteMetric;

    fn dim(&self, a: &FiniteMetric) -> usize {
        self.0.dim(a)
    }

    fn act(&self, a: &FiniteMetric, f: &MonotoneMap) -> Result<FiniteMetric> {
        self.0.act(a, f)
    }
}

impl Compository for DoubledMetric {
    fn compose(&self, a: &FiniteMetric, k: usize, b: &FiniteMetric) -> Result<FiniteMetric> {
        let c = self.0.compose(a, k, b)?;
        FiniteMetric::from_fn(c.points().to_vec(), c.symmetric(), |x, y| {
            let d = c.dist(x, y).expect("point of the composite");
            d + d
        })
    }
}
