//! The acceptance battery. Prints one PASS/FAIL line per criterion and fails
//! if any criterion fails. Run with `--nocapture` to see the lines.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gleafkit::compository::Axiom;
use gleafkit::metric::{find_unfillable_horn, M1};
use gleafkit::nerve::{segal_exhaustive, FinCategory, Nerve};
use gleafkit::probability::{deterministic_joint_exists, dist_glue, uniform_on, Dist, Feasibility};
use gleafkit::relational::join_unchecked;
use gleafkit::simplex::verify_simplicial_identities;
use gleafkit::spans::{diamond_horn, fillers, horn_filler_search, FinLattice, Spans};
use gleafkit::suite::{run_suite, Instance, Mode, SuiteConfig, SuiteReport};
use gleafkit::topology::{common_extension, incompatible_pairs, triangle_pieces};
use gleafkit::{Report, Q};

use common::validate_extension_oracle;

const SEED: u64 = 1;
const FULL_SUITE_LIMIT: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

struct Battery {
    passed: usize,
    failed: Vec<u32>,
}

impl Battery {
    fn record(&mut self, id: u32, name: &str, limit: Option<Duration>, elapsed: Duration, outcome: Outcome) {
        let over = limit.is_some_and(|l| elapsed > l);
        let limit_text = limit.map(|l| format!(", limit {:.0?}", l)).unwrap_or_default();
        let (ok, detail) = match outcome {
            Ok(d) if !over => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        println!("{} {id:>2} {name}: {detail} [{elapsed:.2?}{limit_text}]", if ok { "PASS" } else { "FAIL" });
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(id);
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn run(instance: Instance, mode: Mode) -> SuiteReport {
    run_suite(&SuiteConfig::new(instance, mode).with_seed(SEED)).expect("suite configuration is valid")
}

fn summarize<'a>(reports: impl IntoIterator<Item = &'a Report>) -> Outcome {
    let (mut samples, mut failures, mut first) = (0, 0, None);
    for r in reports {
        samples += r.samples;
        failures += r.failures.len();
        if !r.passed() && first.is_none() {
            first = Some(format!("{} / {}", r.instance, r.axiom));
        }
    }
    match first {
        None if samples > 0 => Ok(format!("{samples} checks, 0 failures")),
        None => Err("nothing was checked".into()),
        Some(f) => Err(format!("{failures} failures, first in {f}")),
    }
}

fn axiom_kind(name: &str) -> Option<bool> {
    Axiom::ALL.iter().find(|a| a.name() == name).map(|a| a.is_defining())
}

fn simplicial_identities() -> Outcome {
    let (checked, failures) = verify_simplicial_identities(6).map_err(|e| e.to_string())?;
    if failures.is_empty() {
        Ok(format!("{checked} instances up to n = 6"))
    } else {
        Err(format!("{} of {checked} instances fail, e.g. {}", failures.len(), failures[0].relation))
    }
}

fn segal() -> Outcome {
    let mut pairs = 0;
    for (name, cat) in FinCategory::catalogue() {
        if cat.object_count() > 4 || cat.morphism_count() > 12 {
            continue;
        }
        let s = segal_exhaustive(&Nerve::new(cat), 3).map_err(|e| e.to_string())?;
        if s.failures > 0 {
            return Err(format!("{name}: {} of {} pairs without a unique filler", s.failures, s.pairs));
        }
        pairs += s.pairs;
    }
    Ok(format!("{pairs} composable pairs, each with exactly one filler"))
}

fn diamond_no_filler() -> Outcome {
    let spans = Spans::new(FinLattice::diamond());
    let (a, b, c) = diamond_horn(spans.lattice()).map_err(|e| e.to_string())?;
    let searched = spans.enumerate(3).len();
    let filler = horn_filler_search(&spans, &a, &b, &c).map_err(|e| e.to_string())?;
    let two_faces = fillers(&spans, 3, &[(0, a), (1, b)]).map_err(|e| e.to_string())?;
    match (filler, two_faces.is_empty()) {
        (None, true) => Ok(format!("{searched} 3-spans searched, none matches the first two faces")),
        (Some(_), _) => Err("the horn has a filler".into()),
        (None, false) => Err(format!("{} 3-spans match the first two faces", two_faces.len())),
    }
}

fn counterexamples() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (yes, no) = validate_extension_oracle(&mut rng, 60)?;
    if yes == 0 || no == 0 {
        return Err("the oracle validation did not see both outcomes".into());
    }
    let horn = find_unfillable_horn(&M1::new(true), 10, SEED, 1000)
        .map_err(|e| e.to_string())?
        .ok_or("no unfillable metric horn within 1000 attempts")?;
    let conflicts = horn.union_data().map_err(|e| e.to_string())?.closure_conflicts();
    if conflicts.is_empty() {
        return Err("the metric horn has an extension".into());
    }

    let pair = |x, y, tuples: &[&[&str]]| uniform_on(&[x, y], &["0", "1"], tuples);
    let corr: &[&[&str]] = &[&["0", "0"], &["1", "1"]];
    let anti: &[&[&str]] = &[&["0", "1"], &["1", "0"]];
    let dists = [pair("a", "b", corr), pair("b", "c", corr), pair("a", "c", anti)]
        .into_iter()
        .collect::<gleafkit::Result<Vec<Dist>>>()
        .map_err(|e| e.to_string())?;
    let mut join = dists[0].support();
    for d in &dists[1..] {
        join = join_unchecked(&join, &d.support()).map_err(|e| e.to_string())?;
    }
    let verdict = deterministic_joint_exists(&dists).map_err(|e| e.to_string())?;
    if !join.is_empty() || verdict != Feasibility::Infeasible {
        return Err(format!("probability triple: support join has {} rows, verdict {verdict:?}", join.len()));
    }

    let pieces = triangle_pieces();
    let search = common_extension(&pieces).map_err(|e| e.to_string())?;
    let incompatible = incompatible_pairs(&pieces).map_err(|e| e.to_string())?;
    if search.candidates != 29 || search.witness.is_some() || !incompatible.is_empty() {
        return Err(format!("topology triple: {search:?}, incompatible pairs {incompatible:?}"));
    }
    Ok(format!(
        "oracle agrees with brute force ({yes} extendable, {no} not); metric horn has {} shortest-path conflicts; \
         probability support join is empty; none of the 29 topologies extends the triangle",
        conflicts.len()
    ))
}

fn exact_arithmetic(full_suite: Duration) -> Outcome {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("src");
    let mut offenders = Vec::new();
    let mut stack = vec![src];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "rs") {
                let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
                let floaty = text.split(|c: char| !c.is_alphanumeric() && c != '_').any(|w| w == "f32" || w == "f64");
                if floaty {
                    offenders.push(path.display().to_string());
                }
            }
        }
    }
    if !offenders.is_empty() {
        return Err(format!("floating-point types in {offenders:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let outcomes: Vec<String> = (0..3).map(|o| o.to_string()).collect();
    let vars = gleafkit::finset::ordinal(4);
    let one = Q::from_integer(1.into());
    for _ in 0..200 {
        let joint = Dist::random(&mut rng, vars.clone(), &outcomes);
        let a = gleafkit::finset::labels(["0", "1", "2"]);
        let b = gleafkit::finset::labels(["2", "3", "4"]);
        let glued = dist_glue(&joint.marginal(&a).unwrap(), &joint.marginal(&b).unwrap()).map_err(|e| e.to_string())?;
        let total: Q = glued.to_spec().w.values().map(|v| gleafkit::rational::parse_q(v).expect("rational")).sum();
        if total != one {
            return Err(format!("a glued distribution sums to {total}"));
        }
    }
    if full_suite > FULL_SUITE_LIMIT {
        return Err(format!("the full battery took {full_suite:.1?}"));
    }
    Ok("no floating-point types in core; 200 glued distributions sum to exactly 1".into())
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut battery = Battery { passed: 0, failed: Vec::new() };

    let (outcome, t) = timed(simplicial_identities);
    battery.record(1, "simplicial identities", Some(Duration::from_secs(1)), t, outcome);

    let (compository, t_comp) = timed(|| {
        [Instance::Nerve, Instance::Spans, Instance::Metric, Instance::Probability].map(|i| run(i, Mode::Compository))
    });
    let reports = || compository.iter().flat_map(|r| &r.reports);
    let defining = summarize(reports().filter(|r| axiom_kind(&r.axiom) == Some(true)));
    battery.record(2, "compository axioms", Some(Duration::from_secs(60)), t_comp, defining);
    let derived = summarize(reports().filter(|r| axiom_kind(&r.axiom) == Some(false)));
    battery.record(3, "derived laws", Some(Duration::from_secs(60)), t_comp, derived);

    let nerve_scans = &compository[0].facenot;
    let metric_scans = &compository[2].facenot;
    let nerve_cases: usize = nerve_scans.iter().map(|(_, s)| s.cases).sum();
    let nerve_violations: usize = nerve_scans.iter().map(|(_, s)| s.violations).sum();
    let metric_pairs = compository[2].config.samples.unwrap_or(gleafkit::suite::DEFAULT_SAMPLES);
    let metric_violations: usize = metric_scans.iter().map(|(_, s)| s.violations).sum();
    let facenot = if nerve_cases == 0 || nerve_violations > 0 {
        Err(format!("{nerve_violations} of {nerve_cases} nerve cases violate the common-face condition"))
    } else if metric_pairs > 1000 || metric_violations == 0 {
        Err(format!("no metric violation among {metric_pairs} pairs"))
    } else {
        Ok(format!(
            "{nerve_cases} nerve cases hold; {metric_violations} metric violations within {metric_pairs} pairs"
        ))
    };
    battery.record(4, "common-face discrimination", None, Duration::ZERO, facenot);

    let (outcome, t) = timed(segal);
    battery.record(5, "Segal uniqueness", None, t, outcome);

    let (outcome, t) = timed(diamond_no_filler);
    battery.record(6, "diamond horn", Some(Duration::from_secs(5)), t, outcome);

    let (gleaves, t) = timed(|| {
        [Instance::Metric, Instance::Probability, Instance::Relational, Instance::Topology].map(|i| run(i, Mode::Gleaf))
    });
    battery.record(7, "gleaf axioms", None, t, summarize(gleaves.iter().flat_map(|r| &r.reports)));

    let (outcome, t) = timed(|| -> Outcome {
        let agreed = round_trip::compose_agreement(200)?;
        let delta = [Instance::Nerve, Instance::Spans].map(|i| run(i, Mode::Gleaf));
        summarize(delta.iter().flat_map(|r| &r.reports)).map(|s| format!("{agreed}; Δ-gleaves of nerves and spans: {s}"))
    });
    battery.record(8, "Δ round trip", None, t, outcome);

    let (outcome, t) = timed(counterexamples);
    battery.record(9, "counterexample battery", None, t, outcome);

    let elapsed = start.elapsed();
    let (outcome, t) = timed(|| exact_arithmetic(elapsed));
    battery.record(10, "exact arithmetic", Some(FULL_SUITE_LIMIT), elapsed + t, outcome);

    println!("{} of 10 criteria pass", battery.passed);
    assert!(battery.failed.is_empty(), "failed criteria: {:?}", battery.failed);
}

mod round_trip {
    use gleafkit::compository::random_workload;
    use gleafkit::gleaf::{delta_gleaf_to_compository, DeltaBaseChange};
    use gleafkit::metric::{MetricGleaf, M1};
    use gleafkit::probability::{ProbGleaf, PO};
    use gleafkit::Compository;

    /// Composes 200 pairs per instance directly and through the Δ-gleaf.
    pub fn compose_agreement(pairs: usize) -> Result<String, String> {
        let err = |e: gleafkit::Error| e.to_string();
        let po = PO::with_size(2).map_err(err)?;
        let w = random_workload(&po, |n, r| Ok(po.sample(n, r)), pairs, 3, 0, super::SEED).map_err(err)?;
        let via = delta_gleaf_to_compository(DeltaBaseChange(ProbGleaf));
        for p in &w.pairs {
            if po.compose(&p.a, p.k, &p.b).map_err(err)? != via.compose(&p.a, p.k, &p.b).map_err(err)? {
                return Err(format!("probability composites differ at k = {}", p.k));
            }
        }
        for symmetric in [true, false] {
            let m1 = M1::new(symmetric);
            let w = random_workload(&m1, |n, r| Ok(m1.sample(n, r)), pairs, 4, 0, super::SEED).map_err(err)?;
            let via = delta_gleaf_to_compository(DeltaBaseChange(MetricGleaf::new(symmetric)));
            for p in &w.pairs {
                if m1.compose(&p.a, p.k, &p.b).map_err(err)? != via.compose(&p.a, p.k, &p.b).map_err(err)? {
                    return Err(format!("metric composites differ at k = {}", p.k));
                }
            }
        }
        Ok(format!("{pairs} probability and 2 x {pairs} metric pairs agree"))
    }
}
