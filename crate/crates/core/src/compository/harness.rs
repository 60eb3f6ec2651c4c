//! Runs the compository law checks over enumerated or sampled inputs and
//! collects JSON-serializable reports.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::laws::{self, LawFailure, LawResult, Violation};
use super::Compository;
use crate::error::Result;
use crate::simplex::MonotoneMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCase<S> {
    pub a: S,
    pub k: usize,
    pub b: S,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleCase<S> {
    pub a: S,
    pub j: usize,
    pub b: S,
    pub k: usize,
    pub c: S,
}

/// Inputs for one suite run.
#[derive(Debug, Clone, Default)]
pub struct Workload<S> {
    pub singles: Vec<S>,
    pub pairs: Vec<PairCase<S>>,
    pub triples: Vec<TripleCase<S>>,
}

impl<S> Workload<S> {
    pub fn len(&self) -> usize {
        self.singles.len() + self.pairs.len() + self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub law: String,
    pub input: Value,
    pub lhs: Value,
    pub rhs: Value,
}

impl From<LawFailure> for Failure {
    fn from(f: LawFailure) -> Self {
        match f {
            LawFailure::Violation(Violation { law, input, lhs, rhs }) => Failure { law, input, lhs, rhs },
            LawFailure::Precondition(e) => Failure {
                law: "precondition".into(),
                input: Value::Null,
                lhs: Value::String(e.to_string()),
                rhs: Value::Null,
            },
        }
    }
}

/// Outcome of one axiom over one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub instance: String,
    pub axiom: String,
    pub samples: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Identity,
    BackAndForth,
    Degeneracy,
    Face,
    SourceTarget,
    TwoStep,
    StComp,
    HigherIdentity,
    Associativity,
    Functoriality,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::Identity,
        Axiom::BackAndForth,
        Axiom::Degeneracy,
        Axiom::Face,
        Axiom::SourceTarget,
        Axiom::TwoStep,
        Axiom::StComp,
        Axiom::HigherIdentity,
        Axiom::Associativity,
        Axiom::Functoriality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Identity => "identity",
            Axiom::BackAndForth => "back_and_forth",
            Axiom::Degeneracy => "degeneracy_compat",
            Axiom::Face => "face_compat",
            Axiom::SourceTarget => "source_target",
            Axiom::TwoStep => "two_step",
            Axiom::StComp => "st_comp",
            Axiom::HigherIdentity => "higher_identity",
            Axiom::Associativity => "associativity",
            Axiom::Functoriality => "functoriality",
        }
    }

    /// The five defining axiom groups, as opposed to derived laws.
    pub fn is_defining(self) -> bool {
        matches!(
            self,
            Axiom::Identity | Axiom::BackAndForth | Axiom::Degeneracy | Axiom::Face | Axiom::Functoriality
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Largest domain/codomain used when checking functoriality of the action.
    pub functoriality_max_dim: usize,
    /// How many singles per dimension take part in the functoriality check.
    pub functoriality_per_dim: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { functoriality_max_dim: 3, functoriality_per_dim: 2 }
    }
}

/// A simplex `D` of dimension `a_len + ... ` restricted to the interval
/// starting at `start` of length `len`.
fn interval_face<C: Compository + ?Sized>(c: &C, d: &C::Simplex, start: usize, len: usize) -> Result<C::Simplex> {
    c.act(d, &MonotoneMap::interval(start, len, c.dim(d))?)
}

/// Builds a workload from seeded random simplices. Pairs and triples are cut
/// out of a random simplex of the combined dimension, so they are composable
/// by construction.
pub fn random_workload<C, F>(
    c: &C,
    sample: F,
    samples: usize,
    max_dim: usize,
    triple_max_dim: usize,
    seed: u64,
) -> Result<Workload<C::Simplex>>
where
    C: Compository + ?Sized,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<C::Simplex>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Workload { singles: Vec::new(), pairs: Vec::new(), triples: Vec::new() };
    for s in 0..samples {
        w.singles.push(sample(s % (max_dim + 1), &mut rng)?);
    }
    for _ in 0..samples {
        let m = rng.random_range(0..=max_dim);
        let n = rng.random_range(0..=max_dim);
        let k = rng.random_range(0..=m.min(n));
        let d = sample(m + n - k, &mut rng)?;
        let a = interval_face(c, &d, 0, m)?;
        let b = interval_face(c, &d, m - k, n)?;
        w.pairs.push(PairCase { a, k, b });
    }
    for _ in 0..samples.div_ceil(2) {
        let l = rng.random_range(0..=triple_max_dim);
        let m = rng.random_range(0..=triple_max_dim);
        let n = rng.random_range(0..=triple_max_dim);
        let j = rng.random_range(0..=l.min(m));
        let k = rng.random_range(0..=m.min(n));
        let d = sample(l + m + n - j - k, &mut rng)?;
        let a = interval_face(c, &d, 0, l)?;
        let b = interval_face(c, &d, l - j, m)?;
        let cc = interval_face(c, &d, l - j + m - k, n)?;
        w.triples.push(TripleCase { a, j, b, k, c: cc });
    }
    Ok(w)
}

/// Builds a workload from every simplex of dimension at most `max_dim`.
/// Pairs and triples are all composable inputs whose composite also has
/// dimension at most `max_dim`.
pub fn exhaustive_workload<C, F>(c: &C, enumerate: F, max_dim: usize) -> Result<Workload<C::Simplex>>
where
    C: Compository + ?Sized,
    F: Fn(usize) -> Vec<C::Simplex>,
{
    let by_dim: Vec<Vec<C::Simplex>> = (0..=max_dim).map(&enumerate).collect();
    let mut w = Workload {
        singles: by_dim.iter().flatten().cloned().collect(),
        pairs: Vec::new(),
        triples: Vec::new(),
    };
    // Right-hand simplices of dimension n indexed by their initial k-face.
    let mut index: HashMap<(usize, usize), HashMap<C::Simplex, Vec<&C::Simplex>>> = HashMap::new();
    for n in 0..=max_dim {
        for k in 0..=n {
            let mut by_face: HashMap<C::Simplex, Vec<&C::Simplex>> = HashMap::new();
            for b in &by_dim[n] {
                by_face.entry(c.source_face(b, k)?).or_default().push(b);
            }
            index.insert((n, k), by_face);
        }
    }
    let partners = |a: &C::Simplex, k: usize, n: usize| -> Result<Vec<&C::Simplex>> {
        let face = c.target_face(a, k)?;
        Ok(index[&(n, k)].get(&face).cloned().unwrap_or_default())
    };
    for m in 0..=max_dim {
        for n in 0..=max_dim {
            for k in (m + n).saturating_sub(max_dim)..=m.min(n) {
                for a in &by_dim[m] {
                    for b in partners(a, k, n)? {
                        w.pairs.push(PairCase { a: a.clone(), k, b: b.clone() });
                    }
                }
            }
        }
    }
    for l in 0..=max_dim {
        for m in 0..=max_dim {
            for j in (l + m).saturating_sub(max_dim)..=l.min(m) {
                let lm = l + m - j;
                for a in &by_dim[l] {
                    for b in partners(a, j, m)? {
                        for n in 0..=max_dim {
                            for k in (lm + n).saturating_sub(max_dim)..=m.min(n) {
                                for cc in partners(b, k, n)? {
                                    w.triples.push(TripleCase { a: a.clone(), j, b: b.clone(), k, c: cc.clone() });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(w)
}

fn collect_failures<T, F>(items: &[T], check: F) -> (usize, Vec<Failure>)
where
    T: Sync,
    F: Fn(&T) -> Vec<LawResult> + Sync,
{
    let results: Vec<Vec<LawResult>> = items.par_iter().map(|x| check(x)).collect();
    let samples = results.iter().map(Vec::len).sum();
    let failures = results
        .into_iter()
        .flatten()
        .filter_map(|r| r.err().map(Failure::from))
        .collect();
    (samples, failures)
}

/// Runs every axiom and derived law over the workload.
pub fn run_compository_suite<C>(
    instance: &str,
    c: &C,
    w: &Workload<C::Simplex>,
    opts: &SuiteOptions,
) -> Vec<Report>
where
    C: Compository + Sync + ?Sized,
{
    Axiom::ALL
        .iter()
        .map(|&axiom| {
            let (samples, failures) = run_axiom(c, w, opts, axiom);
            Report { instance: instance.to_string(), axiom: axiom.name().to_string(), samples, failures }
        })
        .collect()
}

fn run_axiom<C>(c: &C, w: &Workload<C::Simplex>, opts: &SuiteOptions, axiom: Axiom) -> (usize, Vec<Failure>)
where
    C: Compository + Sync + ?Sized,
{
    match axiom {
        Axiom::Identity => collect_failures(&w.singles, |a| {
            (0..=c.dim(a)).map(|k| laws::check_identity_axiom(c, a, k)).collect()
        }),
        Axiom::HigherIdentity => collect_failures(&w.singles, |a| {
            (0..=c.dim(a)).map(|k| laws::check_higher_identity(c, a, k)).collect()
        }),
        Axiom::BackAndForth => collect_failures(&w.pairs, |p| {
            let (m, n) = (c.dim(&p.a), c.dim(&p.b));
            let mut out = Vec::new();
            for i in 0..=n - p.k {
                for j in 0..=m - p.k {
                    out.push(laws::check_back_and_forth(c, &p.a, p.k, &p.b, i, j));
                }
            }
            out
        }),
        Axiom::Degeneracy => collect_failures(&w.pairs, |p| {
            let top = c.dim(&p.a) + c.dim(&p.b) - p.k;
            (0..=top).map(|i| laws::check_degeneracy_compat(c, &p.a, p.k, &p.b, i)).collect()
        }),
        Axiom::Face => collect_failures(&w.pairs, |p| {
            let (m, n) = (c.dim(&p.a), c.dim(&p.b));
            (0..=m + n - p.k)
                .filter(|&i| i + p.k < m || i > m)
                .map(|i| laws::check_face_compat(c, &p.a, p.k, &p.b, i))
                .collect()
        }),
        Axiom::SourceTarget => {
            collect_failures(&w.pairs, |p| vec![laws::check_source_target(c, &p.a, p.k, &p.b)])
        }
        Axiom::TwoStep => collect_failures(&w.pairs, |p| {
            let (m, n) = (c.dim(&p.a), c.dim(&p.b));
            let mut out = Vec::new();
            for i in p.k..=m {
                for j in p.k..=n {
                    out.push(laws::check_two_step(c, &p.a, p.k, &p.b, i, j));
                }
            }
            out
        }),
        Axiom::StComp => collect_failures(&w.pairs, |p| {
            let (m, n) = (c.dim(&p.a), c.dim(&p.b));
            let top = m + n - p.k;
            let mut out = Vec::new();
            for i in m..=top {
                for j in n..=top {
                    out.push(laws::check_st_comp(c, &p.a, p.k, &p.b, i, j));
                }
            }
            out
        }),
        Axiom::Associativity => collect_failures(&w.triples, |t| {
            vec![laws::check_associativity(c, &t.a, t.j, &t.b, t.k, &t.c)]
        }),
        Axiom::Functoriality => {
            let mut per_dim: HashMap<usize, usize> = HashMap::new();
            let chosen: Vec<&C::Simplex> = w
                .singles
                .iter()
                .filter(|a| {
                    let d = c.dim(a);
                    let seen = per_dim.entry(d).or_default();
                    *seen += 1;
                    d <= opts.functoriality_max_dim && *seen <= opts.functoriality_per_dim
                })
                .collect();
            let max = opts.functoriality_max_dim;
            collect_failures(&chosen, |a| {
                let n = c.dim(a);
                let mut out = Vec::new();
                for p in 0..=max {
                    for g in MonotoneMap::all(p, n) {
                        for q in 0..=max {
                            for f in MonotoneMap::all(q, p) {
                                out.push(laws::check_functoriality(c, a, &g, &f));
                            }
                        }
                    }
                }
                out
            })
        }
    }
}

/// Summary of the common-face condition over a set of pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacenotScan {
    pub cases: usize,
    pub violations: usize,
    pub first_violation: Option<Failure>,
}

/// Evaluates the common-face condition on every pair and every index
/// `m - k <= i <= m` (pairs with `k = 0` contribute nothing).
pub fn facenot_scan<C>(c: &C, pairs: &[PairCase<C::Simplex>]) -> FacenotScan
where
    C: Compository + Sync + ?Sized,
{
    let (cases, failures) = collect_failures(pairs, |p| {
        let m = c.dim(&p.a);
        if p.k == 0 {
            return Vec::new();
        }
        (m - p.k..=m).map(|i| laws::check_facenot(c, &p.a, p.k, &p.b, i)).collect()
    });
    FacenotScan { cases, violations: failures.len(), first_violation: failures.into_iter().next() }
}
