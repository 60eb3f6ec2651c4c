//! Runs the gleaf law checks over every bicovering configuration of the
//! given objects, crossed with the given global sections.

use rayon::prelude::*;
use serde::Serialize;

use super::laws::{self, Side};
use super::{ArrowOf, BicoveringMorphism, BicoveringSystem, Cover, Gleaf, ObjOf};
use crate::compository::laws::LawResult;
use crate::compository::{Failure, Report};
use crate::error::Result;

/// Global sections over one object of the base.
#[derive(Debug, Clone)]
pub struct ObjectSections<O, S> {
    pub object: O,
    pub sections: Vec<S>,
}

/// Objects with their sections, plus the bicovering morphisms used for
/// partial naturality (their targets must be among the objects).
#[derive(Debug, Clone)]
pub struct GleafWorkload<O, A, S> {
    pub objects: Vec<ObjectSections<O, S>>,
    pub morphisms: Vec<BicoveringMorphism<A>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GleafAxiom {
    Identity,
    BackAndForth,
    PartialNaturality,
    Recover,
    TwoStep,
    Associativity,
}

impl GleafAxiom {
    pub const ALL: [GleafAxiom; 6] = [
        GleafAxiom::Identity,
        GleafAxiom::BackAndForth,
        GleafAxiom::PartialNaturality,
        GleafAxiom::Recover,
        GleafAxiom::TwoStep,
        GleafAxiom::Associativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GleafAxiom::Identity => "gleaf_identity",
            GleafAxiom::BackAndForth => "gleaf_back_and_forth",
            GleafAxiom::PartialNaturality => "partial_naturality",
            GleafAxiom::Recover => "recover",
            GleafAxiom::TwoStep => "gleaf_two_step",
            GleafAxiom::Associativity => "gleaf_associativity",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GleafOptions {
    /// At most this many sections per object take part in the partial
    /// naturality check of each morphism.
    pub sections_per_morphism: usize,
    /// At most this many `(a', b')` shrink pairs per bicovering in the
    /// two-step and associativity checks, spread evenly over all pairs.
    pub shrink_pairs_per_cover: usize,
    /// Only check one bicovering per orbit under automorphisms of the
    /// codomain. Exhaustive when each object's sections are closed under
    /// those automorphisms.
    pub canonical_covers: bool,
}

impl Default for GleafOptions {
    fn default() -> Self {
        GleafOptions { sections_per_morphism: usize::MAX, shrink_pairs_per_cover: usize::MAX, canonical_covers: false }
    }
}

struct Configs<A> {
    legs: Vec<(A, Side)>,
    covers: Vec<Cover<A>>,
    shrinks: Vec<(Cover<A>, A, Side)>,
    pairs: Vec<(Cover<A>, A, A)>,
}

fn configs<S: BicoveringSystem>(sys: &S, c: &S::Obj, opts: &GleafOptions) -> Result<Configs<S::Arrow>> {
    let id = sys.identity(c);
    let mut legs = Vec::new();
    for leg in sys.subobjects(c) {
        if sys.is_bicovering(&leg, &id) {
            legs.push((leg.clone(), Side::A));
        }
        if sys.is_bicovering(&id, &leg) {
            legs.push((leg, Side::B));
        }
    }
    let mut covers = sys.covers(c);
    if opts.canonical_covers {
        covers.retain(|cover| sys.is_canonical_cover(cover));
    }
    let mut shrinks = Vec::new();
    let mut pairs = Vec::new();
    for cover in &covers {
        let mut a_side = Vec::new();
        for a2 in sys.subobjects(&sys.dom(&cover.a)) {
            if sys.is_bicovering(&sys.compose(&cover.a, &a2)?, &cover.b) {
                shrinks.push((cover.clone(), a2.clone(), Side::A));
                a_side.push(a2);
            }
        }
        let mut b_side = Vec::new();
        for b2 in sys.subobjects(&sys.dom(&cover.b)) {
            if sys.is_bicovering(&cover.a, &sys.compose(&cover.b, &b2)?) {
                shrinks.push((cover.clone(), b2.clone(), Side::B));
                b_side.push(b2);
            }
        }
        let total = a_side.len() * b_side.len();
        let step = total.div_ceil(opts.shrink_pairs_per_cover.max(1)).max(1);
        for idx in (0..total).step_by(step) {
            pairs.push((cover.clone(), a_side[idx / b_side.len()].clone(), b_side[idx % b_side.len()].clone()));
        }
    }
    Ok(Configs { legs, covers, shrinks, pairs })
}

fn run_items<T: Sync>(items: &[T], check: impl Fn(&T) -> Vec<LawResult> + Sync) -> (usize, Vec<Failure>) {
    let results: Vec<Vec<LawResult>> = items.par_iter().map(|x| check(x)).collect();
    let samples = results.iter().map(Vec::len).sum();
    let failures = results.into_iter().flatten().filter_map(|r| r.err().map(Failure::from)).collect();
    (samples, failures)
}

/// Runs all six gleaf checks and returns one report per check.
pub fn run_gleaf_suite<G>(
    instance: &str,
    g: &G,
    w: &GleafWorkload<ObjOf<G>, ArrowOf<G>, G::Section>,
    opts: &GleafOptions,
) -> Result<Vec<Report>>
where
    G: Gleaf,
{
    let sys = g.system();
    let per_object: Vec<Configs<ArrowOf<G>>> =
        w.objects.iter().map(|o| configs(sys, &o.object, opts)).collect::<Result<_>>()?;
    let items: Vec<(usize, &G::Section)> =
        w.objects.iter().enumerate().flat_map(|(i, o)| o.sections.iter().map(move |s| (i, s))).collect();

    let mut natural_items: Vec<(&BicoveringMorphism<ArrowOf<G>>, &G::Section)> = Vec::new();
    for m in &w.morphisms {
        let c = sys.cod(&m.target.a);
        if let Some(o) = w.objects.iter().find(|o| o.object == c) {
            let step = o.sections.len().div_ceil(opts.sections_per_morphism.max(1)).max(1);
            natural_items.extend(o.sections.iter().step_by(step).map(|s| (m, s)));
        }
    }

    let mut reports = Vec::new();
    for axiom in GleafAxiom::ALL {
        let (samples, failures) = match axiom {
            GleafAxiom::Identity => run_items(&items, |(i, s)| {
                per_object[*i].legs.iter().map(|(leg, side)| laws::check_gleaf_identity(g, s, leg, *side)).collect()
            }),
            GleafAxiom::Recover => run_items(&items, |(i, s)| {
                per_object[*i].covers.iter().map(|c| laws::check_recover(g, c, s)).collect()
            }),
            GleafAxiom::BackAndForth => run_items(&items, |(i, s)| {
                per_object[*i]
                    .shrinks
                    .iter()
                    .map(|(c, shrink, side)| laws::check_gleaf_back_forth(g, c, shrink, *side, s))
                    .collect()
            }),
            GleafAxiom::TwoStep => run_items(&items, |(i, s)| {
                per_object[*i].pairs.iter().map(|(c, a2, b2)| laws::check_two_step_gleaf(g, c, a2, b2, s)).collect()
            }),
            GleafAxiom::Associativity => run_items(&items, |(i, s)| {
                per_object[*i]
                    .pairs
                    .iter()
                    .map(|(c, a2, b2)| laws::check_gleaf_associativity(g, c, a2, b2, s))
                    .collect()
            }),
            GleafAxiom::PartialNaturality => {
                run_items(&natural_items, |(m, s)| vec![laws::check_partial_naturality(g, m, s)])
            }
        };
        reports.push(Report { instance: instance.to_string(), axiom: axiom.name().to_string(), samples, failures });
    }
    Ok(reports)
}
