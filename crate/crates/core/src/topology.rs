//! Topologies on finite sets and their gleaf.
//!
//! Open sets are bitmasks over the sorted carrier, so a topology is a sorted
//! set of integers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::finset::{FinMap, FinSet, Label};
use crate::gleaf::{onto_images, Cover, FinSetSystem, Gleaf};

/// The largest carrier for which all topologies can be enumerated.
pub const MAX_ENUMERATION: usize = 4;

const MAX_CARRIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinTopology {
    carrier: Vec<Label>,
    opens: BTreeSet<u64>,
}

/// External form: `{"carrier": ["x","y"], "opens": [[], ["x","y"], ["x"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub carrier: Vec<Label>,
    pub opens: Vec<Vec<Label>>,
}

fn full(n: usize) -> u64 {
    if n == MAX_CARRIER {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn is_topology(n: usize, opens: &BTreeSet<u64>) -> bool {
    opens.contains(&0)
        && opens.contains(&full(n))
        && opens.iter().all(|&u| opens.range(u..).all(|&v| opens.contains(&(u | v)) && opens.contains(&(u & v))))
}

impl FinTopology {
    /// Checks that `opens` contains the empty set and the carrier and is
    /// closed under binary unions and intersections.
    pub fn new(carrier: impl IntoIterator<Item = Label>, opens: impl IntoIterator<Item = FinSet>) -> Result<Self> {
        let carrier: Vec<Label> = carrier.into_iter().collect::<FinSet>().into_iter().collect();
        if carrier.len() > MAX_CARRIER {
            bail!(Domain, "carriers are limited to {MAX_CARRIER} points");
        }
        let mut masks = BTreeSet::new();
        for u in opens {
            let mut m = 0u64;
            for x in &u {
                let i = carrier.binary_search(x).map_err(|_| Error::Invalid(format!("{x} is not in the carrier")))?;
                m |= 1 << i;
            }
            masks.insert(m);
        }
        let t = FinTopology { carrier, opens: masks };
        if !is_topology(t.carrier.len(), &t.opens) {
            bail!(Invalid, "the family is not a topology");
        }
        Ok(t)
    }

    pub fn discrete(carrier: &FinSet) -> Self {
        let n = carrier.len();
        assert!(n <= 20, "discrete topology on {n} points is too large to store");
        FinTopology { carrier: carrier.iter().cloned().collect(), opens: (0..=full(n)).collect() }
    }

    pub fn indiscrete(carrier: &FinSet) -> Self {
        FinTopology { carrier: carrier.iter().cloned().collect(), opens: [0, full(carrier.len())].into() }
    }

    pub fn carrier(&self) -> FinSet {
        self.carrier.iter().cloned().collect()
    }

    /// The open sets as bitmasks over the sorted carrier.
    pub fn masks(&self) -> &BTreeSet<u64> {
        &self.opens
    }

    pub fn opens(&self) -> Vec<FinSet> {
        self.opens.iter().map(|&m| self.decode(m)).collect()
    }

    pub fn is_open(&self, u: &FinSet) -> bool {
        self.encode(u).is_some_and(|m| self.opens.contains(&m))
    }

    fn decode(&self, m: u64) -> FinSet {
        self.carrier.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x.clone()).collect()
    }

    fn encode(&self, u: &FinSet) -> Option<u64> {
        u.iter().try_fold(0u64, |m, x| self.carrier.binary_search(x).ok().map(|i| m | 1 << i))
    }

    /// The preimage topology along `f : A -> carrier`.
    pub fn pull_back(&self, f: &FinMap) -> Result<FinTopology> {
        if !f.cod().iter().eq(self.carrier.iter()) {
            bail!(Domain, "map codomain is not the carrier of the topology");
        }
        let carrier: Vec<Label> = f.dom().into_iter().collect();
        let targets: Vec<usize> =
            f.pairs().map(|(_, y)| self.carrier.binary_search(y).expect("codomain point")).collect();
        let opens = self
            .opens
            .iter()
            .map(|&u| targets.iter().enumerate().filter(|(_, &t)| u >> t & 1 == 1).fold(0u64, |m, (i, _)| m | 1 << i))
            .collect();
        Ok(FinTopology { carrier, opens })
    }

    /// The subspace topology on a subset of the carrier.
    pub fn subspace(&self, sub: &FinSet) -> Result<FinTopology> {
        self.pull_back(&FinMap::inclusion(sub, &self.carrier())?)
    }

    pub fn to_spec(&self) -> TopologySpec {
        TopologySpec {
            carrier: self.carrier.clone(),
            opens: self.opens.iter().map(|&m| self.decode(m).into_iter().collect()).collect(),
        }
    }

    pub fn from_spec(spec: &TopologySpec) -> Result<Self> {
        if spec.carrier.iter().collect::<BTreeSet<_>>().len() != spec.carrier.len() {
            bail!(Parse, "carrier lists a point twice");
        }
        FinTopology::new(spec.carrier.iter().cloned(), spec.opens.iter().map(|u| u.iter().cloned().collect()))
    }
}

impl Serialize for FinTopology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinTopology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FinTopology::from_spec(&TopologySpec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Glues topologies on two subsets `A`, `B` whose subspace topologies on
/// `A ∩ B` agree: a subset of `A ∪ B` is open when its traces on `A` and on
/// `B` are open.
pub fn top_glue(ta: &FinTopology, tb: &FinTopology) -> Result<FinTopology> {
    let (a, b) = (ta.carrier(), tb.carrier());
    let common: FinSet = a.intersection(&b).cloned().collect();
    if ta.subspace(&common)? != tb.subspace(&common)? {
        bail!(Compatibility, "subspace topologies on the overlap differ");
    }
    Ok(glue_unchecked(ta, tb))
}

fn glue_unchecked(ta: &FinTopology, tb: &FinTopology) -> FinTopology {
    let c: FinSet = ta.carrier().union(&tb.carrier()).cloned().collect();
    let carrier: Vec<Label> = c.into_iter().collect();
    let positions = |t: &FinTopology| -> Vec<usize> {
        t.carrier.iter().map(|x| carrier.binary_search(x).expect("carrier point")).collect()
    };
    let trace = |u: u64, pos: &[usize]| pos.iter().enumerate().fold(0u64, |m, (i, &p)| m | (u >> p & 1) << i);
    let (pa, pb) = (positions(ta), positions(tb));
    // Every glued open is a union of an open of A and an open of B.
    let lift = |u: u64, pos: &[usize]| pos.iter().enumerate().fold(0u64, |m, (i, &p)| m | (u >> i & 1) << p);
    let mut opens = BTreeSet::new();
    for &u in &ta.opens {
        for &v in &tb.opens {
            let w = lift(u, &pa) | lift(v, &pb);
            if ta.opens.contains(&trace(w, &pa)) && tb.opens.contains(&trace(w, &pb)) {
                opens.insert(w);
            }
        }
    }
    FinTopology { carrier, opens }
}

type Cache = Mutex<HashMap<usize, Arc<Vec<BTreeSet<u64>>>>>;

/// All topologies on `{0, ..., n - 1}` as families of bitmasks, for
/// `n <= MAX_ENUMERATION`. Results are cached.
pub fn all_topology_masks(n: usize) -> Result<Arc<Vec<BTreeSet<u64>>>> {
    if n > MAX_ENUMERATION {
        bail!(Domain, "enumerating topologies is limited to {MAX_ENUMERATION} points");
    }
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&n) {
        return Ok(hit.clone());
    }
    let top = full(n);
    let middle: Vec<u64> = (1..top).collect();
    let mut found: Vec<BTreeSet<u64>> = (0..1u64 << middle.len())
        .into_par_iter()
        .filter_map(|choice| {
            let mut opens: BTreeSet<u64> = [0, top].into();
            opens.extend(middle.iter().enumerate().filter(|(i, _)| choice >> i & 1 == 1).map(|(_, &u)| u));
            is_topology(n, &opens).then_some(opens)
        })
        .collect();
    found.sort();
    let found = Arc::new(found);
    cache.lock().expect("cache lock").insert(n, found.clone());
    Ok(found)
}

/// All topologies on the given carrier, which must have at most
/// `MAX_ENUMERATION` points.
pub fn all_topologies(carrier: &FinSet) -> Result<Vec<FinTopology>> {
    let masks = all_topology_masks(carrier.len())?;
    let carrier: Vec<Label> = carrier.iter().cloned().collect();
    Ok(masks.iter().map(|opens| FinTopology { carrier: carrier.clone(), opens: opens.clone() }).collect())
}

/// The result of searching for a topology on the union of several pieces
/// that restricts to each of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionSearch {
    pub candidates: usize,
    pub witness: Option<FinTopology>,
}

/// Searches all topologies on the union of the pieces for one whose
/// subspace topology on every piece is that piece.
pub fn common_extension(pieces: &[FinTopology]) -> Result<ExtensionSearch> {
    let union: FinSet = pieces.iter().flat_map(|p| p.carrier()).collect();
    let all = all_topologies(&union)?;
    let witness = all
        .iter()
        .find(|t| pieces.iter().all(|p| t.subspace(&p.carrier()).is_ok_and(|s| &s == p)))
        .cloned();
    Ok(ExtensionSearch { candidates: all.len(), witness })
}

pub fn common_extension_exists(pieces: &[FinTopology]) -> Result<bool> {
    Ok(common_extension(pieces)?.witness.is_some())
}

/// Three pairwise compatible two-point topologies with no common extension
/// to their three-point union: indiscrete on `{x, y}` and `{y, z}`,
/// discrete on `{x, z}`.
pub fn triangle_pieces() -> [FinTopology; 3] {
    let set = |a: &str, b: &str| -> FinSet { [Label::from(a), Label::from(b)].into() };
    [
        FinTopology::indiscrete(&set("x", "y")),
        FinTopology::indiscrete(&set("y", "z")),
        FinTopology::discrete(&set("x", "z")),
    ]
}

/// Returns the pairs of pieces whose subspace topologies on their overlap
/// differ.
pub fn incompatible_pairs(pieces: &[FinTopology]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let common: FinSet = pieces[i].carrier().intersection(&pieces[j].carrier()).cloned().collect();
            if pieces[i].subspace(&common)? != pieces[j].subspace(&common)? {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// The gleaf of topologies on finite sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TopologyGleaf;

impl Gleaf for TopologyGleaf {
    type System = FinSetSystem;
    type Section = FinTopology;

    fn system(&self) -> &FinSetSystem {
        &FinSetSystem
    }

    fn base(&self, s: &FinTopology) -> FinSet {
        s.carrier()
    }

    fn restrict(&self, s: &FinTopology, f: &FinMap) -> Result<FinTopology> {
        s.pull_back(f)
    }

    fn glue(&self, cover: &Cover<FinMap>, a: &FinTopology, b: &FinTopology) -> Result<FinTopology> {
        let (a, b) = onto_images(self, cover, a, b)?;
        Ok(glue_unchecked(&a, &b))
    }
}

/// Counts topologies per carrier size, for display.
pub fn topology_counts(max: usize) -> Result<BTreeMap<usize, usize>> {
    (0..=max.min(MAX_ENUMERATION)).map(|n| Ok((n, all_topology_masks(n)?.len()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::labels;

    #[test]
    fn counts_match_the_known_sequence() {
        let counts: Vec<usize> = topology_counts(4).unwrap().into_values().collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn validation() {
        let c = labels(["x", "y", "z"]);
        assert!(FinTopology::new(c.clone(), [labels(["x"]), labels(["y"])]).is_err());
        let ok = FinTopology::new(c.clone(), [FinSet::new(), c.clone(), labels(["x"])]).unwrap();
        assert!(ok.is_open(&labels(["x"])));
        assert!(!ok.is_open(&labels(["y"])));
    }

    #[test]
    fn pull_back_along_identity_inclusion_and_constant() {
        let c = labels(["x", "y"]);
        let d = FinTopology::discrete(&c);
        assert_eq!(d.pull_back(&FinMap::identity(&c)).unwrap(), d);
        assert_eq!(d.subspace(&labels(["x"])).unwrap(), FinTopology::discrete(&labels(["x"])));
        let constant = FinMap::from_pairs([("a", "x"), ("b", "x")], c).unwrap();
        assert_eq!(d.pull_back(&constant).unwrap(), FinTopology::indiscrete(&labels(["a", "b"])));
    }

    #[test]
    fn glue_examples() {
        let a = FinTopology::indiscrete(&labels(["0", "1"]));
        let b = FinTopology::indiscrete(&labels(["1", "2"]));
        assert_eq!(top_glue(&a, &b).unwrap(), FinTopology::indiscrete(&labels(["0", "1", "2"])));
        let a = FinTopology::discrete(&labels(["0", "1"]));
        let b = FinTopology::discrete(&labels(["1", "2"]));
        assert_eq!(top_glue(&a, &b).unwrap(), FinTopology::discrete(&labels(["0", "1", "2"])));
        let big = FinTopology::new(labels(["0", "1", "2"]), [FinSet::new(), labels(["0"]), labels(["0", "1", "2"])]).unwrap();
        let sub = big.subspace(&labels(["0", "1"])).unwrap();
        assert_eq!(top_glue(&big, &sub).unwrap(), big);
    }

    #[test]
    fn incompatible_glue_is_rejected() {
        let a = FinTopology::discrete(&labels(["0", "1"]));
        let b = FinTopology::indiscrete(&labels(["0", "1", "2"]));
        assert!(matches!(top_glue(&a, &b), Err(Error::Compatibility(_))));
    }

    #[test]
    fn glue_is_a_topology_even_without_compatibility() {
        let c = labels(["0", "1", "2"]);
        let all = all_topologies(&c).unwrap();
        for ta in all.iter().filter_map(|t| t.subspace(&labels(["0", "1"])).ok()) {
            for tb in all.iter().filter_map(|t| t.subspace(&labels(["1", "2"])).ok()) {
                let g = glue_unchecked(&ta, &tb);
                assert!(is_topology(3, &g.opens));
            }
        }
    }

    #[test]
    fn glue_matches_the_defining_filter() {
        let c = labels(["0", "1", "2"]);
        let (a, b) = (labels(["0", "1"]), labels(["1", "2"]));
        for t in all_topologies(&c).unwrap() {
            let (ta, tb) = (t.subspace(&a).unwrap(), t.subspace(&b).unwrap());
            let glued = top_glue(&ta, &tb).unwrap();
            let expected: Vec<FinSet> = crate::finset::subsets(&c)
                .into_iter()
                .filter(|u| {
                    ta.is_open(&u.intersection(&a).cloned().collect()) && tb.is_open(&u.intersection(&b).cloned().collect())
                })
                .collect();
            assert_eq!(glued.opens().into_iter().collect::<BTreeSet<_>>(), expected.into_iter().collect());
            assert_eq!(glued.subspace(&a).unwrap(), ta);
            assert_eq!(glued.subspace(&b).unwrap(), tb);
        }
    }

    #[test]
    fn triangle_has_no_extension() {
        let pieces = triangle_pieces();
        assert!(incompatible_pairs(&pieces).unwrap().is_empty());
        let search = common_extension(&pieces).unwrap();
        assert_eq!(search.candidates, 29);
        assert!(search.witness.is_none());
        assert!(common_extension_exists(&pieces[..2]).unwrap());
        assert!(common_extension_exists(&pieces[..1]).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let t: FinTopology =
            serde_json::from_str(r#"{"carrier":["x","y","z"],"opens":[[],["x","y","z"],["x"]]}"#).unwrap();
        assert!(t.is_open(&labels(["x"])));
        assert_eq!(serde_json::from_str::<FinTopology>(&serde_json::to_string(&t).unwrap()).unwrap(), t);
    }
}
