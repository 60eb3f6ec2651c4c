//! Finite sets of named points and the functions between them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{bail, Result};
use crate::simplex::MonotoneMap;

/// A point name. Names that are decimal numbers sort numerically and before
/// all other names, so `{"0", ..., "n"}` is laid out as the ordinal `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label {
    name: Arc<str>,
    num: Option<u64>,
}

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        let name: String = name.into();
        let num = name.parse::<u64>().ok().filter(|n| n.to_string() == name);
        Label { name: name.into(), num }
    }

    pub fn as_str(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<usize> {
        self.num.map(|n| n as usize)
    }
}

impl From<usize> for Label {
    fn from(n: usize) -> Self {
        Label { name: n.to_string().into(), num: Some(n as u64) }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label::new(s)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num, other.num) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.name.cmp(&other.name),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.name)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Label::new(String::deserialize(d)?))
    }
}

pub type FinSet = BTreeSet<Label>;

/// The set `{"0", ..., "n"}`.
pub fn ordinal(n: usize) -> FinSet {
    (0..=n).map(Label::from).collect()
}

pub fn labels<I, T>(items: I) -> FinSet
where
    I: IntoIterator<Item = T>,
    T: Into<Label>,
{
    items.into_iter().map(Into::into).collect()
}

/// A total function between finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMap {
    map: BTreeMap<Label, Label>,
    cod: FinSet,
}

impl FinMap {
    pub fn new(map: BTreeMap<Label, Label>, cod: FinSet) -> Result<Self> {
        if let Some(v) = map.values().find(|v| !cod.contains(v)) {
            bail!(Invalid, "image point {v} is not in the codomain");
        }
        Ok(FinMap { map, cod })
    }

    pub fn from_pairs<I, A, B>(pairs: I, cod: FinSet) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Label>,
        B: Into<Label>,
    {
        FinMap::new(pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect(), cod)
    }

    pub fn identity(set: &FinSet) -> Self {
        FinMap { map: set.iter().map(|x| (x.clone(), x.clone())).collect(), cod: set.clone() }
    }

    pub fn inclusion(sub: &FinSet, sup: &FinSet) -> Result<Self> {
        if !sub.is_subset(sup) {
            bail!(Domain, "{sub:?} is not a subset of {sup:?}");
        }
        Ok(FinMap { map: sub.iter().map(|x| (x.clone(), x.clone())).collect(), cod: sup.clone() })
    }

    /// The underlying function of a monotone map, on numeric labels.
    pub fn from_monotone(f: &MonotoneMap) -> Self {
        FinMap {
            map: (0..=f.dom()).map(|v| (Label::from(v), Label::from(f.apply(v)))).collect(),
            cod: ordinal(f.cod()),
        }
    }

    /// `x ↦ x + offset` from `{0..n}` onto `{offset..offset+n}` inside `cod`.
    pub fn shift(n: usize, offset: usize, cod: &FinSet) -> Result<Self> {
        FinMap::new((0..=n).map(|v| (Label::from(v), Label::from(v + offset))).collect(), cod.clone())
    }

    pub fn dom(&self) -> FinSet {
        self.map.keys().cloned().collect()
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn dom_len(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: &Label) -> Option<&Label> {
        self.map.get(x)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Label, &Label)> {
        self.map.iter()
    }

    pub fn image(&self) -> FinSet {
        self.map.values().cloned().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.cod.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.len() == self.cod.len() && self.map.iter().all(|(a, b)| a == b)
    }

    /// The inverse of an injective map, defined on its image.
    pub fn inverse_on_image(&self) -> Result<FinMap> {
        if !self.is_injective() {
            bail!(Domain, "map is not injective");
        }
        Ok(FinMap { map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(), cod: self.dom() })
    }

    /// Restricts the domain to `sub`.
    pub fn restrict_to(&self, sub: &FinSet) -> Result<FinMap> {
        let mut map = BTreeMap::new();
        for x in sub {
            match self.map.get(x) {
                Some(y) => {
                    map.insert(x.clone(), y.clone());
                }
                None => bail!(Domain, "{x} is outside the domain"),
            }
        }
        Ok(FinMap { map, cod: self.cod.clone() })
    }

    /// Replaces the codomain by a superset of the image.
    pub fn with_cod(&self, cod: FinSet) -> Result<FinMap> {
        FinMap::new(self.map.clone(), cod)
    }

    /// Every function `dom -> cod`.
    pub fn all(dom: &FinSet, cod: &FinSet) -> Vec<FinMap> {
        let dom: Vec<&Label> = dom.iter().collect();
        let targets: Vec<&Label> = cod.iter().collect();
        if targets.is_empty() {
            return if dom.is_empty() { vec![FinMap { map: BTreeMap::new(), cod: cod.clone() }] } else { vec![] };
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; dom.len()];
        loop {
            let map = dom.iter().zip(&digits).map(|(x, &d)| ((*x).clone(), targets[d].clone())).collect();
            out.push(FinMap { map, cod: cod.clone() });
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return out;
                }
                digits[pos] += 1;
                if digits[pos] < targets.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// `g ∘ f`.
pub fn compose_fin(g: &FinMap, f: &FinMap) -> Result<FinMap> {
    if f.cod != g.dom() {
        bail!(Composition, "codomain of f does not match domain of g");
    }
    let map = f.map.iter().map(|(x, y)| (x.clone(), g.map[y].clone())).collect();
    Ok(FinMap { map, cod: g.cod.clone() })
}

/// All subsets of `set`, smallest first.
pub fn subsets(set: &FinSet) -> Vec<FinSet> {
    let items: Vec<&Label> = set.iter().collect();
    let mut out: Vec<FinSet> = (0u32..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| (*x).clone()).collect())
        .collect();
    out.sort_by_key(|s: &FinSet| s.len());
    out
}
