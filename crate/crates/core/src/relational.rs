//! Relations over finite attribute domains. Restriction is projection (or,
//! along a non-injective map, repeating columns) and gluing is the natural
//! join.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::finset::{FinMap, FinSet, Label};
use crate::gleaf::{onto_images, Cover, FinSetSystem, Gleaf};

/// A set of tuples over named attributes, each with a finite domain.
/// Tuples store value indices into the domains, in attribute order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    attrs: Vec<Label>,
    domains: Vec<Vec<String>>,
    tuples: BTreeSet<Vec<usize>>,
}

/// External form: `{"attrs": {"a": ["1","2"]}, "tuples": [{"a": "1"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub attrs: BTreeMap<Label, Vec<String>>,
    pub tuples: Vec<BTreeMap<Label, String>>,
}

impl Relation {
    /// The empty relation over `schema`. Domains are sorted and deduplicated.
    pub fn empty(schema: BTreeMap<Label, Vec<String>>) -> Self {
        let (attrs, domains) = schema
            .into_iter()
            .map(|(a, d)| (a, d.into_iter().collect::<BTreeSet<_>>().into_iter().collect()))
            .unzip();
        Relation { attrs, domains, tuples: BTreeSet::new() }
    }

    pub fn from_spec(spec: &RelationSpec) -> Result<Self> {
        let mut r = Relation::empty(spec.attrs.clone());
        for t in &spec.tuples {
            r.insert_named(t)?;
        }
        Ok(r)
    }

    pub fn to_spec(&self) -> RelationSpec {
        RelationSpec {
            attrs: self.schema(),
            tuples: self
                .tuples
                .iter()
                .map(|t| self.attrs.iter().zip(t).enumerate().map(|(i, (a, &v))| (a.clone(), self.domains[i][v].clone())).collect())
                .collect(),
        }
    }

    /// Reads tuples from CSV with a header row of attribute names. Domains
    /// are the values seen in each column unless `schema` provides them.
    pub fn from_csv<R: Read>(reader: R, schema: Option<BTreeMap<Label, Vec<String>>>) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let header: Vec<Label> = csv.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(Label::from).collect();
        if header.iter().collect::<BTreeSet<_>>().len() != header.len() {
            bail!(Parse, "duplicate attribute in CSV header");
        }
        let rows: Vec<Vec<String>> = csv
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        let schema = match schema {
            Some(s) => s,
            None => header.iter().enumerate().map(|(i, a)| (a.clone(), rows.iter().map(|r| r[i].clone()).collect())).collect(),
        };
        let mut rel = Relation::empty(schema);
        for row in rows {
            rel.insert_named(&header.iter().cloned().zip(row).collect())?;
        }
        Ok(rel)
    }

    fn insert_named(&mut self, t: &BTreeMap<Label, String>) -> Result<()> {
        let row = self.encode(t)?;
        self.tuples.insert(row);
        Ok(())
    }

    fn encode(&self, t: &BTreeMap<Label, String>) -> Result<Vec<usize>> {
        if t.len() != self.attrs.len() || !self.attrs.iter().all(|a| t.contains_key(a)) {
            bail!(Invalid, "tuple {t:?} does not match the attributes {:?}", self.attrs);
        }
        self
            .attrs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                self.domains[i].binary_search(&t[a]).map_err(|_| Error::Invalid(format!("{:?} is not in the domain of {a}", t[a])))
            })
            .collect()
    }

    pub fn attrs(&self) -> &[Label] {
        &self.attrs
    }

    pub fn attr_set(&self) -> FinSet {
        self.attrs.iter().cloned().collect()
    }

    pub fn schema(&self) -> BTreeMap<Label, Vec<String>> {
        self.attrs.iter().cloned().zip(self.domains.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Tuples as attribute-to-value maps.
    pub fn rows(&self) -> Vec<BTreeMap<Label, String>> {
        self.to_spec().tuples
    }

    pub fn contains(&self, t: &BTreeMap<Label, String>) -> bool {
        self.encode(t).is_ok_and(|row| self.tuples.contains(&row))
    }

    fn position(&self, a: &Label) -> Option<usize> {
        self.attrs.binary_search(a).ok()
    }

    /// Restriction along `f : A' -> attrs`: each tuple `t` becomes `t ∘ f`.
    pub fn pull_back(&self, f: &FinMap) -> Result<Relation> {
        if !f.cod().iter().eq(self.attrs.iter()) {
            bail!(Domain, "map codomain is not the attribute set of the relation");
        }
        let source: Vec<usize> = f.pairs().map(|(_, b)| self.position(b).expect("codomain attribute")).collect();
        Ok(Relation {
            attrs: f.dom().into_iter().collect(),
            domains: source.iter().map(|&i| self.domains[i].clone()).collect(),
            tuples: self.tuples.iter().map(|t| source.iter().map(|&i| t[i]).collect()).collect(),
        })
    }

    /// The projection onto a subset of the attributes.
    pub fn project(&self, onto: &FinSet) -> Result<Relation> {
        self.pull_back(&FinMap::inclusion(onto, &self.attr_set())?)
    }

    /// Every relation over `schema`.
    pub fn all(schema: &BTreeMap<Label, Vec<String>>) -> Vec<Relation> {
        let base = Relation::empty(schema.clone());
        let space = base.tuple_space();
        assert!(space.len() < 20, "too many relations to enumerate");
        (0u32..1 << space.len())
            .map(|mask| Relation {
                tuples: space.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect(),
                ..base.clone()
            })
            .collect()
    }

    /// A relation containing each possible tuple with probability `num / den`.
    pub fn random(rng: &mut ChaCha8Rng, schema: &BTreeMap<Label, Vec<String>>, num: u32, den: u32) -> Relation {
        let mut r = Relation::empty(schema.clone());
        r.tuples = r.tuple_space().into_iter().filter(|_| rng.random_ratio(num, den)).collect();
        r
    }

    fn tuple_space(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for d in &self.domains {
            out = out.into_iter().flat_map(|t| (0..d.len()).map(move |v| [t.clone(), vec![v]].concat())).collect();
        }
        out
    }
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Relation::from_spec(&RelationSpec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// The classical natural join: all tuples over the union of the attributes
/// whose projections lie in both inputs. Shared attributes must have the
/// same domain.
pub fn join_unchecked(ta: &Relation, tb: &Relation) -> Result<Relation> {
    let mut schema = ta.schema();
    for (a, d) in tb.schema() {
        if let Some(existing) = schema.get(&a) {
            if existing != &d {
                bail!(Domain, "attribute {a} has different domains in the two relations");
            }
        }
        schema.insert(a, d);
    }
    let mut out = Relation::empty(schema);
    let from_a: Vec<Option<usize>> = out.attrs.iter().map(|x| ta.position(x)).collect();
    let from_b: Vec<Option<usize>> = out.attrs.iter().map(|x| tb.position(x)).collect();
    let shared: Vec<(usize, usize)> = ta.attrs.iter().enumerate().filter_map(|(i, x)| tb.position(x).map(|j| (i, j))).collect();
    let mut by_key: BTreeMap<Vec<usize>, Vec<&Vec<usize>>> = BTreeMap::new();
    for t in &tb.tuples {
        by_key.entry(shared.iter().map(|&(_, j)| t[j]).collect()).or_default().push(t);
    }
    for s in &ta.tuples {
        let key: Vec<usize> = shared.iter().map(|&(i, _)| s[i]).collect();
        for t in by_key.get(&key).into_iter().flatten() {
            let row = (0..out.attrs.len()).map(|k| from_a[k].map(|i| s[i]).unwrap_or_else(|| t[from_b[k].expect("attribute")])).collect();
            out.tuples.insert(row);
        }
    }
    Ok(out)
}

/// The gluing operation: the natural join of two relations whose
/// projections to the shared attributes coincide.
pub fn natural_join(ta: &Relation, tb: &Relation) -> Result<Relation> {
    let common: FinSet = ta.attr_set().intersection(&tb.attr_set()).cloned().collect();
    if ta.project(&common)? != tb.project(&common)? {
        bail!(Compatibility, "projections onto the shared attributes differ");
    }
    join_unchecked(ta, tb)
}

/// The gleaf of relations on finite sets of attributes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelationGleaf;

impl Gleaf for RelationGleaf {
    type System = FinSetSystem;
    type Section = Relation;

    fn system(&self) -> &FinSetSystem {
        &FinSetSystem
    }

    fn base(&self, s: &Relation) -> FinSet {
        s.attr_set()
    }

    fn restrict(&self, s: &Relation, f: &FinMap) -> Result<Relation> {
        s.pull_back(f)
    }

    fn glue(&self, cover: &Cover<FinMap>, a: &Relation, b: &Relation) -> Result<Relation> {
        let (a, b) = onto_images(self, cover, a, b)?;
        natural_join(&a, &b)
    }
}

/// The schema with the given attributes, all sharing one domain.
pub fn uniform_schema(attrs: impl IntoIterator<Item = Label>, domain: &[&str]) -> BTreeMap<Label, Vec<String>> {
    attrs.into_iter().map(|a| (a, domain.iter().map(|s| s.to_string()).collect())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::labels;

    fn rel(attrs: &[&str], rows: &[&[&str]]) -> Relation {
        let schema = uniform_schema(attrs.iter().map(|a| Label::from(*a)), &["1", "2", "3", "4", "5", "6"]);
        let mut r = Relation::empty(schema);
        for row in rows {
            r.insert_named(&attrs.iter().map(|a| Label::from(*a)).zip(row.iter().map(|v| v.to_string())).collect()).unwrap();
        }
        r
    }

    #[test]
    fn projection() {
        let t = rel(&["a", "b"], &[&["1", "2"], &["3", "4"]]);
        assert_eq!(t.project(&labels(["a", "b"])).unwrap(), t);
        assert_eq!(t.project(&labels(["b"])).unwrap(), rel(&["b"], &[&["2"], &["4"]]));
        let empty = rel(&["a", "b"], &[]);
        assert!(empty.project(&labels(["a"])).unwrap().is_empty());
    }

    #[test]
    fn join_on_a_shared_attribute() {
        let ta = rel(&["a", "b"], &[&["1", "2"], &["3", "4"]]);
        let tb = rel(&["b", "c"], &[&["2", "5"], &["4", "6"]]);
        assert_eq!(natural_join(&ta, &tb).unwrap(), rel(&["a", "b", "c"], &[&["1", "2", "5"], &["3", "4", "6"]]));
    }

    #[test]
    fn join_with_a_projection_is_identity() {
        let ta = rel(&["a", "b"], &[&["1", "2"], &["3", "4"], &["3", "2"]]);
        let tb = ta.project(&labels(["b"])).unwrap();
        assert_eq!(natural_join(&ta, &tb).unwrap(), ta);
    }

    #[test]
    fn disjoint_join_is_a_product() {
        let ta = rel(&["a"], &[&["1"], &["2"]]);
        let tb = rel(&["b"], &[&["3"], &["4"], &["5"]]);
        assert_eq!(natural_join(&ta, &tb).unwrap().len(), 6);
    }

    #[test]
    fn checked_join_rejects_mismatched_projections() {
        let ta = rel(&["a", "b"], &[&["1", "2"]]);
        let tb = rel(&["b", "c"], &[&["2", "5"], &["4", "6"]]);
        assert!(matches!(natural_join(&ta, &tb), Err(Error::Compatibility(_))));
        assert_eq!(join_unchecked(&ta, &tb).unwrap().len(), 1);
    }

    #[test]
    fn restriction_along_a_non_injective_map_repeats_columns() {
        let t = rel(&["a"], &[&["1"], &["2"]]);
        let f = FinMap::from_pairs([("x", "a"), ("y", "a")], labels(["a"])).unwrap();
        let pulled = t.pull_back(&f).unwrap();
        assert_eq!(pulled, rel(&["x", "y"], &[&["1", "1"], &["2", "2"]]));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let text = "a,b\n1,2\n3,4\n";
        let r = Relation::from_csv(text.as_bytes(), None).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.schema()[&Label::from("a")], vec!["1".to_string(), "3".to_string()]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Relation>(&json).unwrap(), r);
        assert!(r.contains(&[("a".into(), "3".to_string()), ("b".into(), "4".to_string())].into_iter().collect()));
        assert!(Relation::from_csv("a,a\n1,2\n".as_bytes(), None).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let schema = uniform_schema(labels(["a", "b"]), &["0", "1"]);
        assert_eq!(Relation::all(&schema).len(), 16);
    }
}
