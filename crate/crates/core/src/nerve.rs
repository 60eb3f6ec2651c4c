//! Nerves of finite categories. An `n`-simplex is a path of `n` composable
//! morphisms; composition concatenates paths along their shared arrows.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::compository::{is_k_composable, Compository, SimplicialSet};
use crate::error::{bail, Error, Result};
use crate::simplex::MonotoneMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// External format of a category. Compositions with an identity may be
/// omitted from `comp`; every other composable pair must be listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    pub comp: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
}

/// A finite category given by its composition table, validated on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    names: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    /// `comp[g][f] = g ∘ f` when `tgt f = src g`.
    comp: Vec<Vec<Option<usize>>>,
}

fn index_of(names: &[String], name: &str, what: &str) -> Result<usize> {
    names.iter().position(|n| n == name).ok_or_else(|| Error::Invalid(format!("unknown {what} {name:?}")))
}

impl FinCategory {
    pub fn from_spec(spec: &CategorySpec) -> Result<Self> {
        let objects = spec.objects.clone();
        let names: Vec<String> = spec.morphisms.iter().map(|m| m.id.clone()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                bail!(Invalid, "duplicate morphism {n:?}");
            }
        }
        let src = spec.morphisms.iter().map(|m| index_of(&objects, &m.src, "object")).collect::<Result<Vec<_>>>()?;
        let tgt = spec.morphisms.iter().map(|m| index_of(&objects, &m.tgt, "object")).collect::<Result<Vec<_>>>()?;
        let mut identity = Vec::with_capacity(objects.len());
        for o in &objects {
            let Some(id) = spec.identities.get(o) else {
                bail!(Invalid, "object {o:?} has no identity");
            };
            identity.push(index_of(&names, id, "morphism")?);
        }
        let mut comp = vec![vec![None; names.len()]; names.len()];
        for [g, f, gf] in &spec.comp {
            let (g, f, gf) = (index_of(&names, g, "morphism")?, index_of(&names, f, "morphism")?, index_of(&names, gf, "morphism")?);
            if tgt[f] != src[g] {
                bail!(Invalid, "{} ∘ {} is listed but the morphisms are not composable", names[g], names[f]);
            }
            if comp[g][f].is_some_and(|x| x != gf) {
                bail!(Invalid, "{} ∘ {} is listed twice with different values", names[g], names[f]);
            }
            comp[g][f] = Some(gf);
        }
        for (o, &id) in identity.iter().enumerate() {
            for f in 0..names.len() {
                if tgt[f] == o {
                    comp[id][f].get_or_insert(f);
                }
                if src[f] == o {
                    comp[f][id].get_or_insert(f);
                }
            }
        }
        let cat = FinCategory { objects, names, src, tgt, identity, comp };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        for (o, &id) in self.identity.iter().enumerate() {
            if self.src[id] != o || self.tgt[id] != o {
                bail!(Invalid, "identity of {:?} is not an endomorphism of it", self.objects[o]);
            }
        }
        let n = self.names.len();
        for g in 0..n {
            for f in 0..n {
                let composable = self.tgt[f] == self.src[g];
                match self.comp[g][f] {
                    None if composable => bail!(Invalid, "{} ∘ {} is missing", self.names[g], self.names[f]),
                    Some(gf) if self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] => {
                        bail!(Invalid, "{} ∘ {} has the wrong source or target", self.names[g], self.names[f])
                    }
                    _ => {}
                }
            }
        }
        for (o, &id) in self.identity.iter().enumerate() {
            for f in 0..n {
                if (self.tgt[f] == o && self.comp[id][f] != Some(f)) || (self.src[f] == o && self.comp[f][id] != Some(f)) {
                    bail!(Invalid, "identity of {:?} is not neutral for {}", self.objects[o], self.names[f]);
                }
            }
        }
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = self.comp[h][g] else { continue };
                for f in 0..n {
                    let Some(gf) = self.comp[g][f] else { continue };
                    if self.comp[hg][f] != self.comp[h][gf] {
                        bail!(Invalid, "composition is not associative at ({}, {}, {})", self.names[h], self.names[g], self.names[f]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> CategorySpec {
        let mut comp = Vec::new();
        for g in 0..self.names.len() {
            for f in 0..self.names.len() {
                if let Some(gf) = self.comp[g][f] {
                    comp.push([self.names[g].clone(), self.names[f].clone(), self.names[gf].clone()]);
                }
            }
        }
        CategorySpec {
            objects: self.objects.clone(),
            morphisms: (0..self.names.len())
                .map(|i| MorphismSpec {
                    id: self.names[i].clone(),
                    src: self.objects[self.src[i]].clone(),
                    tgt: self.objects[self.tgt[i]].clone(),
                })
                .collect(),
            comp,
            identities: self.identity.iter().enumerate().map(|(o, &i)| (self.objects[o].clone(), self.names[i].clone())).collect(),
        }
    }

    /// The poset on `elements` generated by `leq` (reflexive-transitive
    /// closure), viewed as a category. Fails if the closure is not antisymmetric.
    pub fn poset(elements: &[&str], leq: &[(&str, &str)]) -> Result<Self> {
        let n = elements.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in leq {
            let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
            rel[index_of(&names, a, "element")?][index_of(&names, b, "element")?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && rel[i][j] && rel[j][i] {
                    bail!(Invalid, "relation is not antisymmetric");
                }
            }
        }
        let arrow = |i: usize, j: usize| format!("{}<={}", elements[i], elements[j]);
        let mut spec = CategorySpec {
            objects: elements.iter().map(|s| s.to_string()).collect(),
            morphisms: Vec::new(),
            comp: Vec::new(),
            identities: BTreeMap::new(),
        };
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    spec.morphisms.push(MorphismSpec { id: arrow(i, j), src: elements[i].into(), tgt: elements[j].into() });
                }
            }
            spec.identities.insert(elements[i].into(), arrow(i, i));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if rel[i][j] && rel[j][k] {
                        spec.comp.push([arrow(j, k), arrow(i, j), arrow(i, k)]);
                    }
                }
            }
        }
        FinCategory::from_spec(&spec)
    }

    /// The ordinal `[n]` as a category.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let leq: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
        FinCategory::poset(&refs, &leq).expect("a chain is a poset")
    }

    /// The one-object category of a finite monoid, given by its
    /// multiplication table `table[g][f] = g·f` with unit `0`.
    pub fn monoid(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        let name = |i: usize| format!("m{i}");
        let spec = CategorySpec {
            objects: vec!["*".into()],
            morphisms: (0..n).map(|i| MorphismSpec { id: name(i), src: "*".into(), tgt: "*".into() }).collect(),
            comp: (0..n)
                .flat_map(|g| (0..n).map(move |f| (g, f)))
                .map(|(g, f)| Ok([name(g), name(f), name(*table[g].get(f).ok_or_else(|| Error::Invalid("ragged table".into()))?)]))
                .collect::<Result<_>>()?,
            identities: [("*".to_string(), name(0))].into_iter().collect(),
        };
        FinCategory::from_spec(&spec)
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|f| (g + f) % n).collect()).collect();
        FinCategory::monoid(&table).expect("a group is a monoid")
    }

    /// Two objects and an isomorphism between them.
    pub fn walking_iso() -> Self {
        let m = |id: &str, s: &str, t: &str| MorphismSpec { id: id.into(), src: s.into(), tgt: t.into() };
        let c = |g: &str, f: &str, gf: &str| [g.to_string(), f.to_string(), gf.to_string()];
        let spec = CategorySpec {
            objects: vec!["a".into(), "b".into()],
            morphisms: vec![m("1a", "a", "a"), m("1b", "b", "b"), m("f", "a", "b"), m("g", "b", "a")],
            comp: vec![c("g", "f", "1a"), c("f", "g", "1b")],
            identities: [("a".to_string(), "1a".to_string()), ("b".to_string(), "1b".to_string())].into_iter().collect(),
        };
        FinCategory::from_spec(&spec).expect("valid category")
    }

    /// The small categories used by the exhaustive suites: chains `[0]` to
    /// `[3]`, the diamond poset, the 2x2 grid, cyclic groups of order 2 and
    /// 3, the idempotent monoid, and the walking isomorphism.
    pub fn catalogue() -> Vec<(String, FinCategory)> {
        let diamond = FinCategory::poset(&["bot", "l", "r", "top"], &[("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")])
            .expect("diamond is a poset");
        let idempotent = FinCategory::monoid(&[vec![0, 1], vec![1, 1]]).expect("idempotent monoid");
        let mut out: Vec<(String, FinCategory)> = (0..=3).map(|n| (format!("chain{n}"), FinCategory::chain(n))).collect();
        out.push(("diamond".into(), diamond));
        out.push(("cyclic2".into(), FinCategory::cyclic(2)));
        out.push(("cyclic3".into(), FinCategory::cyclic(3)));
        out.push(("idempotent".into(), idempotent));
        out.push(("walking_iso".into(), FinCategory::walking_iso()));
        out
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.names.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.names[f]
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    /// `g ∘ f`, if composable.
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }
}

/// A path `a_0 -f_1-> a_1 -> ... -f_n-> a_n` of object and morphism indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NervePath {
    objects: Vec<usize>,
    arrows: Vec<usize>,
}

impl NervePath {
    pub fn new(cat: &FinCategory, objects: Vec<usize>, arrows: Vec<usize>) -> Result<Self> {
        if objects.len() != arrows.len() + 1 {
            bail!(Invalid, "a path with {} arrows needs {} objects", arrows.len(), arrows.len() + 1);
        }
        for (i, &f) in arrows.iter().enumerate() {
            if f >= cat.morphism_count() || cat.src(f) != objects[i] || cat.tgt(f) != objects[i + 1] {
                bail!(Invalid, "arrow {i} does not go from object {} to object {}", objects[i], objects[i + 1]);
            }
        }
        Ok(NervePath { objects, arrows })
    }

    /// The path through the named morphisms.
    pub fn from_names(cat: &FinCategory, start: &str, arrows: &[&str]) -> Result<Self> {
        let mut objects = vec![index_of(&cat.objects, start, "object")?];
        let mut idx = Vec::new();
        for a in arrows {
            let f = index_of(&cat.names, a, "morphism")?;
            objects.push(cat.tgt(f));
            idx.push(f);
        }
        NervePath::new(cat, objects, idx)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn to_json(&self, cat: &FinCategory) -> serde_json::Value {
        serde_json::json!({
            "objects": self.objects.iter().map(|&o| cat.object_name(o)).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(|&f| cat.morphism_name(f)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(cat: &FinCategory, v: &serde_json::Value) -> Result<Self> {
        let names = |key: &str| -> Result<Vec<String>> {
            serde_json::from_value(v.get(key).cloned().unwrap_or_default()).map_err(|e| Error::Parse(format!("{key}: {e}")))
        };
        let objects = names("objects")?.iter().map(|o| index_of(&cat.objects, o, "object")).collect::<Result<_>>()?;
        let arrows = names("arrows")?.iter().map(|f| index_of(&cat.names, f, "morphism")).collect::<Result<_>>()?;
        NervePath::new(cat, objects, arrows)
    }
}

/// The nerve of a finite category as a compository.
#[derive(Debug, Clone)]
pub struct Nerve {
    cat: FinCategory,
}

impl Nerve {
    pub fn new(cat: FinCategory) -> Self {
        Nerve { cat }
    }

    pub fn category(&self) -> &FinCategory {
        &self.cat
    }

    /// Every path of length `n`.
    pub fn paths(&self, n: usize) -> Vec<NervePath> {
        let mut out: Vec<NervePath> =
            (0..self.cat.object_count()).map(|o| NervePath { objects: vec![o], arrows: vec![] }).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &out {
                let last = *p.objects.last().expect("paths have an object");
                for f in (0..self.cat.morphism_count()).filter(|&f| self.cat.src(f) == last) {
                    let mut q = p.clone();
                    q.arrows.push(f);
                    q.objects.push(self.cat.tgt(f));
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    /// The composite of the arrows strictly after position `from` up to
    /// position `to`, or the identity of `a_from` when `from == to`.
    fn segment(&self, p: &NervePath, from: usize, to: usize) -> usize {
        let mut acc = self.cat.identity(p.objects[from]);
        for &f in &p.arrows[from..to] {
            acc = self.cat.comp(f, acc).expect("path arrows are composable");
        }
        acc
    }
}

impl SimplicialSet for Nerve {
    type Simplex = NervePath;

    fn dim(&self, a: &NervePath) -> usize {
        a.len()
    }

    fn act(&self, a: &NervePath, f: &MonotoneMap) -> Result<NervePath> {
        if f.cod() != a.len() {
            bail!(Domain, "map codomain [{}] does not match path length {}", f.cod(), a.len());
        }
        let v = f.values();
        Ok(NervePath {
            objects: v.iter().map(|&i| a.objects[i]).collect(),
            arrows: v.windows(2).map(|w| self.segment(a, w[0], w[1])).collect(),
        })
    }
}

impl Compository for Nerve {
    fn compose(&self, a: &NervePath, k: usize, b: &NervePath) -> Result<NervePath> {
        if !is_k_composable(self, a, k, b)? {
            bail!(Composition, "the last {k} arrows of A differ from the first {k} arrows of B");
        }
        let mut out = a.clone();
        out.objects.extend_from_slice(&b.objects[k + 1..]);
        out.arrows.extend_from_slice(&b.arrows[k..]);
        Ok(out)
    }
}

/// True iff exactly one path of length `m + n - k` has initial `m`-face `A`
/// and terminal `n`-face `B`, and it is their concatenation.
pub fn segal_unique(nerve: &Nerve, a: &NervePath, k: usize, b: &NervePath) -> Result<bool> {
    if !is_k_composable(nerve, a, k, b)? {
        bail!(Composition, "pair is not {k}-composable");
    }
    let (m, n) = (a.len(), b.len());
    let mut found = Vec::new();
    for d in nerve.paths(m + n - k) {
        if &nerve.source_face(&d, m)? == a && &nerve.target_face(&d, n)? == b {
            found.push(d);
        }
    }
    Ok(found.len() == 1 && found[0] == nerve.compose(a, k, b)?)
}

/// Summary of an exhaustive Segal check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SegalSummary {
    pub pairs: usize,
    pub failures: usize,
}

/// Checks uniqueness of fillers for every composable pair of paths of
/// length at most `max_len`, by counting each long path once per split.
pub fn segal_exhaustive(nerve: &Nerve, max_len: usize) -> Result<SegalSummary> {
    let mut summary = SegalSummary::default();
    for m in 0..=max_len {
        for n in 0..=max_len {
            for k in 0..=m.min(n) {
                let mut fillers: HashMap<(NervePath, NervePath), Vec<NervePath>> = HashMap::new();
                for d in nerve.paths(m + n - k) {
                    let key = (nerve.source_face(&d, m)?, nerve.target_face(&d, n)?);
                    fillers.entry(key).or_default().push(d);
                }
                let left = nerve.paths(m);
                let right = nerve.paths(n);
                for a in &left {
                    for b in &right {
                        if !is_k_composable(nerve, a, k, b)? {
                            continue;
                        }
                        summary.pairs += 1;
                        let ok = match fillers.get(&(a.clone(), b.clone())) {
                            Some(ds) => ds.len() == 1 && ds[0] == nerve.compose(a, k, b)?,
                            None => false,
                        };
                        if !ok {
                            summary.failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{degeneracy, face};

    fn arrow_cat() -> (Nerve, NervePath, NervePath) {
        let cat = FinCategory::chain(2);
        let nerve = Nerve::new(cat.clone());
        let f = NervePath::from_names(&cat, "0", &["0<=1"]).unwrap();
        let g = NervePath::from_names(&cat, "1", &["1<=2"]).unwrap();
        (nerve, f, g)
    }

    #[test]
    fn faces_of_a_two_path() {
        let (nerve, f, g) = arrow_cat();
        let fg = nerve.compose(&f, 0, &g).unwrap();
        assert_eq!(nerve.act(&fg, &face(0, 2).unwrap()).unwrap(), g);
        let inner = nerve.act(&fg, &face(1, 2).unwrap()).unwrap();
        let cat = nerve.category();
        assert_eq!(inner, NervePath::from_names(cat, "0", &["0<=2"]).unwrap());
        let dup = nerve.act(&f, &degeneracy(0, 1).unwrap()).unwrap();
        assert_eq!(dup, NervePath::from_names(cat, "0", &["0<=0", "0<=1"]).unwrap());
    }

    #[test]
    fn concatenation_with_overlap() {
        let cat = FinCategory::chain(3);
        let nerve = Nerve::new(cat.clone());
        let a = NervePath::from_names(&cat, "0", &["0<=1", "1<=2"]).unwrap();
        let b = NervePath::from_names(&cat, "1", &["1<=2", "2<=3"]).unwrap();
        let ab = nerve.compose(&a, 1, &b).unwrap();
        assert_eq!(ab, NervePath::from_names(&cat, "0", &["0<=1", "1<=2", "2<=3"]).unwrap());
        assert!(matches!(nerve.compose(&a, 2, &b), Err(Error::Composition(_))));
    }

    #[test]
    fn invalid_tables_are_rejected() {
        // Not associative: a monoid table with a·(a·a) != (a·a)·a.
        assert!(FinCategory::monoid(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 1]]).is_err());
        // Missing identity neutrality.
        assert!(FinCategory::monoid(&[vec![1, 1], vec![1, 1]]).is_err());
        assert!(FinCategory::poset(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
    }

    #[test]
    fn catalogue_sizes() {
        for (name, cat) in FinCategory::catalogue() {
            assert!(cat.object_count() <= 4, "{name}");
            assert!(cat.morphism_count() <= 12, "{name}");
        }
        assert_eq!(FinCategory::chain(3).morphism_count(), 10);
    }

    #[test]
    fn path_counts() {
        let nerve = Nerve::new(FinCategory::chain(3));
        // Weakly increasing sequences of length 3 in {0..3}.
        assert_eq!(nerve.paths(2).len(), 20);
        let z2 = Nerve::new(FinCategory::cyclic(2));
        assert_eq!(z2.paths(3).len(), 8);
    }

    #[test]
    fn segal_for_the_walking_arrow_and_z2() {
        let cat = FinCategory::chain(1);
        let nerve = Nerve::new(cat.clone());
        let f = NervePath::from_names(&cat, "0", &["0<=1"]).unwrap();
        assert!(segal_unique(&nerve, &f, 1, &f).unwrap());
        let z2 = Nerve::new(FinCategory::cyclic(2));
        let s = z2.paths(1);
        assert!(segal_unique(&z2, &s[1], 0, &s[1]).unwrap());
    }

    #[test]
    fn spec_round_trip() {
        let cat = FinCategory::walking_iso();
        let json = serde_json::to_string(&cat.to_spec()).unwrap();
        let back = FinCategory::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, cat);
        let nerve = Nerve::new(cat.clone());
        let p = &nerve.paths(2)[3];
        assert_eq!(&NervePath::from_json(&cat, &p.to_json(&cat)).unwrap(), p);
    }
}
