//! Higher spans in a finite lattice.
//!
//! An `n`-span assigns an element to every interval `(v, w)` of `[n]` so that
//! shrinking the interval moves up in the order; the apex `(0, n)` maps to
//! every foot `(i, i)`. The order is read as the arrow relation of a poset
//! category, so the pullback of a cospan is the meet of its two ends.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compository::{is_k_composable, Compository, SimplicialSet};
use crate::error::{bail, Error, Result};
use crate::nerve::{FinCategory, NervePath};
use crate::simplex::{face, MonotoneMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
}

/// A finite partial order in which every pair has a greatest lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinLattice {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
}

impl FinLattice {
    /// Builds the order generated by `leq` and checks that it is
    /// antisymmetric and has all binary meets.
    pub fn new(elements: Vec<String>, leq: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            bail!(Invalid, "a lattice needs at least one element");
        }
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in leq {
            if a >= n || b >= n {
                bail!(Invalid, "order relation mentions an element out of range");
            }
            rel[a][b] = true;
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
            for j in (i + 1)..n {
                if rel[i][j] && rel[j][i] {
                    bail!(Invalid, "{:?} and {:?} are distinct but equivalent", elements[i], elements[j]);
                }
            }
        }
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&x| rel[x][a] && rel[x][b]).collect();
                let greatest = lower.iter().copied().find(|&g| lower.iter().all(|&x| rel[x][g]));
                match greatest {
                    Some(g) => meet[a][b] = g,
                    None => bail!(Invalid, "{:?} and {:?} have no greatest lower bound", elements[a], elements[b]),
                }
            }
        }
        Ok(FinLattice { elements, leq: rel, meet })
    }

    pub fn from_spec(spec: &LatticeSpec) -> Result<Self> {
        let idx = |name: &str| {
            spec.elements.iter().position(|e| e == name).ok_or_else(|| Error::Invalid(format!("unknown element {name:?}")))
        };
        let leq = spec.leq.iter().map(|[a, b]| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        FinLattice::new(spec.elements.clone(), &leq)
    }

    /// The covering pairs of the order.
    pub fn to_spec(&self) -> LatticeSpec {
        let n = self.len();
        let mut leq = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let covers = a != b && self.leq[a][b] && !(0..n).any(|x| x != a && x != b && self.leq[a][x] && self.leq[x][b]);
                if covers {
                    leq.push([self.elements[a].clone(), self.elements[b].clone()]);
                }
            }
        }
        LatticeSpec { elements: self.elements.clone(), leq }
    }

    /// The four-element lattice with `top` below `alpha` and `beta`, both
    /// below `bot`. Arrows point down the Hasse diagram.
    pub fn diamond() -> Self {
        let names = ["bot", "alpha", "beta", "top"].map(String::from).to_vec();
        FinLattice::new(names, &[(3, 1), (3, 2), (1, 0), (2, 0)]).expect("diamond is a lattice")
    }

    /// The chain `0 ≤ 1 ≤ ... ≤ n`.
    pub fn chain(n: usize) -> Self {
        let names = (0..=n).map(|i| i.to_string()).collect();
        let leq: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
        FinLattice::new(names, &leq).expect("chains are lattices")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.elements.iter().position(|e| e == name).ok_or_else(|| Error::Invalid(format!("unknown element {name:?}")))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// The lattice as a poset category with one arrow `a → b` for each
    /// `a ≤ b`. Object indices agree with element indices.
    pub fn as_category(&self) -> FinCategory {
        let names: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        let n = self.len();
        let leq: Vec<(&str, &str)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.leq[a][b]).map(|(a, b)| (names[a], names[b])).collect();
        FinCategory::poset(&names, &leq).expect("a lattice is a poset")
    }
}

fn slot(v: usize, w: usize) -> usize {
    w * (w + 1) / 2 + v
}

/// An `n`-span: one lattice element per interval `v ≤ w` of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NSpan {
    n: usize,
    val: Vec<usize>,
}

impl NSpan {
    /// Builds a span from a value function and checks monotonicity.
    pub fn from_fn(lattice: &FinLattice, n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut val = vec![0; slot(0, n + 1)];
        for w in 0..=n {
            for v in 0..=w {
                let x = f(v, w);
                if x >= lattice.len() {
                    bail!(Invalid, "element index {x} is out of range");
                }
                val[slot(v, w)] = x;
            }
        }
        let s = NSpan { n, val };
        s.validate(lattice)?;
        Ok(s)
    }

    fn validate(&self, lattice: &FinLattice) -> Result<()> {
        for w in 0..=self.n {
            for v in 0..w {
                let x = self.get(v, w);
                if !lattice.leq(x, self.get(v + 1, w)) || !lattice.leq(x, self.get(v, w - 1)) {
                    bail!(Invalid, "value at ({v},{w}) does not map to the values of its subintervals");
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, v: usize, w: usize) -> usize {
        self.val[slot(v, w)]
    }

    pub fn to_json(&self, lattice: &FinLattice) -> serde_json::Value {
        let mut val = BTreeMap::new();
        for w in 0..=self.n {
            for v in 0..=w {
                val.insert(format!("{v},{w}"), lattice.name(self.get(v, w)).to_string());
            }
        }
        serde_json::json!({ "n": self.n, "val": val })
    }

    pub fn from_json(lattice: &FinLattice, value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            val: BTreeMap<String, String>,
        }
        let raw: Raw = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut table = HashMap::new();
        for (key, name) in &raw.val {
            let (v, w) = key.split_once(',').ok_or_else(|| Error::Parse(format!("bad interval key {key:?}")))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad interval key {key:?}")));
            let (v, w) = (parse(v)?, parse(w)?);
            if v > w || w > raw.n {
                bail!(Parse, "interval {key:?} is not inside [{}]", raw.n);
            }
            table.insert((v, w), lattice.index(name)?);
        }
        if table.len() != slot(0, raw.n + 1) {
            bail!(Parse, "an {}-span needs {} values, got {}", raw.n, slot(0, raw.n + 1), table.len());
        }
        NSpan::from_fn(lattice, raw.n, |v, w| table[&(v, w)])
    }
}

/// The compository of higher spans in a finite lattice.
#[derive(Debug, Clone)]
pub struct Spans {
    lattice: FinLattice,
}

impl Spans {
    pub fn new(lattice: FinLattice) -> Self {
        Spans { lattice }
    }

    pub fn lattice(&self) -> &FinLattice {
        &self.lattice
    }

    /// Every `n`-span, found by filling intervals from the feet upwards.
    pub fn enumerate(&self, n: usize) -> Vec<NSpan> {
        let order: Vec<(usize, usize)> = (0..=n).flat_map(|len| (0..=n - len).map(move |v| (v, v + len))).collect();
        let mut out = Vec::new();
        let mut val = vec![0; slot(0, n + 1)];
        self.fill(&order, 0, &mut val, n, &mut out);
        out
    }

    fn fill(&self, order: &[(usize, usize)], pos: usize, val: &mut Vec<usize>, n: usize, out: &mut Vec<NSpan>) {
        let Some(&(v, w)) = order.get(pos) else {
            out.push(NSpan { n, val: val.clone() });
            return;
        };
        for x in 0..self.lattice.len() {
            if v < w && !(self.lattice.leq(x, val[slot(v + 1, w)]) && self.lattice.leq(x, val[slot(v, w - 1)])) {
                continue;
            }
            val[slot(v, w)] = x;
            self.fill(order, pos + 1, val, n, out);
        }
    }
}

impl SimplicialSet for Spans {
    type Simplex = NSpan;

    fn dim(&self, a: &NSpan) -> usize {
        a.n
    }

    fn act(&self, a: &NSpan, f: &MonotoneMap) -> Result<NSpan> {
        if f.cod() != a.n {
            bail!(Domain, "map codomain [{}] does not match span dimension {}", f.cod(), a.n);
        }
        NSpan::from_fn(&self.lattice, f.dom(), |v, w| a.get(f.apply(v), f.apply(w)))
    }
}

impl Compository for Spans {
    fn compose(&self, a: &NSpan, k: usize, b: &NSpan) -> Result<NSpan> {
        if !is_k_composable(self, a, k, b)? {
            bail!(Composition, "terminal {k}-face of A differs from initial {k}-face of B");
        }
        let m = a.n;
        NSpan::from_fn(&self.lattice, m + b.n - k, |v, w| {
            if w <= m {
                a.get(v, w)
            } else if v + k >= m {
                b.get(v + k - m, w + k - m)
            } else {
                self.lattice.meet(a.get(v, m), b.get(0, w + k - m))
            }
        })
    }
}

/// Which functor `Sp_n → [n]` a nerve path is precomposed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    /// `(v, w) ↦ v`.
    Left,
    /// `(v, w) ↦ n - w`.
    Right,
}

/// Turns a path in the lattice's poset category into a span.
pub fn nerve_to_spans(lattice: &FinLattice, path: &NervePath, embedding: Embedding) -> Result<NSpan> {
    let n = path.len();
    let obj = path.objects();
    if obj.iter().any(|&o| o >= lattice.len()) {
        bail!(Invalid, "path object out of range for the lattice");
    }
    NSpan::from_fn(lattice, n, |v, w| match embedding {
        Embedding::Left => obj[v],
        Embedding::Right => obj[n - w],
    })
}

/// Every `n`-span `D` with `D ∂_i = F` for each listed face `(i, F)`.
pub fn fillers(spans: &Spans, n: usize, faces: &[(usize, NSpan)]) -> Result<Vec<NSpan>> {
    let maps = faces.iter().map(|(i, f)| Ok((face(*i, n)?, f))).collect::<Result<Vec<_>>>()?;
    let candidates = spans.enumerate(n);
    let found: Vec<Result<Option<NSpan>>> = candidates
        .into_par_iter()
        .map(|d| {
            for (m, f) in &maps {
                if &spans.act(&d, m)? != *f {
                    return Ok(None);
                }
            }
            Ok(Some(d))
        })
        .collect();
    found.into_iter().filter_map(Result::transpose).collect()
}

/// Searches for a filler of the inner horn `Λ³₂` given by its faces
/// `A = D∂₀`, `B = D∂₁` and `C = D∂₃`.
pub fn horn_filler_search(spans: &Spans, a: &NSpan, b: &NSpan, c: &NSpan) -> Result<Option<NSpan>> {
    if a.n != 2 || b.n != 2 || c.n != 2 {
        bail!(Domain, "a horn in dimension 3 consists of 2-spans");
    }
    let d = |i| face(i, 2);
    let adjacent = spans.act(a, &d(0)?)? == spans.act(b, &d(0)?)?
        && spans.act(b, &d(2)?)? == spans.act(c, &d(1)?)?
        && spans.act(c, &d(0)?)? == spans.act(a, &d(2)?)?;
    if !adjacent {
        bail!(Compatibility, "faces do not form a horn");
    }
    let found = fillers(spans, 3, &[(0, a.clone()), (1, b.clone()), (3, c.clone())])?;
    Ok(found.into_iter().next())
}

/// The three 2-spans over the diamond that form an unfillable horn.
pub fn diamond_horn(lattice: &FinLattice) -> Result<(NSpan, NSpan, NSpan)> {
    let [bot, alpha, beta] = ["bot", "alpha", "beta"].map(|n| lattice.index(n));
    let (bot, alpha, beta) = (bot?, alpha?, beta?);
    let span = |top: usize, left: usize| {
        NSpan::from_fn(lattice, 2, |v, w| match (v, w) {
            (0, 2) => top,
            (0, 1) => left,
            _ => bot,
        })
    };
    Ok((span(alpha, bot)?, span(beta, beta)?, span(beta, bot)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::degeneracy;

    fn diamond() -> (Spans, [usize; 4]) {
        let l = FinLattice::diamond();
        let ix = ["bot", "alpha", "beta", "top"].map(|n| l.index(n).unwrap());
        (Spans::new(l), ix)
    }

    #[test]
    fn lattice_meets() {
        let l = FinLattice::diamond();
        let [bot, alpha, beta, top] = ["bot", "alpha", "beta", "top"].map(|n| l.index(n).unwrap());
        assert_eq!(l.meet(alpha, beta), top);
        assert_eq!(l.meet(alpha, bot), alpha);
        assert!(l.leq(top, bot));
        assert!(!l.leq(beta, alpha));
        // Two incomparable elements with two incomparable lower bounds.
        let names = ["a", "b", "c", "d"].map(String::from).to_vec();
        assert!(FinLattice::new(names, &[(2, 0), (2, 1), (3, 0), (3, 1)]).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let l = FinLattice::diamond();
        assert_eq!(FinLattice::from_spec(&l.to_spec()).unwrap(), l);
    }

    #[test]
    fn monotonicity_is_enforced() {
        let (s, [bot, alpha, ..]) = diamond();
        assert!(NSpan::from_fn(s.lattice(), 1, |v, w| if v == w { alpha } else { bot }).is_err());
        assert!(NSpan::from_fn(s.lattice(), 1, |v, w| if v == w { bot } else { alpha }).is_ok());
    }

    #[test]
    fn outer_face_drops_the_middle_column() {
        let (s, [bot, alpha, beta, top]) = diamond();
        let a = NSpan::from_fn(s.lattice(), 2, |v, w| match (v, w) {
            (0, 2) => top,
            (0, 1) => alpha,
            (1, 2) => beta,
            _ => bot,
        })
        .unwrap();
        let outer = s.act(&a, &face(1, 2).unwrap()).unwrap();
        assert_eq!(outer, NSpan::from_fn(s.lattice(), 1, |v, w| if v < w { top } else { bot }).unwrap());
    }

    #[test]
    fn degeneracy_duplicates_a_vertex() {
        let (s, [bot, alpha, _, top]) = diamond();
        let a = NSpan::from_fn(s.lattice(), 1, |v, w| match (v, w) {
            (0, 1) => top,
            (0, 0) => alpha,
            _ => bot,
        })
        .unwrap();
        let d = s.act(&a, &degeneracy(0, 1).unwrap()).unwrap();
        let expect = [((0, 0), alpha), ((1, 1), alpha), ((0, 1), alpha), ((2, 2), bot), ((1, 2), top), ((0, 2), top)];
        for ((v, w), x) in expect {
            assert_eq!(d.get(v, w), x, "({v},{w})");
        }
    }

    #[test]
    fn composing_two_one_spans_takes_the_meet() {
        let (s, [bot, alpha, beta, top]) = diamond();
        let a = NSpan::from_fn(s.lattice(), 1, |v, w| if v < w { alpha } else { bot }).unwrap();
        let b = NSpan::from_fn(s.lattice(), 1, |v, w| if v < w { beta } else { bot }).unwrap();
        let ab = s.compose(&a, 0, &b).unwrap();
        assert_eq!(ab.get(0, 2), top);
        assert_eq!((ab.get(0, 1), ab.get(1, 2)), (alpha, beta));
    }

    #[test]
    fn two_span_after_one_span_matches_the_pullback_diagram() {
        let l = FinLattice::chain(3);
        let s = Spans::new(l.clone());
        let a = NSpan::from_fn(&l, 2, |v, w| 3 - (w - v)).unwrap();
        let b = NSpan::from_fn(&l, 1, |v, w| if v < w { 1 } else { 3 }).unwrap();
        let c = s.compose(&a, 0, &b).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.get(0, 3), l.meet(a.get(0, 2), b.get(0, 1)));
        assert_eq!(c.get(1, 3), l.meet(a.get(1, 2), b.get(0, 1)));
        assert_eq!(c.get(2, 3), b.get(0, 1));
        assert_eq!(c.get(0, 2), a.get(0, 2));
    }

    #[test]
    fn nerve_chain_becomes_a_span() {
        let l = FinLattice::diamond();
        let cat = l.as_category();
        let path = NervePath::from_names(&cat, "top", &["top<=alpha"]).unwrap();
        let span = nerve_to_spans(&l, &path, Embedding::Left).unwrap();
        let [alpha, top] = ["alpha", "top"].map(|n| l.index(n).unwrap());
        assert_eq!((span.get(0, 1), span.get(0, 0), span.get(1, 1)), (top, top, alpha));
        let right = nerve_to_spans(&l, &path, Embedding::Right).unwrap();
        assert_eq!((right.get(0, 1), right.get(0, 0), right.get(1, 1)), (top, alpha, top));
    }

    #[test]
    fn diamond_horn_has_no_filler() {
        let (s, _) = diamond();
        let (a, b, c) = diamond_horn(s.lattice()).unwrap();
        assert_eq!(horn_filler_search(&s, &a, &b, &c).unwrap(), None);
        assert!(fillers(&s, 3, &[(0, a), (1, b)]).unwrap().is_empty());
    }

    #[test]
    fn horn_of_a_span_is_filled() {
        let (s, _) = diamond();
        let spans3 = s.enumerate(3);
        let d = &spans3[spans3.len() / 2];
        let f = |i| s.act(d, &face(i, 3).unwrap()).unwrap();
        let found = fillers(&s, 3, &[(0, f(0)), (1, f(1)), (3, f(3))]).unwrap();
        assert!(found.contains(d));
        assert!(horn_filler_search(&s, &f(0), &f(1), &f(3)).unwrap().is_some());
    }

    #[test]
    fn json_round_trip() {
        let (s, _) = diamond();
        let (a, _, _) = diamond_horn(s.lattice()).unwrap();
        assert_eq!(NSpan::from_json(s.lattice(), &a.to_json(s.lattice())).unwrap(), a);
    }
    #[test]
    fn left_embedding_is_a_map_of_compositories() {
        let l = FinLattice::diamond();
        let nerve = crate::nerve::Nerve::new(l.as_category());
        let s = Spans::new(l.clone());
        let emb = |p: &NervePath| nerve_to_spans(&l, p, Embedding::Left).unwrap();
        for n in 0..=3 {
            for p in nerve.paths(n) {
                for f in (0..=3).flat_map(|d| MonotoneMap::all(d, n)) {
                    assert_eq!(emb(&nerve.act(&p, &f).unwrap()), s.act(&emb(&p), &f).unwrap());
                }
            }
        }
        for m in 0..=2 {
            for n in 0..=2 {
                for k in 0..=m.min(n) {
                    for a in nerve.paths(m) {
                        for b in nerve.paths(n) {
                            if let Ok(ab) = nerve.compose(&a, k, &b) {
                                assert_eq!(emb(&ab), s.compose(&emb(&a), k, &emb(&b)).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn right_embedding_is_valid_but_not_natural() {
        let l = FinLattice::chain(2);
        let nerve = crate::nerve::Nerve::new(l.as_category());
        let s = Spans::new(l.clone());
        let emb = |p: &NervePath| nerve_to_spans(&l, p, Embedding::Right).unwrap();
        let p = NervePath::from_names(nerve.category(), "0", &["0<=1"]).unwrap();
        let d0 = face(0, 1).unwrap();
        assert_ne!(emb(&nerve.act(&p, &d0).unwrap()), s.act(&emb(&p), &d0).unwrap());
        assert_eq!(emb(&nerve.act(&p, &face(1, 1).unwrap()).unwrap()), s.act(&emb(&p), &d0).unwrap());
    }
}
