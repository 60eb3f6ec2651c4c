//! Finite (pseudo)metric spaces with distances in the non-negative
//! rationals extended by `inf`.
//!
//! The same data serves two structures: the compository [`M1`] of metrics on
//! the ordinals `[n]`, and the gleaf [`MetricGleaf`] of metrics on finite
//! sets, which glues along shortest paths through the overlap.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compository::{is_k_composable, Compository, SimplicialSet};
use crate::error::{bail, Error, Result};
use crate::finset::{FinMap, FinSet, Label};
use crate::gleaf::{onto_images, Cover, FinSetSystem, Gleaf};
use crate::rational::{q, ExtRational};
use crate::simplex::{face, MonotoneMap};

/// A distance table on a finite set of points, possibly with infinite
/// entries. Points are kept in label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMetric {
    points: Vec<Label>,
    symmetric: bool,
    d: Vec<ExtRational>,
}

/// External form: `{"points": [...], "symmetric": true, "d": [["x","y","3/2"], ...]}`.
/// Diagonal entries may be omitted; in symmetric mode one orientation of
/// each pair is enough.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub points: Vec<Label>,
    #[serde(default = "default_symmetric")]
    pub symmetric: bool,
    pub d: Vec<(Label, Label, ExtRational)>,
}

fn default_symmetric() -> bool {
    true
}

impl FiniteMetric {
    /// Builds a metric from a distance function on indices into `points`
    /// (sorted first) and checks every metric axiom.
    pub fn from_fn(
        points: impl IntoIterator<Item = Label>,
        symmetric: bool,
        f: impl Fn(&Label, &Label) -> ExtRational,
    ) -> Result<Self> {
        let m = FiniteMetric::from_fn_unchecked(points, symmetric, f);
        m.validate()?;
        Ok(m)
    }

    /// For restrictions of a valid metric, which are valid by construction.
    fn from_fn_unchecked(
        points: impl IntoIterator<Item = Label>,
        symmetric: bool,
        f: impl Fn(&Label, &Label) -> ExtRational,
    ) -> Self {
        let points: Vec<Label> = points.into_iter().collect::<FinSet>().into_iter().collect();
        let d = points.iter().flat_map(|x| points.iter().map(|y| f(x, y))).collect();
        FiniteMetric { points, symmetric, d }
    }

    /// The metric on `[n] = {0, ..., n}` with entries `rows[x][y]`.
    pub fn ordinal(rows: &[Vec<ExtRational>], symmetric: bool) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            bail!(Invalid, "distance table is not square");
        }
        FiniteMetric::from_fn((0..n).map(Label::from), symmetric, |x, y| rows[idx(x)][idx(y)].clone())
    }

    fn validate(&self) -> Result<()> {
        let n = self.points.len();
        for x in 0..n {
            if !self.at(x, x).is_zero() {
                bail!(Invalid, "d({0}, {0}) is not zero", self.points[x]);
            }
            for y in 0..n {
                if self.symmetric && self.at(x, y) != self.at(y, x) {
                    bail!(Invalid, "d({}, {}) differs from its reverse", self.points[x], self.points[y]);
                }
                for z in 0..n {
                    if self.at(x, z) > &(self.at(x, y) + self.at(y, z)) {
                        bail!(
                            Invalid,
                            "triangle inequality fails for {}, {}, {}",
                            self.points[x],
                            self.points[y],
                            self.points[z]
                        );
                    }
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn point_set(&self) -> FinSet {
        self.points.iter().cloned().collect()
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn at(&self, x: usize, y: usize) -> &ExtRational {
        &self.d[x * self.points.len() + y]
    }

    fn position(&self, x: &Label) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    /// The distance between two named points.
    pub fn dist(&self, x: &Label, y: &Label) -> Result<&ExtRational> {
        match (self.position(x), self.position(y)) {
            (Some(i), Some(j)) => Ok(self.at(i, j)),
            _ => bail!(Domain, "{x} or {y} is not a point of the metric"),
        }
    }

    pub fn to_spec(&self) -> MetricSpec {
        let mut d = Vec::new();
        for (i, x) in self.points.iter().enumerate() {
            for (j, y) in self.points.iter().enumerate() {
                if i != j && (!self.symmetric || i < j) {
                    d.push((x.clone(), y.clone(), self.at(i, j).clone()));
                }
            }
        }
        MetricSpec { points: self.points.clone(), symmetric: self.symmetric, d }
    }

    /// Reads a complete metric; every off-diagonal distance must be given.
    pub fn from_spec(spec: &MetricSpec) -> Result<Self> {
        let partial = PartialMetric::from_spec(spec)?;
        let n = partial.points.len();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                match partial.given(x, y) {
                    Some(v) => table.push(v),
                    None => bail!(Parse, "distance from {} to {} is missing", partial.points[x], partial.points[y]),
                }
            }
        }
        FiniteMetric::from_fn(partial.points.clone(), spec.symmetric, |x, y| {
            table[partial.position(x).expect("point") * n + partial.position(y).expect("point")].clone()
        })
    }
}

impl Serialize for FiniteMetric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMetric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FiniteMetric::from_spec(&MetricSpec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn idx(x: &Label) -> usize {
    x.index().expect("ordinal points have numeric labels")
}

/// Distances known on some pairs of a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMetric {
    points: Vec<Label>,
    symmetric: bool,
    given: BTreeMap<(usize, usize), ExtRational>,
}

impl PartialMetric {
    pub fn new(points: impl IntoIterator<Item = Label>, symmetric: bool) -> Self {
        PartialMetric { points: points.into_iter().collect::<FinSet>().into_iter().collect(), symmetric, given: BTreeMap::new() }
    }

    fn position(&self, x: &Label) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    fn given(&self, x: usize, y: usize) -> Option<ExtRational> {
        if x == y {
            return Some(ExtRational::zero());
        }
        self.given.get(&(x, y)).or_else(|| if self.symmetric { self.given.get(&(y, x)) } else { None }).cloned()
    }

    /// Records `d(x, y) = v`, failing on a conflicting earlier value.
    pub fn set(&mut self, x: &Label, y: &Label, v: ExtRational) -> Result<()> {
        let (Some(i), Some(j)) = (self.position(x), self.position(y)) else {
            bail!(Domain, "{x} or {y} is not a point");
        };
        if let Some(old) = self.given(i, j) {
            if old != v {
                bail!(Compatibility, "d({x}, {y}) is given as both {old} and {v}");
            }
            return Ok(());
        }
        self.given.insert((i, j), v);
        Ok(())
    }

    pub fn from_spec(spec: &MetricSpec) -> Result<Self> {
        let mut p = PartialMetric::new(spec.points.iter().cloned(), spec.symmetric);
        if p.points.len() != spec.points.len() {
            bail!(Parse, "points are listed twice");
        }
        for (x, y, v) in &spec.d {
            p.set(x, y, v.clone())?;
        }
        Ok(p)
    }

    /// Collects the distances of several metrics on subsets of a common set.
    /// Fails if two of them disagree on a shared pair.
    pub fn from_sections<'a>(metrics: impl IntoIterator<Item = &'a FiniteMetric> + Clone, symmetric: bool) -> Result<Self> {
        let points: FinSet = metrics.clone().into_iter().flat_map(|m| m.points.iter().cloned()).collect();
        let mut p = PartialMetric::new(points, symmetric);
        for m in metrics {
            for (i, x) in m.points.iter().enumerate() {
                for (j, y) in m.points.iter().enumerate() {
                    p.set(x, y, m.at(i, j).clone())?;
                }
            }
        }
        Ok(p)
    }

    /// The largest distance function compatible with the given entries:
    /// shortest paths along given edges, `inf` where there is no path.
    pub fn shortest_path_closure(&self) -> Vec<ExtRational> {
        let n = self.points.len();
        let mut d = vec![ExtRational::Infinite; n * n];
        for x in 0..n {
            for y in 0..n {
                if let Some(v) = self.given(x, y) {
                    d[x * n + y] = v;
                }
            }
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let via = &d[x * n + k] + &d[k * n + y];
                    if via < d[x * n + y] {
                        d[x * n + y] = via;
                    }
                }
            }
        }
        d
    }
}

impl PartialMetric {
    pub fn points(&self) -> &[Label] {
        &self.points
    }

    /// The given distances that a path of given edges undercuts, as
    /// `(x, y, given, shortest)`. Empty iff an extension exists.
    pub fn closure_conflicts(&self) -> Vec<(Label, Label, ExtRational, ExtRational)> {
        let n = self.points.len();
        let closure = self.shortest_path_closure();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if let Some(v) = self.given(x, y) {
                    if closure[x * n + y] != v {
                        out.push((self.points[x].clone(), self.points[y].clone(), v, closure[x * n + y].clone()));
                    }
                }
            }
        }
        out
    }
}

/// Decides whether the given distances extend to a metric on all points.
/// An extension exists iff the shortest-path closure reproduces every
/// given distance; the closure is then one.
pub fn extension_exists(partial: &PartialMetric) -> bool {
    extension(partial).is_some()
}

/// A metric extending the given distances, if one exists.
pub fn extension(partial: &PartialMetric) -> Option<FiniteMetric> {
    let n = partial.points.len();
    let closure = partial.shortest_path_closure();
    for x in 0..n {
        for y in 0..n {
            if let Some(v) = partial.given(x, y) {
                if closure[x * n + y] != v {
                    return None;
                }
            }
        }
    }
    FiniteMetric::from_fn(partial.points.clone(), partial.symmetric, |a, b| {
        closure[partial.position(a).expect("point") * n + partial.position(b).expect("point")].clone()
    })
    .ok()
}

/// The compository of metrics on `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct M1 {
    pub symmetric: bool,
}

impl M1 {
    pub fn new(symmetric: bool) -> Self {
        M1 { symmetric }
    }

    fn check_mode(&self, a: &FiniteMetric) -> Result<()> {
        if a.symmetric != self.symmetric {
            bail!(Domain, "metric symmetry flag does not match the compository");
        }
        if a.points.iter().enumerate().any(|(i, p)| p.index() != Some(i)) {
            bail!(Domain, "points of a simplex must be 0, ..., n");
        }
        Ok(())
    }

    /// A random `n`-simplex: random edge weights on a half-integer grid,
    /// closed under shortest paths.
    pub fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> FiniteMetric {
        random_metric(rng, (0..=n).map(Label::from).collect(), self.symmetric, false)
    }
}

/// A random metric on `points` from random grid weights closed under
/// shortest paths. With `allow_inf`, some edges are missing, which can leave
/// infinite distances.
pub fn random_metric(rng: &mut ChaCha8Rng, points: FinSet, symmetric: bool, allow_inf: bool) -> FiniteMetric {
    let mut p = PartialMetric::new(points, symmetric);
    let n = p.points.len();
    for x in 0..n {
        for y in 0..n {
            if x == y || (symmetric && y < x) {
                continue;
            }
            if allow_inf && rng.random_ratio(1, 4) {
                continue;
            }
            let w = ExtRational::Finite(q(rng.random_range(0..=12), rng.random_range(1..=4)));
            p.given.insert((x, y), w);
        }
    }
    let closure = p.shortest_path_closure();
    let pos = |a: &Label| p.position(a).expect("point");
    FiniteMetric::from_fn(p.points.clone(), symmetric, |a, b| closure[pos(a) * n + pos(b)].clone())
        .expect("shortest-path closures are metrics")
}

impl SimplicialSet for M1 {
    type Simplex = FiniteMetric;

    fn dim(&self, a: &FiniteMetric) -> usize {
        a.points.len().saturating_sub(1)
    }

    fn act(&self, a: &FiniteMetric, f: &MonotoneMap) -> Result<FiniteMetric> {
        self.check_mode(a)?;
        if f.cod() != self.dim(a) {
            bail!(Domain, "map codomain [{}] does not match simplex dimension {}", f.cod(), self.dim(a));
        }
        Ok(FiniteMetric::from_fn_unchecked((0..=f.dom()).map(Label::from), a.symmetric, |x, y| {
            a.at(f.apply(idx(x)), f.apply(idx(y))).clone()
        }))
    }
}

impl Compository for M1 {
    fn compose(&self, a: &FiniteMetric, k: usize, b: &FiniteMetric) -> Result<FiniteMetric> {
        self.check_mode(a)?;
        self.check_mode(b)?;
        if !is_k_composable(self, a, k, b)? {
            bail!(Composition, "A and B differ on the shared {k}-face");
        }
        let (m, n) = (self.dim(a), self.dim(b));
        let shift = m - k;
        let through = |x: usize, z: usize, first: &FiniteMetric, fx: usize, second: &FiniteMetric, sz: usize| {
            (shift..=m)
                .map(|y| {
                    let (ya, yb) = if fx == 0 { (y, y - shift) } else { (y - shift, y) };
                    first.at(x - fx, ya) + second.at(yb, z - sz)
                })
                .min()
                .expect("the overlap is never empty")
        };
        FiniteMetric::from_fn((0..=m + n - k).map(Label::from), self.symmetric, |x, z| {
            let (x, z) = (idx(x), idx(z));
            if x <= m && z <= m {
                a.at(x, z).clone()
            } else if x >= shift && z >= shift {
                b.at(x - shift, z - shift).clone()
            } else if x <= m {
                through(x, z, a, 0, b, shift)
            } else {
                through(x, z, b, shift, a, 0)
            }
        })
    }
}

/// The gleaf of metrics on finite sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricGleaf {
    pub symmetric: bool,
}

impl MetricGleaf {
    pub fn new(symmetric: bool) -> Self {
        MetricGleaf { symmetric }
    }
}

/// Glues metrics on two subsets `A`, `B` of their union along shortest
/// paths through `A ∩ B`. Inputs must agree on the intersection.
pub fn metric_glue(da: &FiniteMetric, db: &FiniteMetric) -> Result<FiniteMetric> {
    if da.symmetric != db.symmetric {
        bail!(Domain, "cannot glue a symmetric and a non-symmetric metric");
    }
    let common: Vec<&Label> = da.points.iter().filter(|p| db.position(p).is_some()).collect();
    for x in &common {
        for y in &common {
            if da.dist(x, y)? != db.dist(x, y)? {
                bail!(Compatibility, "d({x}, {y}) differs on the overlap");
            }
        }
    }
    let through = |x: &Label, z: &Label, first: &FiniteMetric, second: &FiniteMetric| -> ExtRational {
        common
            .iter()
            .map(|y| first.dist(x, y).expect("point") + second.dist(y, z).expect("point"))
            .min()
            .unwrap_or(ExtRational::Infinite)
    };
    let points: FinSet = da.points.iter().chain(&db.points).cloned().collect();
    FiniteMetric::from_fn(points, da.symmetric, |x, z| {
        let (xa, xb, za, zb) = (da.position(x).is_some(), db.position(x).is_some(), da.position(z).is_some(), db.position(z).is_some());
        match (xa, za, xb, zb) {
            (true, true, _, _) => da.dist(x, z).expect("point").clone(),
            (_, _, true, true) => db.dist(x, z).expect("point").clone(),
            (true, _, _, true) => through(x, z, da, db),
            _ => through(x, z, db, da),
        }
    })
}

impl Gleaf for MetricGleaf {
    type System = FinSetSystem;
    type Section = FiniteMetric;

    fn system(&self) -> &FinSetSystem {
        &FinSetSystem
    }

    fn base(&self, s: &FiniteMetric) -> FinSet {
        s.point_set()
    }

    fn restrict(&self, s: &FiniteMetric, f: &FinMap) -> Result<FiniteMetric> {
        if !f.cod().iter().eq(s.points.iter()) {
            bail!(Domain, "map codomain is not the point set of the metric");
        }
        Ok(FiniteMetric::from_fn_unchecked(f.dom(), s.symmetric, |x, y| {
            s.dist(f.apply(x).expect("total"), f.apply(y).expect("total")).expect("point").clone()
        }))
    }

    fn glue(&self, cover: &Cover<FinMap>, a: &FiniteMetric, b: &FiniteMetric) -> Result<FiniteMetric> {
        let (a, b) = onto_images(self, cover, a, b)?;
        metric_glue(&a, &b)
    }
}

/// Three 2-simplices forming an inner horn `Λ³₂` (faces `∂₀`, `∂₁`, `∂₃` of a
/// would-be 3-simplex) with no filler.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnfillableHorn {
    pub a: FiniteMetric,
    pub b: FiniteMetric,
    pub c: FiniteMetric,
}

impl UnfillableHorn {
    /// The distances of the three faces placed on the points `0..3`.
    pub fn union_data(&self) -> Result<PartialMetric> {
        let relabel = |m: &FiniteMetric, i: usize| -> Result<FiniteMetric> {
            let f = face(i, 3)?;
            let pairs = (0..=2).map(|v| (Label::from(v), Label::from(f.apply(v))));
            let mut p = PartialMetric::new(pairs.clone().map(|(_, y)| y), m.symmetric);
            for (x, fx) in pairs.clone() {
                for (y, fy) in pairs.clone() {
                    p.set(&fx, &fy, m.dist(&x, &y)?.clone())?;
                }
            }
            extension(&p).ok_or_else(|| Error::Invalid("face is not a metric".into()))
        };
        let faces = [relabel(&self.a, 0)?, relabel(&self.b, 1)?, relabel(&self.c, 3)?];
        PartialMetric::from_sections(faces.iter(), self.a.symmetric)
    }
}

/// Searches random integer grids `{0, ..., bound}` for an inner horn in
/// `M1` with no filler. The horn's three faces already fix every edge of the
/// would-be 3-simplex, so a filler exists iff those edges form a metric.
pub fn find_unfillable_horn(m1: &M1, bound: u32, seed: u64, attempts: usize) -> Result<Option<UnfillableHorn>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let mut table = vec![vec![ExtRational::zero(); 4]; 4];
        for x in 0..4 {
            for y in 0..4 {
                if x < y || (x > y && !m1.symmetric) {
                    table[x][y] = ExtRational::int(rng.random_range(0..=bound as i64));
                } else if x > y {
                    table[x][y] = table[y][x].clone();
                }
            }
        }
        let face_metric = |i: usize| -> Option<FiniteMetric> {
            let f = face(i, 3).ok()?;
            let rows: Vec<Vec<ExtRational>> =
                (0..=2).map(|x| (0..=2).map(|y| table[f.apply(x)][f.apply(y)].clone()).collect()).collect();
            FiniteMetric::ordinal(&rows, m1.symmetric).ok()
        };
        let (Some(a), Some(b), Some(c)) = (face_metric(0), face_metric(1), face_metric(3)) else {
            continue;
        };
        if FiniteMetric::ordinal(&table, m1.symmetric).is_ok() {
            continue;
        }
        let horn = UnfillableHorn { a, b, c };
        if !extension_exists(&horn.union_data()?) {
            return Ok(Some(horn));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::labels;
    use crate::simplex::{degeneracy, source_incl};

    fn e(n: i64) -> ExtRational {
        ExtRational::int(n)
    }

    fn line(symmetric: bool) -> FiniteMetric {
        FiniteMetric::ordinal(&[vec![e(0), e(1), e(3)], vec![e(1), e(0), e(2)], vec![e(3), e(2), e(0)]], symmetric).unwrap()
    }

    #[test]
    fn validation() {
        assert!(FiniteMetric::ordinal(&[vec![e(0), e(5), e(1)], vec![e(5), e(0), e(1)], vec![e(1), e(1), e(0)]], true).is_err());
        assert!(FiniteMetric::ordinal(&[vec![e(0), e(1)], vec![e(2), e(0)]], true).is_err());
        assert!(FiniteMetric::ordinal(&[vec![e(0), e(1)], vec![e(2), e(0)]], false).is_ok());
        assert!(FiniteMetric::ordinal(&[vec![e(1)]], true).is_err());
        // Pseudometrics are allowed.
        assert!(FiniteMetric::ordinal(&[vec![e(0), e(0)], vec![e(0), e(0)]], true).is_ok());
    }

    #[test]
    fn restriction_and_degeneracy() {
        let m1 = M1::new(true);
        let a = line(true);
        assert_eq!(m1.act(&a, &MonotoneMap::identity(2)).unwrap(), a);
        let edge = m1.act(&a, &source_incl(1, 2).unwrap()).unwrap();
        assert_eq!(edge.dist(&"0".into(), &"1".into()).unwrap(), &e(1));
        let point = m1.act(&a, &MonotoneMap::new(0, 2, vec![2]).unwrap()).unwrap();
        let dup = m1.act(&point, &degeneracy(0, 0).unwrap()).unwrap();
        assert_eq!(dup.dist(&"0".into(), &"1".into()).unwrap(), &e(0));
    }

    #[test]
    fn glue_through_a_single_point() {
        let ab = FiniteMetric::from_fn(labels(["x", "w"]), true, |p, r| if p == r { e(0) } else { e(1) }).unwrap();
        let bc = FiniteMetric::from_fn(labels(["w", "z"]), true, |p, r| if p == r { e(0) } else { e(2) }).unwrap();
        let g = metric_glue(&ab, &bc).unwrap();
        assert_eq!(g.dist(&"x".into(), &"z".into()).unwrap(), &e(3));
        assert_eq!(g.dist(&"z".into(), &"x".into()).unwrap(), &e(3));
    }

    #[test]
    fn disjoint_glue_is_infinite() {
        let one = |p: &str| FiniteMetric::from_fn(labels([p]), true, |_, _| e(0)).unwrap();
        let g = metric_glue(&one("x"), &one("y")).unwrap();
        assert!(g.dist(&"x".into(), &"y".into()).unwrap().is_infinite());
    }

    #[test]
    fn glue_into_a_superset_is_the_superset() {
        let big = line(true);
        let small = MetricGleaf::new(true).restrict(&big, &FinMap::inclusion(&labels(["0", "2"]), &big.point_set()).unwrap()).unwrap();
        assert_eq!(metric_glue(&small, &big).unwrap(), big);
        assert_eq!(metric_glue(&big, &small).unwrap(), big);
    }

    #[test]
    fn incompatible_glue_is_rejected() {
        let a = line(true);
        let b = FiniteMetric::ordinal(&[vec![e(0), e(2)], vec![e(2), e(0)]], true).unwrap();
        assert!(matches!(metric_glue(&a, &b), Err(Error::Compatibility(_))));
    }

    #[test]
    fn compose_bridges_through_the_shared_point() {
        let m1 = M1::new(true);
        let a = FiniteMetric::ordinal(&[vec![e(0), e(1)], vec![e(1), e(0)]], true).unwrap();
        let b = FiniteMetric::ordinal(&[vec![e(0), e(2)], vec![e(2), e(0)]], true).unwrap();
        let ab = m1.compose(&a, 0, &b).unwrap();
        assert_eq!(ab.dist(&"0".into(), &"2".into()).unwrap(), &e(3));
        let face = m1.act(&a, &MonotoneMap::new(0, 1, vec![1]).unwrap()).unwrap();
        assert_eq!(m1.compose(&a, 0, &face).unwrap(), a);
    }

    #[test]
    fn non_symmetric_compose_uses_both_directions() {
        let m1 = M1::new(false);
        let a = FiniteMetric::ordinal(&[vec![e(0), e(1)], vec![e(4), e(0)]], false).unwrap();
        let b = FiniteMetric::ordinal(&[vec![e(0), e(2)], vec![e(5), e(0)]], false).unwrap();
        let ab = m1.compose(&a, 0, &b).unwrap();
        assert_eq!(ab.dist(&"0".into(), &"2".into()).unwrap(), &e(3));
        assert_eq!(ab.dist(&"2".into(), &"0".into()).unwrap(), &e(9));
    }

    #[test]
    fn three_set_obstruction() {
        let mut p = PartialMetric::new(labels(["x", "y", "z"]), true);
        p.set(&"x".into(), &"y".into(), e(1)).unwrap();
        p.set(&"y".into(), &"z".into(), e(1)).unwrap();
        p.set(&"x".into(), &"z".into(), e(3)).unwrap();
        assert!(!extension_exists(&p));
        let mut two = PartialMetric::new(labels(["x", "y", "z"]), true);
        two.set(&"x".into(), &"y".into(), e(1)).unwrap();
        two.set(&"y".into(), &"z".into(), e(1)).unwrap();
        assert!(extension_exists(&two));
    }

    #[test]
    fn horn_search_finds_a_counterexample() {
        for symmetric in [true, false] {
            let m1 = M1::new(symmetric);
            let horn = find_unfillable_horn(&m1, 6, 7, 10_000).unwrap().expect("a horn is found");
            let d = |i| face(i, 2).unwrap();
            assert_eq!(m1.act(&horn.a, &d(0)).unwrap(), m1.act(&horn.b, &d(0)).unwrap());
            assert_eq!(m1.act(&horn.b, &d(2)).unwrap(), m1.act(&horn.c, &d(1)).unwrap());
            assert_eq!(m1.act(&horn.c, &d(0)).unwrap(), m1.act(&horn.a, &d(2)).unwrap());
            assert!(!extension_exists(&horn.union_data().unwrap()));
        }
    }

    #[test]
    fn json_round_trip() {
        let a = line(false);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<FiniteMetric>(&text).unwrap(), a);
        let spec: MetricSpec =
            serde_json::from_str(r#"{"points":["x","y"],"symmetric":true,"d":[["x","y","inf"]]}"#).unwrap();
        assert!(FiniteMetric::from_spec(&spec).unwrap().dist(&"y".into(), &"x".into()).unwrap().is_infinite());
    }
}
