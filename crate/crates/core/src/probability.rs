//! Joint distributions with exact rational weights.
//!
//! [`PO`] is the compository of distributions of `n + 1` variables over a
//! fixed outcome set; [`ProbGleaf`] is the gleaf of distributions on finite
//! sets of variables, which glues by making the two sides conditionally
//! independent given their overlap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compository::{is_k_composable, Compository, SimplicialSet};
use crate::error::{bail, Error, Result};
use crate::finset::{FinMap, FinSet, Label};
use crate::gleaf::{onto_images, Cover, FinSetSystem, Gleaf};
use crate::rational::{format_q, parse_q, qi, Q};
use crate::relational::{join_unchecked, Relation};
use crate::simplex::{target_incl, MonotoneMap};

/// A probability table on `outcomes^vars`. Variables and outcomes are
/// sorted; the first variable is the most significant digit of the index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dist {
    vars: Vec<Label>,
    outcomes: Vec<String>,
    w: Vec<Q>,
}

/// External form: `{"vars": ["A","B"], "outcomes": ["0","1"], "w": {"0,0": "1/2"}}`.
/// Keys list outcomes in the order of `vars`; omitted keys have weight 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistSpec {
    pub vars: Vec<Label>,
    pub outcomes: Vec<String>,
    pub w: BTreeMap<String, String>,
}

fn sorted_unique<T: Ord + Clone>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = items.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

impl Dist {
    /// Builds a distribution from a weight function on outcome-index tuples
    /// (aligned with the sorted variables) and checks normalization.
    pub fn from_fn(
        vars: impl IntoIterator<Item = Label>,
        outcomes: &[String],
        f: impl Fn(&[usize]) -> Q,
    ) -> Result<Self> {
        let d = Dist::from_fn_unchecked(vars, outcomes, f);
        d.validate()?;
        Ok(d)
    }

    fn from_fn_unchecked(vars: impl IntoIterator<Item = Label>, outcomes: &[String], f: impl Fn(&[usize]) -> Q) -> Self {
        let vars = sorted_unique(vars);
        let outcomes = sorted_unique(outcomes.iter().cloned());
        let size = outcomes.len().pow(vars.len() as u32);
        let mut w = Vec::with_capacity(size);
        let mut t = vec![0; vars.len()];
        for _ in 0..size {
            w.push(f(&t));
            advance(&mut t, outcomes.len());
        }
        Dist { vars, outcomes, w }
    }

    fn zeros(vars: Vec<Label>, outcomes: &[String]) -> Self {
        let size = outcomes.len().pow(vars.len() as u32);
        Dist { vars, outcomes: outcomes.to_vec(), w: vec![Q::zero(); size] }
    }

    /// The index offsets contributed by each variable, most significant first.
    fn strides(&self) -> Vec<usize> {
        let base = self.outcomes.len();
        let mut s = vec![1; self.vars.len()];
        for i in (0..s.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * base;
        }
        s
    }

    fn validate(&self) -> Result<()> {
        if self.outcomes.is_empty() {
            bail!(Invalid, "the outcome set is empty");
        }
        if let Some(v) = self.w.iter().find(|v| v.is_negative()) {
            bail!(Invalid, "negative weight {}", format_q(v));
        }
        let total: Q = self.w.iter().sum();
        if !total.is_one() {
            bail!(Invalid, "weights sum to {}, not 1", format_q(&total));
        }
        Ok(())
    }

    /// The uniform distribution.
    pub fn uniform(vars: impl IntoIterator<Item = Label>, outcomes: &[String]) -> Result<Self> {
        let vars = sorted_unique(vars);
        let size = outcomes.len().pow(vars.len() as u32) as i64;
        Dist::from_fn(vars, outcomes, |_| Q::new(1.into(), size.into()))
    }

    /// A random distribution with integer weights in `0..=5`, normalized;
    /// roughly a third of the weights are zero.
    pub fn random(rng: &mut ChaCha8Rng, vars: impl IntoIterator<Item = Label>, outcomes: &[String]) -> Self {
        let vars = sorted_unique(vars);
        let size = outcomes.len().pow(vars.len() as u32);
        let mut raw: Vec<i64> = (0..size).map(|_| if rng.random_ratio(1, 3) { 0 } else { rng.random_range(1..=5) }).collect();
        if raw.iter().all(|&x| x == 0) {
            raw[rng.random_range(0..size)] = 1;
        }
        let total: i64 = raw.iter().sum();
        let d = Dist::from_fn_unchecked(vars, outcomes, |_| Q::zero());
        Dist { w: raw.into_iter().map(|x| Q::new(x.into(), total.into())).collect(), ..d }
    }

    pub fn vars(&self) -> &[Label] {
        &self.vars
    }

    pub fn var_set(&self) -> FinSet {
        self.vars.iter().cloned().collect()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    fn decode(&self, mut i: usize) -> Vec<usize> {
        let base = self.outcomes.len();
        let mut t = vec![0; self.vars.len()];
        for slot in t.iter_mut().rev() {
            *slot = i % base;
            i /= base;
        }
        t
    }

    fn encode(&self, t: impl IntoIterator<Item = usize>) -> usize {
        t.into_iter().fold(0, |acc, x| acc * self.outcomes.len() + x)
    }

    /// The weight of an outcome-index tuple aligned with `vars`.
    pub fn weight(&self, t: &[usize]) -> &Q {
        &self.w[self.encode(t.iter().copied())]
    }

    /// The weight of a named assignment.
    pub fn weight_of(&self, assignment: &BTreeMap<Label, String>) -> Result<&Q> {
        let t = self
            .vars
            .iter()
            .map(|v| {
                let o = assignment.get(v).ok_or_else(|| Error::Domain(format!("no value for {v}")))?;
                self.outcomes.binary_search(o).map_err(|_| Error::Domain(format!("unknown outcome {o:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.weight(&t))
    }

    /// Restriction along `f : A -> vars`: the weight of `α` sums the weights
    /// of all `β` with `β ∘ f = α`.
    pub fn pull_back(&self, f: &FinMap) -> Result<Dist> {
        if !f.cod().iter().eq(self.vars.iter()) {
            bail!(Domain, "map codomain is not the variable set of the distribution");
        }
        let source: Vec<usize> =
            f.pairs().map(|(_, b)| self.vars.binary_search(b).expect("codomain variable")).collect();
        let mut out = Dist::zeros(f.dom().into_iter().collect(), &self.outcomes);
        let strides = out.strides();
        // Sum numerators over a common denominator and reduce once per entry.
        let common = self.w.iter().fold(BigInt::one(), |l, w| if (&l % w.denom()).is_zero() { l } else { l.lcm(w.denom()) });
        let mut numer = vec![BigInt::zero(); out.w.len()];
        let mut beta = vec![0; self.vars.len()];
        for w in &self.w {
            if !w.is_zero() {
                let j: usize = source.iter().zip(&strides).map(|(&s, &st)| beta[s] * st).sum();
                numer[j] += w.numer() * (&common / w.denom());
            }
            advance(&mut beta, self.outcomes.len());
        }
        out.w = numer.into_iter().map(|n| Q::new(n, common.clone())).collect();
        Ok(out)
    }

    /// The marginal on a subset of the variables.
    pub fn marginal(&self, onto: &FinSet) -> Result<Dist> {
        self.pull_back(&FinMap::inclusion(onto, &self.var_set())?)
    }

    /// The outcome tuples of positive weight, as a relation.
    pub fn support(&self) -> Relation {
        let schema = self.vars.iter().map(|v| (v.clone(), self.outcomes.clone())).collect();
        let rows = (0..self.w.len()).filter(|&i| !self.w[i].is_zero()).map(|i| {
            self.vars.iter().cloned().zip(self.decode(i).into_iter().map(|o| self.outcomes[o].clone())).collect()
        });
        let spec = crate::relational::RelationSpec { attrs: schema, tuples: rows.collect() };
        Relation::from_spec(&spec).expect("support tuples are well-typed")
    }

    pub fn to_spec(&self) -> DistSpec {
        let w = (0..self.w.len())
            .filter(|&i| !self.w[i].is_zero())
            .map(|i| {
                let key: Vec<&str> = self.decode(i).into_iter().map(|o| self.outcomes[o].as_str()).collect();
                (key.join(","), format_q(&self.w[i]))
            })
            .collect();
        DistSpec { vars: self.vars.clone(), outcomes: self.outcomes.clone(), w }
    }

    pub fn from_spec(spec: &DistSpec) -> Result<Self> {
        let vars = sorted_unique(spec.vars.iter().cloned());
        if vars.len() != spec.vars.len() {
            bail!(Parse, "variables are listed twice");
        }
        let outcomes = sorted_unique(spec.outcomes.iter().cloned());
        let mut table: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (key, val) in &spec.w {
            let parts: Vec<&str> = if spec.vars.is_empty() && key.is_empty() { vec![] } else { key.split(',').collect() };
            if parts.len() != spec.vars.len() {
                bail!(Parse, "key {key:?} does not list one outcome per variable");
            }
            let mut by_var = BTreeMap::new();
            for (v, o) in spec.vars.iter().zip(parts) {
                let idx = outcomes.binary_search(&o.trim().to_string()).map_err(|_| Error::Parse(format!("unknown outcome {o:?}")))?;
                by_var.insert(v.clone(), idx);
            }
            if table.insert(by_var.into_values().collect(), parse_q(val)?).is_some() {
                bail!(Parse, "key {key:?} is listed twice");
            }
        }
        Dist::from_fn(vars, &outcomes, |t| table.get(t).cloned().unwrap_or_else(Q::zero))
    }
}

impl Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Dist::from_spec(&DistSpec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Glues distributions on `A` and `B` with equal marginals on `A ∩ B` into
/// the distribution on `A ∪ B` making `A` and `B` conditionally independent
/// given `A ∩ B`. A zero denominator gives weight zero.
pub fn dist_glue(pa: &Dist, pb: &Dist) -> Result<Dist> {
    if pa.outcomes != pb.outcomes {
        bail!(Domain, "distributions have different outcome sets");
    }
    let common: FinSet = pa.var_set().intersection(&pb.var_set()).cloned().collect();
    if pa.marginal(&common)? != pb.marginal(&common)? {
        bail!(Compatibility, "marginals on the shared variables differ");
    }
    let out = glue_unchecked(pa, pb)?;
    out.validate()?;
    Ok(out)
}

fn glue_unchecked(pa: &Dist, pb: &Dist) -> Result<Dist> {
    let common: FinSet = pa.var_set().intersection(&pb.var_set()).cloned().collect();
    let r = pa.marginal(&common)?;
    let vars: FinSet = pa.var_set().union(&pb.var_set()).cloned().collect();
    let vars: Vec<Label> = vars.into_iter().collect();
    // For each variable of the union, its index offset in each factor.
    let offsets = |d: &Dist| -> Vec<usize> {
        let strides = d.strides();
        vars.iter().map(|v| d.vars.binary_search(v).map_or(0, |i| strides[i])).collect()
    };
    let (oa, ob, or) = (offsets(pa), offsets(pb), offsets(&r));
    let at = |o: &[usize], g: &[usize]| -> usize { o.iter().zip(g).map(|(s, x)| s * x).sum() };
    Ok(Dist::from_fn_unchecked(vars.clone(), &pa.outcomes, |g| {
        let (x, y, z) = (&pa.w[at(&oa, g)], &pb.w[at(&ob, g)], &r.w[at(&or, g)]);
        if z.is_zero() || x.is_zero() || y.is_zero() {
            Q::zero()
        } else {
            Q::new(x.numer() * y.numer() * z.denom(), x.denom() * y.denom() * z.numer())
        }
    }))
}

/// Steps an outcome-index tuple to the next one, last position fastest.
fn advance(t: &mut [usize], base: usize) {
    for x in t.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return;
        }
        *x = 0;
    }
}

/// The compository of joint distributions of `n + 1` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PO {
    outcomes: Vec<String>,
}

impl PO {
    pub fn new(outcomes: &[String]) -> Result<Self> {
        if outcomes.is_empty() {
            bail!(Invalid, "the outcome set is empty");
        }
        Ok(PO { outcomes: sorted_unique(outcomes.iter().cloned()) })
    }

    /// The outcome set `{0, ..., size - 1}`.
    pub fn with_size(size: usize) -> Result<Self> {
        PO::new(&(0..size).map(|i| i.to_string()).collect::<Vec<_>>())
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Dist {
        Dist::random(rng, (0..=n).map(Label::from), &self.outcomes)
    }

    fn check(&self, p: &Dist) -> Result<()> {
        if p.outcomes != self.outcomes {
            bail!(Domain, "distribution has a different outcome set");
        }
        if p.vars.iter().enumerate().any(|(i, v)| v.index() != Some(i)) {
            bail!(Domain, "variables of a simplex must be 0, ..., n");
        }
        Ok(())
    }
}

impl SimplicialSet for PO {
    type Simplex = Dist;

    fn dim(&self, p: &Dist) -> usize {
        p.vars.len().saturating_sub(1)
    }

    fn act(&self, p: &Dist, f: &MonotoneMap) -> Result<Dist> {
        self.check(p)?;
        if f.cod() != self.dim(p) {
            bail!(Domain, "map codomain [{}] does not match simplex dimension {}", f.cod(), self.dim(p));
        }
        p.pull_back(&FinMap::from_monotone(f))
    }
}

impl Compository for PO {
    fn compose(&self, p: &Dist, k: usize, q: &Dist) -> Result<Dist> {
        self.check(p)?;
        self.check(q)?;
        if !is_k_composable(self, p, k, q)? {
            bail!(Composition, "marginals on the shared {k}-face differ");
        }
        let (m, n) = (self.dim(p), self.dim(q));
        let r = self.act(p, &target_incl(k, m)?)?;
        let out = Dist::from_fn_unchecked((0..=m + n - k).map(Label::from), &self.outcomes, |a| {
            let den = r.weight(&a[m - k..=m]);
            if den.is_zero() {
                Q::zero()
            } else {
                p.weight(&a[..=m]) * q.weight(&a[m - k..]) / den
            }
        });
        out.validate()?;
        Ok(out)
    }
}

/// The gleaf of distributions on finite sets of variables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProbGleaf;

impl Gleaf for ProbGleaf {
    type System = FinSetSystem;
    type Section = Dist;

    fn system(&self) -> &FinSetSystem {
        &FinSetSystem
    }

    fn base(&self, s: &Dist) -> FinSet {
        s.var_set()
    }

    fn restrict(&self, s: &Dist, f: &FinMap) -> Result<Dist> {
        s.pull_back(f)
    }

    fn glue(&self, cover: &Cover<FinMap>, a: &Dist, b: &Dist) -> Result<Dist> {
        let (a, b) = onto_images(self, cover, a, b)?;
        if a.outcomes != b.outcomes {
            bail!(Domain, "distributions have different outcome sets");
        }
        glue_unchecked(&a, &b)
    }
}

/// Outcome of the deterministic-support feasibility check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Feasibility {
    /// A joint distribution with every given marginal.
    Exists { witness: Dist },
    /// No joint distribution exists: the joint support would have to lie in
    /// the join of the given supports, which is empty.
    Infeasible,
    /// The join is non-empty but its uniform distribution is not a witness.
    Unknown,
}

/// Decides whether the given distributions on overlapping sets of variables
/// are marginals of one joint distribution, as far as their supports can
/// tell.
pub fn deterministic_joint_exists(dists: &[Dist]) -> Result<Feasibility> {
    let Some(first) = dists.first() else {
        bail!(Domain, "no distributions given");
    };
    if dists.iter().any(|d| d.outcomes != first.outcomes) {
        bail!(Domain, "distributions have different outcome sets");
    }
    let mut join = first.support();
    for d in &dists[1..] {
        join = join_unchecked(&join, &d.support())?;
    }
    if join.is_empty() {
        return Ok(Feasibility::Infeasible);
    }
    let rows = join.rows();
    let share = Q::new(1.into(), (rows.len() as i64).into());
    let vars: Vec<Label> = join.attrs().to_vec();
    let outcomes = first.outcomes.clone();
    let witness = Dist::from_fn(vars.clone(), &outcomes, |t| {
        let named: BTreeMap<Label, String> = vars.iter().cloned().zip(t.iter().map(|&o| outcomes[o].clone())).collect();
        if join.contains(&named) {
            share.clone()
        } else {
            Q::zero()
        }
    })?;
    for d in dists {
        if &witness.marginal(&d.var_set())? != d {
            return Ok(Feasibility::Unknown);
        }
    }
    Ok(Feasibility::Exists { witness })
}

/// The distribution with weight `1/|tuples|` on each listed named tuple.
pub fn uniform_on(vars: &[&str], outcomes: &[&str], tuples: &[&[&str]]) -> Result<Dist> {
    let outcomes: Vec<String> = outcomes.iter().map(|s| s.to_string()).collect();
    let mut w = BTreeMap::new();
    for t in tuples {
        w.insert(t.join(","), format_q(&Q::new(qi(1).to_integer(), (tuples.len() as i64).into())));
    }
    Dist::from_spec(&DistSpec { vars: vars.iter().map(|v| Label::from(*v)).collect(), outcomes, w })
}
