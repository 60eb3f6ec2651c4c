//! The simplex category: finite ordinals `[n] = {0, ..., n}` and the
//! order-preserving maps between them.

use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};

/// An order-preserving map `[dom] -> [cod]`, stored by its values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonotoneMap {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

#[derive(Deserialize)]
struct RawMap {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

impl<'de> Deserialize<'de> for MonotoneMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMap::deserialize(d)?;
        MonotoneMap::new(raw.dom, raw.cod, raw.values).map_err(serde::de::Error::custom)
    }
}

impl MonotoneMap {
    pub fn new(dom: usize, cod: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != dom + 1 {
            bail!(Invalid, "map [{dom}]->[{cod}] needs {} values, got {}", dom + 1, values.len());
        }
        if let Some(&v) = values.iter().find(|&&v| v > cod) {
            bail!(Invalid, "value {v} outside [{cod}]");
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            bail!(Invalid, "values {values:?} are not weakly increasing");
        }
        Ok(MonotoneMap { dom, cod, values })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { dom: n, cod: n, values: (0..=n).collect() }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, v: usize) -> usize {
        self.values[v]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && self.values[self.dom] == self.cod
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// The injection `[len] -> [cod]` onto the interval starting at `start`.
    pub fn interval(start: usize, len: usize, cod: usize) -> Result<Self> {
        if start + len > cod {
            bail!(Domain, "interval {start}..={} does not fit in [{cod}]", start + len);
        }
        Ok(MonotoneMap { dom: len, cod, values: (start..=start + len).collect() })
    }

    /// Every order-preserving map `[dom] -> [cod]`, in lexicographic order.
    pub fn all(dom: usize, cod: usize) -> Vec<MonotoneMap> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(dom + 1);
        fn rec(dom: usize, cod: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
            if cur.len() == dom + 1 {
                out.push(MonotoneMap { dom, cod, values: cur.clone() });
                return;
            }
            for v in lo..=cod {
                cur.push(v);
                rec(dom, cod, v, cur, out);
                cur.pop();
            }
        }
        rec(dom, cod, 0, &mut cur, &mut out);
        out
    }
}

/// The face map `∂_k : [n-1] -> [n]`, skipping `k`.
pub fn face(k: usize, n: usize) -> Result<MonotoneMap> {
    if n == 0 || k > n {
        bail!(Domain, "face map ∂_{k} needs 0 <= k <= n and n >= 1 (n = {n})");
    }
    let values = (0..n).map(|v| if v < k { v } else { v + 1 }).collect();
    Ok(MonotoneMap { dom: n - 1, cod: n, values })
}

/// The degeneracy map `η_k : [n+1] -> [n]`, hitting `k` twice.
pub fn degeneracy(k: usize, n: usize) -> Result<MonotoneMap> {
    if k > n {
        bail!(Domain, "degeneracy map η_{k} needs k <= n (n = {n})");
    }
    let values = (0..=n + 1).map(|v| if v <= k { v } else { v - 1 }).collect();
    Ok(MonotoneMap { dom: n + 1, cod: n, values })
}

/// `s_k : [k] -> [n]`, the initial `k`-face.
pub fn source_incl(k: usize, n: usize) -> Result<MonotoneMap> {
    if k > n {
        bail!(Domain, "source inclusion s_{k} needs k <= n (n = {n})");
    }
    MonotoneMap::interval(0, k, n)
}

/// `t_k : [k] -> [n]`, the terminal `k`-face.
pub fn target_incl(k: usize, n: usize) -> Result<MonotoneMap> {
    if k > n {
        bail!(Domain, "target inclusion t_{k} needs k <= n (n = {n})");
    }
    MonotoneMap::interval(n - k, k, n)
}

/// `g ∘ f`: first `f`, then `g`.
pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    if f.cod != g.dom {
        return Err(Error::Composition(format!(
            "cannot compose [{}]->[{}] after [{}]->[{}]",
            g.dom, g.cod, f.dom, f.cod
        )));
    }
    let values = f.values.iter().map(|&v| g.values[v]).collect();
    Ok(MonotoneMap { dom: f.dom, cod: g.cod, values })
}

/// Composes a chain `maps[0] ∘ maps[1] ∘ ... ∘ maps[last]`.
pub fn compose_all(maps: &[MonotoneMap]) -> Result<MonotoneMap> {
    let (last, rest) = maps
        .split_last()
        .ok_or_else(|| Error::Domain("empty composite".into()))?;
    rest.iter().rev().try_fold(last.clone(), |acc, g| compose(g, &acc))
}

/// One failed instance of a simplicial identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub relation: String,
    pub lhs: MonotoneMap,
    pub rhs: MonotoneMap,
}

/// Checks every instance of the face/degeneracy relations and the generator
/// factorizations of `s_k` and `t_k` with codomain up to `max_n`.
/// Returns the number of instances checked together with the failures.
pub fn verify_simplicial_identities(max_n: usize) -> Result<(usize, Vec<IdentityFailure>)> {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut record = |relation: String, lhs: MonotoneMap, rhs: MonotoneMap| {
        checked += 1;
        if lhs != rhs {
            failures.push(IdentityFailure { relation, lhs, rhs });
        }
    };
    // ∂_k ∂_j = ∂_j ∂_{k-1} for j < k, with ∂_k : [n-1] -> [n]
    for n in 2..=max_n {
        for k in 0..=n {
            for j in 0..k {
                let lhs = compose(&face(k, n)?, &face(j, n - 1)?)?;
                let rhs = compose(&face(j, n)?, &face(k - 1, n - 1)?)?;
                record(format!("∂{k}∂{j}=∂{j}∂{} (n={n})", k - 1), lhs, rhs);
            }
        }
    }
    // η_k η_j = η_j η_{k+1} for j <= k, with η_k : [n+1] -> [n]
    for n in 0..=max_n {
        for k in 0..=n {
            for j in 0..=k {
                let lhs = compose(&degeneracy(k, n)?, &degeneracy(j, n + 1)?)?;
                let rhs = compose(&degeneracy(j, n)?, &degeneracy(k + 1, n + 1)?)?;
                record(format!("η{k}η{j}=η{j}η{} (n={n})", k + 1), lhs, rhs);
            }
        }
    }
    // η_k ∂_j, with ∂_j : [n] -> [n+1] and η_k : [n+1] -> [n]
    for n in 0..=max_n {
        for k in 0..=n {
            for j in 0..=n + 1 {
                let lhs = compose(&degeneracy(k, n)?, &face(j, n + 1)?)?;
                let rhs = if j < k {
                    compose(&face(j, n)?, &degeneracy(k - 1, n - 1)?)?
                } else if j == k || j == k + 1 {
                    MonotoneMap::identity(n)
                } else {
                    compose(&face(j - 1, n)?, &degeneracy(k, n - 1)?)?
                };
                record(format!("η{k}∂{j} (n={n})"), lhs, rhs);
            }
        }
    }
    // s_k = ∂_n ⋯ ∂_{k+1} and t_k = ∂_0 ⋯ ∂_0
    for n in 0..=max_n {
        for k in 0..=n {
            let (s, t) = if k == n {
                (MonotoneMap::identity(n), MonotoneMap::identity(n))
            } else {
                let s_gens: Vec<_> = (k + 1..=n).rev().map(|i| face(i, i)).collect::<Result<_>>()?;
                let t_gens: Vec<_> = (k + 1..=n).rev().map(|i| face(0, i)).collect::<Result<_>>()?;
                (compose_all(&s_gens)?, compose_all(&t_gens)?)
            };
            record(format!("s_{k} into [{n}]"), source_incl(k, n)?, s);
            record(format!("t_{k} into [{n}]"), target_incl(k, n)?, t);
        }
    }
    Ok((checked, failures))
}
