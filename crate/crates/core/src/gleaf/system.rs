//! The two concrete systems of bicoverings: finite sets with jointly
//! surjective pairs of injections, and the simplex category with the cospans
//! `(s_m, t_n)` into `[j]`, `m + n >= j`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{induced_maps, search_right_inverse, BicoveringMorphism, BicoveringSystem, Cover};
use crate::error::Result;
use crate::finset::{compose_fin, subsets, FinMap, FinSet, Label};
use crate::simplex::{compose as compose_maps, source_incl, target_incl, MonotoneMap};

/// Finite sets of labels; bicoverings are pairs of injections whose images
/// cover the codomain.
#[derive(Debug, Clone, Copy, Default)]
pub struct FinSetSystem;

impl BicoveringSystem for FinSetSystem {
    type Obj = FinSet;
    type Arrow = FinMap;

    fn dom(&self, f: &FinMap) -> FinSet {
        f.dom()
    }

    fn cod(&self, f: &FinMap) -> FinSet {
        f.cod().clone()
    }

    fn identity(&self, x: &FinSet) -> FinMap {
        FinMap::identity(x)
    }

    fn compose(&self, g: &FinMap, f: &FinMap) -> Result<FinMap> {
        compose_fin(g, f)
    }

    fn is_mono(&self, f: &FinMap) -> bool {
        f.is_injective()
    }

    fn is_surjective(&self, f: &FinMap) -> bool {
        f.is_surjective()
    }

    fn is_bicovering(&self, a: &FinMap, b: &FinMap) -> bool {
        a.cod() == b.cod()
            && a.is_injective()
            && b.is_injective()
            && a.image().union(&b.image()).count() == a.cod().len()
    }

    /// Canonical when, in the order of the labels, the points only in `a`
    /// come first, then the overlap, then the points only in `b`.
    fn is_canonical_cover(&self, cover: &Cover<FinMap>) -> bool {
        let (ia, ib) = (cover.a.image(), cover.b.image());
        let rank = |x: &Label| match (ia.contains(x), ib.contains(x)) {
            (true, false) => 0,
            (true, true) => 1,
            _ => 2,
        };
        cover.a.cod().iter().map(rank).is_sorted()
    }

    fn pullback(&self, x: &FinMap, y: &FinMap) -> Option<(FinSet, FinMap, FinMap)> {
        if x.cod() != y.cod() {
            return None;
        }
        if y.is_injective() {
            let inv = y.inverse_on_image().ok()?;
            let p: FinSet = x.pairs().filter(|(_, v)| inv.apply(v).is_some()).map(|(e, _)| e.clone()).collect();
            let px = FinMap::inclusion(&p, &x.dom()).ok()?;
            let pairs = p.iter().map(|e| Some((e.clone(), inv.apply(x.apply(e)?)?.clone()))).collect::<Option<_>>()?;
            let py = FinMap::new(pairs, y.dom()).ok()?;
            Some((p, px, py))
        } else if x.is_injective() {
            let (p, py, px) = self.pullback(y, x)?;
            Some((p, px, py))
        } else {
            None
        }
    }

    fn factor(&self, f: &FinMap, m: &FinMap) -> Option<FinMap> {
        if f.cod() != m.cod() || !m.is_injective() {
            return None;
        }
        let inv = m.inverse_on_image().ok()?;
        let map = f.pairs().map(|(e, v)| Some((e.clone(), inv.apply(v)?.clone()))).collect::<Option<_>>()?;
        FinMap::new(map, m.dom()).ok()
    }

    fn arrows(&self, x: &FinSet, y: &FinSet) -> Vec<FinMap> {
        FinMap::all(x, y)
    }

    fn subobjects(&self, x: &FinSet) -> Vec<FinMap> {
        subsets(x).iter().filter_map(|s| FinMap::inclusion(s, x).ok()).collect()
    }

    /// Sends each point to its least preimage.
    fn section_of(&self, u: &FinMap) -> Result<Option<FinMap>> {
        let mut back = std::collections::BTreeMap::new();
        for (x, y) in u.pairs() {
            back.entry(y.clone()).or_insert_with(|| x.clone());
        }
        if back.len() != u.cod().len() {
            return Ok(None);
        }
        Ok(Some(FinMap::new(back, u.dom())?))
    }
}

/// The simplex category with bicoverings `(s_m, t_n)` into `[j]`, `m + n >= j`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DeltaSystem;

impl DeltaSystem {
    /// The bicovering `(s_m, t_n)` of `[j]`.
    pub fn cover(m: usize, n: usize, j: usize) -> Result<Cover<MonotoneMap>> {
        Cover::new(&DeltaSystem, source_incl(m, j)?, target_incl(n, j)?)
    }

    /// `(m, n, j)` for a bicovering.
    pub fn shape(cover: &Cover<MonotoneMap>) -> (usize, usize, usize) {
        (cover.a.dom(), cover.b.dom(), cover.a.cod())
    }
}

fn monotone_from(values: Vec<usize>, cod: usize) -> Option<MonotoneMap> {
    let dom = values.len().checked_sub(1)?;
    MonotoneMap::new(dom, cod, values).ok()
}

impl BicoveringSystem for DeltaSystem {
    type Obj = usize;
    type Arrow = MonotoneMap;

    fn dom(&self, f: &MonotoneMap) -> usize {
        f.dom()
    }

    fn cod(&self, f: &MonotoneMap) -> usize {
        f.cod()
    }

    fn identity(&self, x: &usize) -> MonotoneMap {
        MonotoneMap::identity(*x)
    }

    fn compose(&self, g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
        compose_maps(g, f)
    }

    fn is_mono(&self, f: &MonotoneMap) -> bool {
        f.is_injective()
    }

    fn is_surjective(&self, f: &MonotoneMap) -> bool {
        f.is_surjective()
    }

    fn is_bicovering(&self, a: &MonotoneMap, b: &MonotoneMap) -> bool {
        let (m, n, j) = (a.dom(), b.dom(), a.cod());
        b.cod() == j
            && m <= j
            && n <= j
            && m + n >= j
            && a.values().iter().enumerate().all(|(i, &v)| v == i)
            && b.values().iter().enumerate().all(|(i, &v)| v == i + j - n)
    }

    fn pullback(&self, x: &MonotoneMap, y: &MonotoneMap) -> Option<(usize, MonotoneMap, MonotoneMap)> {
        if x.cod() != y.cod() {
            return None;
        }
        if y.is_injective() {
            let pos = |v: usize| y.values().iter().position(|&w| w == v);
            let kept: Vec<usize> = (0..=x.dom()).filter(|&e| pos(x.apply(e)).is_some()).collect();
            let py: Vec<usize> = kept.iter().filter_map(|&e| pos(x.apply(e))).collect();
            let px = monotone_from(kept, x.dom())?;
            let py = monotone_from(py, y.dom())?;
            Some((px.dom(), px, py))
        } else if x.is_injective() {
            let (p, py, px) = self.pullback(y, x)?;
            Some((p, px, py))
        } else {
            None
        }
    }

    fn factor(&self, f: &MonotoneMap, m: &MonotoneMap) -> Option<MonotoneMap> {
        if f.cod() != m.cod() || !m.is_injective() {
            return None;
        }
        let values = f
            .values()
            .iter()
            .map(|&v| m.values().iter().position(|&w| w == v))
            .collect::<Option<Vec<_>>>()?;
        MonotoneMap::new(f.dom(), m.dom(), values).ok()
    }

    fn arrows(&self, x: &usize, y: &usize) -> Vec<MonotoneMap> {
        MonotoneMap::all(*x, *y)
    }

    fn subobjects(&self, x: &usize) -> Vec<MonotoneMap> {
        (1u32..1 << (x + 1))
            .filter_map(|mask| monotone_from((0..=*x).filter(|i| mask >> i & 1 == 1).collect(), *x))
            .collect()
    }
}

/// A system that forgets the maximal bicoverings `(id, id)`; used to check
/// that [`check_bicovering_system`] notices a missing axiom.
#[derive(Debug, Clone, Copy, Default)]
pub struct MissingMaximal<S>(pub S);

impl<S: BicoveringSystem> BicoveringSystem for MissingMaximal<S> {
    type Obj = S::Obj;
    type Arrow = S::Arrow;

    fn dom(&self, f: &S::Arrow) -> S::Obj {
        self.0.dom(f)
    }
    fn cod(&self, f: &S::Arrow) -> S::Obj {
        self.0.cod(f)
    }
    fn identity(&self, x: &S::Obj) -> S::Arrow {
        self.0.identity(x)
    }
    fn compose(&self, g: &S::Arrow, f: &S::Arrow) -> Result<S::Arrow> {
        self.0.compose(g, f)
    }
    fn is_mono(&self, f: &S::Arrow) -> bool {
        self.0.is_mono(f)
    }
    fn is_surjective(&self, f: &S::Arrow) -> bool {
        self.0.is_surjective(f)
    }
    fn is_bicovering(&self, a: &S::Arrow, b: &S::Arrow) -> bool {
        let id = self.0.identity(&self.0.cod(a));
        !(a == &id && b == &id) && self.0.is_bicovering(a, b)
    }
    fn pullback(&self, x: &S::Arrow, y: &S::Arrow) -> Option<(S::Obj, S::Arrow, S::Arrow)> {
        self.0.pullback(x, y)
    }
    fn factor(&self, f: &S::Arrow, m: &S::Arrow) -> Option<S::Arrow> {
        self.0.factor(f, m)
    }
    fn arrows(&self, x: &S::Obj, y: &S::Obj) -> Vec<S::Arrow> {
        self.0.arrows(x, y)
    }
    fn subobjects(&self, x: &S::Obj) -> Vec<S::Arrow> {
        self.0.subobjects(x)
    }
}

/// Outcome of [`check_bicovering_system`]: counts of checked instances and of
/// failures per axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SystemCheck {
    pub covers: usize,
    pub mono_failures: usize,
    pub maximal_failures: usize,
    pub pullback_missing: usize,
    pub composition_checked: usize,
    pub composition_failures: usize,
    pub stability_checked: usize,
    pub stability_skipped: usize,
    pub stability_failures: usize,
}

impl SystemCheck {
    pub fn passed(&self) -> bool {
        self.mono_failures == 0
            && self.maximal_failures == 0
            && self.pullback_missing == 0
            && self.composition_failures == 0
            && self.stability_failures == 0
    }
}

/// Checks the axioms of a system of bicoverings on the given objects: legs
/// are monic, bicoverings have pullbacks, maximal bicoverings exist, and
/// bicoverings are stable under composition and under pullback along every
/// arrow between the given objects.
pub fn check_bicovering_system<S: BicoveringSystem>(sys: &S, objects: &[S::Obj]) -> Result<SystemCheck> {
    let mut out = SystemCheck::default();
    for c in objects {
        let id = sys.identity(c);
        if !sys.is_bicovering(&id, &id) {
            out.maximal_failures += 1;
        }
        for cover in sys.covers(c) {
            out.covers += 1;
            if !sys.is_mono(&cover.a) || !sys.is_mono(&cover.b) {
                out.mono_failures += 1;
            }
            let Some((_, pa, pb)) = sys.pullback(&cover.a, &cover.b) else {
                out.pullback_missing += 1;
                continue;
            };
            for a2 in sys.subobjects(&sys.dom(&cover.a)) {
                if sys.is_bicovering(&a2, &pa) {
                    out.composition_checked += 1;
                    if !sys.is_bicovering(&sys.compose(&cover.a, &a2)?, &cover.b) {
                        out.composition_failures += 1;
                    }
                }
            }
            for b2 in sys.subobjects(&sys.dom(&cover.b)) {
                if sys.is_bicovering(&pb, &b2) {
                    out.composition_checked += 1;
                    if !sys.is_bicovering(&cover.a, &sys.compose(&cover.b, &b2)?) {
                        out.composition_failures += 1;
                    }
                }
            }
            for c2 in objects {
                for f in sys.arrows(c2, c) {
                    let (Some((_, _, la)), Some((_, _, lb))) = (sys.pullback(&cover.a, &f), sys.pullback(&cover.b, &f))
                    else {
                        continue;
                    };
                    // In Δ the pulled-back legs may have an empty overlap, which
                    // is not an object; the axiom is only asked where the
                    // pullbacks involved exist.
                    if sys.pullback(&la, &lb).is_none() {
                        out.stability_skipped += 1;
                        continue;
                    }
                    out.stability_checked += 1;
                    if !sys.is_bicovering(&la, &lb) {
                        out.stability_failures += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every morphism of bicoverings from one of `sources` to one of `targets`.
pub fn enumerate_morphisms<S: BicoveringSystem>(
    sys: &S,
    sources: &[Cover<S::Arrow>],
    targets: &[Cover<S::Arrow>],
) -> Result<Vec<BicoveringMorphism<S::Arrow>>> {
    let mut out = Vec::new();
    for src in sources {
        let c2 = sys.cod(&src.a);
        for tgt in targets {
            let c = sys.cod(&tgt.a);
            for q in sys.arrows(&c2, &c) {
                if let Ok(m) = BicoveringMorphism::new(sys, src.clone(), tgt.clone(), q) {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

/// Compares the right-inverse criterion with surjectivity of the induced map
/// on overlaps, over every candidate `q` between the given bicoverings.
/// Returns `(candidates, mismatches)`.
pub fn right_inverse_matches_surjectivity<S: BicoveringSystem>(
    sys: &S,
    sources: &[Cover<S::Arrow>],
    targets: &[Cover<S::Arrow>],
) -> Result<(usize, usize)> {
    let (mut checked, mut mismatches) = (0, 0);
    for src in sources {
        for tgt in targets {
            for q in sys.arrows(&sys.cod(&src.a), &sys.cod(&tgt.a)) {
                if let Some(parts) = induced_maps(sys, src, tgt, &q)? {
                    checked += 1;
                    let found = search_right_inverse(sys, &parts.on_pullbacks)?.is_some();
                    if found != sys.is_surjective(&parts.on_pullbacks) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    Ok((checked, mismatches))
}

/// The bicoverings of the sets `{0..k-1}` for `k <= max_size`.
pub fn finset_covers(max_size: usize) -> Vec<Cover<FinMap>> {
    (0..=max_size).flat_map(|k| FinSetSystem.covers(&finite(k))).collect()
}

fn finite(k: usize) -> FinSet {
    (0..k).map(Label::from).collect()
}

/// Every morphism between bicoverings of sets of size at most `max_source`
/// and `max_target`.
pub fn finset_morphisms(max_source: usize, max_target: usize) -> Result<Vec<BicoveringMorphism<FinMap>>> {
    enumerate_morphisms(&FinSetSystem, &finset_covers(max_source), &finset_covers(max_target))
}

/// A random morphism between bicoverings of sets of the given sizes, or
/// `None` if `attempts` random candidates were all invalid.
pub fn random_finset_morphism(
    rng: &mut ChaCha8Rng,
    source_size: usize,
    target_size: usize,
    attempts: usize,
) -> Option<BicoveringMorphism<FinMap>> {
    let random_cover = |rng: &mut ChaCha8Rng, size: usize| {
        let c = finite(size);
        let (mut a, mut b) = (FinSet::new(), FinSet::new());
        for x in &c {
            match rng.random_range(0..3) {
                0 => a.insert(x.clone()),
                1 => b.insert(x.clone()),
                _ => a.insert(x.clone()) && b.insert(x.clone()),
            };
        }
        let leg = |s: &FinSet| FinMap::inclusion(s, &c).expect("subset");
        Cover { a: leg(&a), b: leg(&b) }
    };
    for _ in 0..attempts {
        let src = random_cover(rng, source_size);
        let tgt = random_cover(rng, target_size);
        let c2 = finite(source_size);
        let c: Vec<Label> = finite(target_size).into_iter().collect();
        if c.is_empty() && source_size > 0 {
            return None;
        }
        let pairs: Vec<(Label, Label)> = c2.iter().map(|x| (x.clone(), c[rng.random_range(0..c.len())].clone())).collect();
        let q = FinMap::new(pairs.into_iter().collect(), c.iter().cloned().collect()).ok()?;
        if let Ok(m) = BicoveringMorphism::new(&FinSetSystem, src, tgt, q) {
            return Some(m);
        }
    }
    None
}

/// The morphisms between Δ-bicoverings of `[j]`, `j <= max_j`, whose
/// underlying map is a single face or degeneracy map.
pub fn delta_generator_morphisms(max_j: usize) -> Result<Vec<BicoveringMorphism<MonotoneMap>>> {
    let covers: Vec<Cover<MonotoneMap>> = (0..=max_j).flat_map(|j| DeltaSystem.covers(&j)).collect();
    let all = enumerate_morphisms(&DeltaSystem, &covers, &covers)?;
    Ok(all
        .into_iter()
        .filter(|m| {
            let (p, j) = (m.q.dom(), m.q.cod());
            (p + 1 == j && m.q.is_injective()) || (p == j + 1 && m.q.is_surjective())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::ordinal;

    #[test]
    fn finset_cover_counts() {
        // Pairs (A, B) with A ∪ B = C number 3^|C|.
        assert_eq!(FinSetSystem.covers(&finite(3)).len(), 27);
        assert_eq!(FinSetSystem.covers(&finite(0)).len(), 1);
    }

    #[test]
    fn delta_cover_counts() {
        // (m, n) with m, n <= j and m + n >= j.
        assert_eq!(DeltaSystem.covers(&2).len(), 6);
        assert!(DeltaSystem::cover(1, 1, 3).is_err());
        assert_eq!(DeltaSystem::shape(&DeltaSystem.covers(&0)[0]), (0, 0, 0));
    }

    #[test]
    fn delta_pullback_is_the_overlap() {
        let c = DeltaSystem::cover(2, 3, 4).unwrap();
        let (p, pa, pb) = DeltaSystem.pullback(&c.a, &c.b).unwrap();
        assert_eq!(p, 1);
        assert_eq!(pa, target_incl(1, 2).unwrap());
        assert_eq!(pb, source_incl(1, 3).unwrap());
    }

    #[test]
    fn finset_pullback_is_the_intersection() {
        let c = ordinal(2);
        let a = FinMap::inclusion(&crate::finset::labels(["0", "1"]), &c).unwrap();
        let b = FinMap::inclusion(&crate::finset::labels(["1", "2"]), &c).unwrap();
        let (p, _, _) = FinSetSystem.pullback(&a, &b).unwrap();
        assert_eq!(p, crate::finset::labels(["1"]));
    }

    #[test]
    fn systems_satisfy_their_axioms() {
        let sets: Vec<FinSet> = (0..=3).map(finite).collect();
        let check = check_bicovering_system(&FinSetSystem, &sets).unwrap();
        assert!(check.passed(), "{check:?}");
        assert!(check.composition_checked > 0 && check.stability_checked > 0);

        let ords: Vec<usize> = (0..=4).collect();
        let check = check_bicovering_system(&DeltaSystem, &ords).unwrap();
        assert!(check.passed(), "{check:?}");

        let broken = check_bicovering_system(&MissingMaximal(FinSetSystem), &sets).unwrap();
        assert!(!broken.passed());
        assert_eq!(broken.maximal_failures, sets.len());
    }

    #[test]
    fn right_inverse_is_surjectivity() {
        let covers = finset_covers(3);
        let (checked, mismatches) = right_inverse_matches_surjectivity(&FinSetSystem, &covers, &covers).unwrap();
        assert!(checked > 1000);
        assert_eq!(mismatches, 0);

        let covers: Vec<_> = (0..=4).flat_map(|j| DeltaSystem.covers(&j)).collect();
        let (checked, mismatches) = right_inverse_matches_surjectivity(&DeltaSystem, &covers, &covers).unwrap();
        assert!(checked > 100);
        assert_eq!(mismatches, 0);
    }

    #[test]
    fn generators_include_both_kinds() {
        let gens = delta_generator_morphisms(3).unwrap();
        assert!(gens.iter().any(|m| m.q.is_injective()));
        assert!(gens.iter().any(|m| m.q.is_surjective() && !m.q.is_injective()));
    }
}
