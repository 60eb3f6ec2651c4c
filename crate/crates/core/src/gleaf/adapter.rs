//! Passing between compositories and gleaves on Δ, and pulling gleaves on
//! finite sets back to Δ.

use super::{ensure_compatible, BicoveringSystem, Cover, DeltaSystem, FinSetSystem, Gleaf};
use crate::compository::{Compository, SimplicialSet};
use crate::error::{bail, Result};
use crate::finset::FinMap;
use crate::simplex::MonotoneMap;

/// A compository viewed as a gleaf on Δ: gluing over `(s_m, t_n)` into `[j]`
/// is `∘_k` with `k = m + n - j`.
#[derive(Debug, Clone)]
pub struct CompositoryGleaf<C>(pub C);

pub fn compository_to_delta_gleaf<C: Compository + Sync>(c: C) -> CompositoryGleaf<C> {
    CompositoryGleaf(c)
}

impl<C: Compository + Sync> Gleaf for CompositoryGleaf<C> {
    type System = DeltaSystem;
    type Section = C::Simplex;

    fn system(&self) -> &DeltaSystem {
        &DeltaSystem
    }

    fn base(&self, s: &C::Simplex) -> usize {
        self.0.dim(s)
    }

    fn restrict(&self, s: &C::Simplex, f: &MonotoneMap) -> Result<C::Simplex> {
        self.0.act(s, f)
    }

    fn glue(&self, cover: &Cover<MonotoneMap>, a: &C::Simplex, b: &C::Simplex) -> Result<C::Simplex> {
        if !DeltaSystem.is_bicovering(&cover.a, &cover.b) {
            bail!(Domain, "cospan is not of the form (s_m, t_n)");
        }
        let (m, n, j) = DeltaSystem::shape(cover);
        if self.0.dim(a) != m || self.0.dim(b) != n {
            bail!(Domain, "sections do not live over the legs of the bicovering");
        }
        self.0.compose(a, m + n - j, b)
    }
}

/// A gleaf on Δ viewed as a compository: `A ∘_k B` glues over `(s_m, t_n)`
/// into `[m + n - k]`.
#[derive(Debug, Clone)]
pub struct GleafCompository<G>(pub G);

pub fn delta_gleaf_to_compository<G: Gleaf<System = DeltaSystem>>(g: G) -> GleafCompository<G> {
    GleafCompository(g)
}

impl<G: Gleaf<System = DeltaSystem>> SimplicialSet for GleafCompository<G>
where
    G::Section: std::hash::Hash,
{
    type Simplex = G::Section;

    fn dim(&self, a: &G::Section) -> usize {
        self.0.base(a)
    }

    fn act(&self, a: &G::Section, f: &MonotoneMap) -> Result<G::Section> {
        self.0.restrict(a, f)
    }
}

impl<G: Gleaf<System = DeltaSystem>> Compository for GleafCompository<G>
where
    G::Section: std::hash::Hash,
{
    fn compose(&self, a: &G::Section, k: usize, b: &G::Section) -> Result<G::Section> {
        let (m, n) = (self.0.base(a), self.0.base(b));
        if k > m.min(n) {
            bail!(Domain, "k = {k} exceeds min(dim A, dim B) = {}", m.min(n));
        }
        self.0.glue(&DeltaSystem::cover(m, n, m + n - k)?, a, b)
    }
}

/// A gleaf on finite sets restricted along `[n] ↦ {0, ..., n}`. Sections
/// over `[n]` are the sections over the set of labels `"0"` to `"n"`.
#[derive(Debug, Clone)]
pub struct DeltaBaseChange<G>(pub G);

impl<G: Gleaf<System = FinSetSystem>> Gleaf for DeltaBaseChange<G> {
    type System = DeltaSystem;
    type Section = G::Section;

    fn system(&self) -> &DeltaSystem {
        &DeltaSystem
    }

    fn base(&self, s: &G::Section) -> usize {
        self.0.base(s).len().saturating_sub(1)
    }

    fn restrict(&self, s: &G::Section, f: &MonotoneMap) -> Result<G::Section> {
        self.0.restrict(s, &FinMap::from_monotone(f))
    }

    fn glue(&self, cover: &Cover<MonotoneMap>, a: &G::Section, b: &G::Section) -> Result<G::Section> {
        let fin = Cover::new(&FinSetSystem, FinMap::from_monotone(&cover.a), FinMap::from_monotone(&cover.b))?;
        ensure_compatible(&self.0, &fin, a, b)?;
        self.0.glue(&fin, a, b)
    }
}
