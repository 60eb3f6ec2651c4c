//! Gleaves: presheaves on a category with bicoverings, equipped with a gluing
//! operation on compatible pairs of local sections.

mod adapter;
mod harness;
mod laws;
mod system;

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{bail, Result};

pub use adapter::{compository_to_delta_gleaf, delta_gleaf_to_compository, CompositoryGleaf, DeltaBaseChange, GleafCompository};
pub use harness::{run_gleaf_suite, GleafAxiom, GleafOptions, GleafWorkload, ObjectSections};
pub use laws::{
    check_gleaf_associativity, check_gleaf_back_forth, check_gleaf_identity, check_partial_naturality, check_recover,
    check_two_step_gleaf, Side,
};
pub use system::{
    check_bicovering_system, delta_generator_morphisms, enumerate_morphisms, finset_morphisms, random_finset_morphism,
    finset_covers, right_inverse_matches_surjectivity, DeltaSystem, FinSetSystem, MissingMaximal, SystemCheck,
};

/// A category with a distinguished class of cospans, the bicoverings.
pub trait BicoveringSystem: Sync {
    type Obj: Clone + Eq + Debug + Serialize + Send + Sync;
    type Arrow: Clone + Eq + Debug + Serialize + Send + Sync;

    fn dom(&self, f: &Self::Arrow) -> Self::Obj;
    fn cod(&self, f: &Self::Arrow) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Arrow;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Arrow, f: &Self::Arrow) -> Result<Self::Arrow>;
    fn is_mono(&self, f: &Self::Arrow) -> bool;
    fn is_surjective(&self, f: &Self::Arrow) -> bool;
    fn is_bicovering(&self, a: &Self::Arrow, b: &Self::Arrow) -> bool;

    /// The pullback `(P, P -> dom x, P -> dom y)` of a cospan in which at
    /// least one leg is a monomorphism, when it exists.
    fn pullback(&self, x: &Self::Arrow, y: &Self::Arrow) -> Option<(Self::Obj, Self::Arrow, Self::Arrow)>;

    /// The unique `h` with `m ∘ h = f`, for a monomorphism `m`.
    fn factor(&self, f: &Self::Arrow, m: &Self::Arrow) -> Option<Self::Arrow>;

    /// Every arrow `x -> y`.
    fn arrows(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Arrow>;

    /// A representative set of monomorphisms into `x`, one per subobject.
    fn subobjects(&self, x: &Self::Obj) -> Vec<Self::Arrow>;

    /// Some `r` with `u ∘ r = id`, found by searching every arrow back.
    fn section_of(&self, u: &Self::Arrow) -> Result<Option<Self::Arrow>> {
        search_right_inverse(self, u)
    }

    /// Whether a bicovering is the chosen representative of its orbit under
    /// automorphisms of its codomain. Defaults to every bicovering.
    fn is_canonical_cover(&self, _cover: &Cover<Self::Arrow>) -> bool {
        true
    }

    /// Every bicovering with codomain `c`, up to isomorphism of the legs.
    fn covers(&self, c: &Self::Obj) -> Vec<Cover<Self::Arrow>> {
        let subs = self.subobjects(c);
        let mut out = Vec::new();
        for a in &subs {
            for b in &subs {
                if self.is_bicovering(a, b) {
                    out.push(Cover { a: a.clone(), b: b.clone() });
                }
            }
        }
        out
    }
}

/// A cospan `a -> c <- b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cover<A> {
    pub a: A,
    pub b: A,
}

impl<A: Clone> Cover<A> {
    pub fn new<S: BicoveringSystem<Arrow = A> + ?Sized>(sys: &S, a: A, b: A) -> Result<Self> {
        if !sys.is_bicovering(&a, &b) {
            bail!(Domain, "cospan is not a bicovering");
        }
        Ok(Cover { a, b })
    }
}

/// A morphism of bicoverings `q : c' -> c` with its induced leg maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BicoveringMorphism<A> {
    pub source: Cover<A>,
    pub target: Cover<A>,
    pub q: A,
    pub q_a: A,
    pub q_b: A,
}

impl<A: Clone + Eq> BicoveringMorphism<A> {
    /// Validates `q` and derives the leg maps. The induced map between the
    /// pullbacks must have a right inverse.
    pub fn new<S: BicoveringSystem<Arrow = A> + ?Sized>(
        sys: &S,
        source: Cover<A>,
        target: Cover<A>,
        q: A,
    ) -> Result<Self> {
        match induced_maps(sys, &source, &target, &q)? {
            Some(parts) if has_right_inverse(sys, &parts.on_pullbacks)? => Ok(BicoveringMorphism {
                source,
                target,
                q,
                q_a: parts.q_a,
                q_b: parts.q_b,
            }),
            Some(_) => bail!(Domain, "the map between the overlaps has no right inverse"),
            None => bail!(Domain, "q does not map the legs of the source into the legs of the target"),
        }
    }
}

pub(crate) struct InducedMaps<A> {
    pub q_a: A,
    pub q_b: A,
    pub on_pullbacks: A,
}

/// The leg maps and the induced map between the pullbacks, or `None` when
/// `q` does not carry the source legs into the target legs.
pub(crate) fn induced_maps<S: BicoveringSystem + ?Sized>(
    sys: &S,
    source: &Cover<S::Arrow>,
    target: &Cover<S::Arrow>,
    q: &S::Arrow,
) -> Result<Option<InducedMaps<S::Arrow>>> {
    let Some(q_a) = sys.factor(&sys.compose(q, &source.a)?, &target.a) else {
        return Ok(None);
    };
    let Some(q_b) = sys.factor(&sys.compose(q, &source.b)?, &target.b) else {
        return Ok(None);
    };
    let Some((_, src_pa, _)) = sys.pullback(&source.a, &source.b) else {
        bail!(Domain, "source bicovering has no pullback");
    };
    let Some((_, tgt_pa, _)) = sys.pullback(&target.a, &target.b) else {
        bail!(Domain, "target bicovering has no pullback");
    };
    let into_c = sys.compose(&target.a, &tgt_pa)?;
    let along = sys.compose(q, &sys.compose(&source.a, &src_pa)?)?;
    let Some(on_pullbacks) = sys.factor(&along, &into_c) else {
        return Ok(None);
    };
    Ok(Some(InducedMaps { q_a, q_b, on_pullbacks }))
}

/// True iff some `r` satisfies `u ∘ r = id`.
pub fn has_right_inverse<S: BicoveringSystem + ?Sized>(sys: &S, u: &S::Arrow) -> Result<bool> {
    let id = sys.identity(&sys.cod(u));
    match sys.section_of(u)? {
        Some(r) => Ok(sys.compose(u, &r)? == id),
        None => Ok(false),
    }
}

/// Some `r` with `u ∘ r = id` among all arrows `cod u -> dom u`.
pub fn search_right_inverse<S: BicoveringSystem + ?Sized>(sys: &S, u: &S::Arrow) -> Result<Option<S::Arrow>> {
    let (x, y) = (sys.dom(u), sys.cod(u));
    let id = sys.identity(&y);
    for r in sys.arrows(&y, &x) {
        if sys.compose(u, &r)? == id {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// A presheaf with a gluing operation over the bicoverings of its base.
pub trait Gleaf: Sync {
    type System: BicoveringSystem;
    type Section: Clone + Eq + Debug + Serialize + Send + Sync;

    fn system(&self) -> &Self::System;

    /// The object a section lives over.
    fn base(&self, s: &Self::Section) -> <Self::System as BicoveringSystem>::Obj;

    /// The restriction `s f` along `f : x -> base(s)`.
    fn restrict(&self, s: &Self::Section, f: &<Self::System as BicoveringSystem>::Arrow) -> Result<Self::Section>;

    /// Glues sections over the two legs of a bicovering, which must agree on
    /// the pullback.
    fn glue(
        &self,
        cover: &Cover<<Self::System as BicoveringSystem>::Arrow>,
        a: &Self::Section,
        b: &Self::Section,
    ) -> Result<Self::Section>;
}

pub(crate) type ArrowOf<G> = <<G as Gleaf>::System as BicoveringSystem>::Arrow;
pub(crate) type ObjOf<G> = <<G as Gleaf>::System as BicoveringSystem>::Obj;

/// Checks that `a` and `b` live over the legs of `cover` and agree on the
/// pullback. Gluing operations call this before doing any work.
pub fn ensure_compatible<G: Gleaf + ?Sized>(g: &G, cover: &Cover<ArrowOf<G>>, a: &G::Section, b: &G::Section) -> Result<()> {
    let sys = g.system();
    if !sys.is_bicovering(&cover.a, &cover.b) {
        bail!(Domain, "cospan is not a bicovering");
    }
    if g.base(a) != sys.dom(&cover.a) || g.base(b) != sys.dom(&cover.b) {
        bail!(Domain, "sections do not live over the legs of the bicovering");
    }
    let Some((_, pa, pb)) = sys.pullback(&cover.a, &cover.b) else {
        bail!(Domain, "bicovering has no pullback");
    };
    if g.restrict(a, &pa)? != g.restrict(b, &pb)? {
        bail!(Compatibility, "sections disagree on the overlap");
    }
    Ok(())
}

/// Restricts a global section over `cod(cover)` to both legs.
pub fn split<G: Gleaf + ?Sized>(g: &G, cover: &Cover<ArrowOf<G>>, s: &G::Section) -> Result<(G::Section, G::Section)> {
    Ok((g.restrict(s, &cover.a)?, g.restrict(s, &cover.b)?))
}

/// Moves two local sections of a gleaf on finite sets from the domains of
/// the legs onto the images of the legs, so gluing can work with subsets of
/// the codomain. Also checks compatibility.
pub fn onto_images<G: Gleaf<System = FinSetSystem> + ?Sized>(
    g: &G,
    cover: &Cover<crate::finset::FinMap>,
    a: &G::Section,
    b: &G::Section,
) -> Result<(G::Section, G::Section)> {
    ensure_compatible(g, cover, a, b)?;
    let move_onto = |s: &G::Section, leg: &crate::finset::FinMap| -> Result<G::Section> {
        if leg.pairs().all(|(x, y)| x == y) {
            return Ok(s.clone());
        }
        g.restrict(s, &leg.inverse_on_image()?)
    };
    Ok((move_onto(a, &cover.a)?, move_onto(b, &cover.b)?))
}
