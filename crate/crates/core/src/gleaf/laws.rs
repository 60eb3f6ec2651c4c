//! Exact-equality checks of the gleaf axioms and their consequences.
//!
//! Every check takes a global section `s` over the codomain of a bicovering
//! and derives its inputs by restriction. By the recovery lemma every
//! compatible pair of local sections arises this way, so enumerating global
//! sections enumerates compatible inputs.

use serde_json::json;

use super::{split, ArrowOf, BicoveringMorphism, BicoveringSystem, Cover, Gleaf};
use crate::compository::laws::{expect_eq, to_json, LawResult};
use crate::error::{bail, Error};

/// Which leg of a bicovering a check shrinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Gluing along `(id, b)` is the first projection and along `(a, id)` the
/// second. `side` names the position of `leg`.
pub fn check_gleaf_identity<G: Gleaf + ?Sized>(g: &G, s: &G::Section, leg: &ArrowOf<G>, side: Side) -> LawResult {
    let sys = g.system();
    let id = sys.identity(&g.base(s));
    let part = g.restrict(s, leg)?;
    let input = || json!({ "section": to_json(s), "leg": to_json(leg), "side": format!("{side:?}") });
    match side {
        Side::B => {
            let first = g.glue(&Cover::new(sys, id, leg.clone())?, s, &part)?;
            expect_eq("gleaf identity (first projection)", input, &first, s)
        }
        Side::A => {
            let second = g.glue(&Cover::new(sys, leg.clone(), id)?, &part, s)?;
            expect_eq("gleaf identity (second projection)", input, &second, s)
        }
    }
}

/// Restricting the glued section to either leg returns the inputs.
pub fn check_recover<G: Gleaf + ?Sized>(g: &G, cover: &Cover<ArrowOf<G>>, s: &G::Section) -> LawResult {
    let (sa, sb) = split(g, cover, s)?;
    let glued = g.glue(cover, &sa, &sb)?;
    let input = || json!({ "cover": to_json(cover), "section": to_json(s) });
    expect_eq("recover (a)", input, &g.restrict(&glued, &cover.a)?, &sa)?;
    expect_eq("recover (b)", input, &g.restrict(&glued, &cover.b)?, &sb)
}

/// Gluing over a shrunken leg equals regluing the restrictions of the result
/// over the original bicovering.
pub fn check_gleaf_back_forth<G: Gleaf + ?Sized>(
    g: &G,
    cover: &Cover<ArrowOf<G>>,
    shrink: &ArrowOf<G>,
    side: Side,
    s: &G::Section,
) -> LawResult {
    let inner = shrunk(g, cover, shrink, side)?;
    let (sa, sb) = split(g, &inner, s)?;
    let glued = g.glue(&inner, &sa, &sb)?;
    let (ga, gb) = split(g, cover, &glued)?;
    let again = g.glue(cover, &ga, &gb)?;
    let input = || json!({ "cover": to_json(cover), "shrink": to_json(shrink), "side": format!("{side:?}"), "section": to_json(s) });
    expect_eq("gleaf back-and-forth", input, &again, &glued)
}

fn shrunk<G: Gleaf + ?Sized>(
    g: &G,
    cover: &Cover<ArrowOf<G>>,
    shrink: &ArrowOf<G>,
    side: Side,
) -> Result<Cover<ArrowOf<G>>, Error> {
    let sys = g.system();
    match side {
        Side::A => Cover::new(sys, sys.compose(&cover.a, shrink)?, cover.b.clone()),
        Side::B => Cover::new(sys, cover.a.clone(), sys.compose(&cover.b, shrink)?),
    }
}

/// Restricting a glued section along `q` equals gluing the restrictions
/// along the leg maps.
pub fn check_partial_naturality<G: Gleaf + ?Sized>(
    g: &G,
    morphism: &BicoveringMorphism<ArrowOf<G>>,
    s: &G::Section,
) -> LawResult {
    let (sa, sb) = split(g, &morphism.target, s)?;
    let lhs = g.restrict(&g.glue(&morphism.target, &sa, &sb)?, &morphism.q)?;
    let rhs = g.glue(&morphism.source, &g.restrict(&sa, &morphism.q_a)?, &g.restrict(&sb, &morphism.q_b)?)?;
    let input = || json!({ "morphism": to_json(morphism), "section": to_json(s) });
    expect_eq("partial naturality", input, &lhs, &rhs)
}

/// The overlap of a bicovering together with its two projections.
fn overlap<G: Gleaf + ?Sized>(g: &G, cover: &Cover<ArrowOf<G>>) -> Result<(ArrowOf<G>, ArrowOf<G>), Error> {
    match g.system().pullback(&cover.a, &cover.b) {
        Some((_, pa, pb)) => Ok((pa, pb)),
        None => Err(Error::Domain("bicovering has no pullback".into())),
    }
}

/// Both halves of the two-step rule: a section over `a'` glues with one over
/// `b` by first gluing it with the overlap, and symmetrically for `b'`.
pub fn check_two_step_gleaf<G: Gleaf + ?Sized>(
    g: &G,
    cover: &Cover<ArrowOf<G>>,
    a_shrink: &ArrowOf<G>,
    b_shrink: &ArrowOf<G>,
    s: &G::Section,
) -> LawResult {
    let sys = g.system();
    let (pa, pb) = overlap(g, cover)?;
    let input = || {
        json!({ "cover": to_json(cover), "a_shrink": to_json(a_shrink), "b_shrink": to_json(b_shrink), "section": to_json(s) })
    };

    let upper = shrunk(g, cover, a_shrink, Side::A)?;
    let (sa2, sb) = split(g, &upper, s)?;
    let direct = g.glue(&upper, &sa2, &sb)?;
    let inner = Cover::new(sys, a_shrink.clone(), pa.clone())?;
    let over_a = g.glue(&inner, &sa2, &g.restrict(s, &sys.compose(&cover.a, &pa)?)?)?;
    let stepped = g.glue(cover, &over_a, &sb)?;
    expect_eq("two-step (a side)", input, &direct, &stepped)?;

    let lower = shrunk(g, cover, b_shrink, Side::B)?;
    let (sa, sb2) = split(g, &lower, s)?;
    let direct = g.glue(&lower, &sa, &sb2)?;
    let inner = Cover::new(sys, pb.clone(), b_shrink.clone())?;
    let over_b = g.glue(&inner, &g.restrict(s, &sys.compose(&cover.b, &pb)?)?, &sb2)?;
    let stepped = g.glue(cover, &sa, &over_b)?;
    expect_eq("two-step (b side)", input, &direct, &stepped)
}

/// Gluing sections over `a'`, the overlap, and `b'` in either order agrees.
pub fn check_gleaf_associativity<G: Gleaf + ?Sized>(
    g: &G,
    cover: &Cover<ArrowOf<G>>,
    a_shrink: &ArrowOf<G>,
    b_shrink: &ArrowOf<G>,
    s: &G::Section,
) -> LawResult {
    let sys = g.system();
    let (pa, pb) = overlap(g, cover)?;
    let a2 = sys.compose(&cover.a, a_shrink)?;
    let b2 = sys.compose(&cover.b, b_shrink)?;
    if !sys.is_bicovering(&a2, &cover.b) || !sys.is_bicovering(&cover.a, &b2) {
        bail!(Domain, "shrunken legs do not form bicoverings");
    }
    let sa2 = g.restrict(s, &a2)?;
    let sp = g.restrict(s, &sys.compose(&cover.a, &pa)?)?;
    let sb2 = g.restrict(s, &b2)?;

    let left_inner = g.glue(&Cover::new(sys, a_shrink.clone(), pa)?, &sa2, &sp)?;
    let left = g.glue(&Cover::new(sys, cover.a.clone(), b2.clone())?, &left_inner, &sb2)?;
    let right_inner = g.glue(&Cover::new(sys, pb, b_shrink.clone())?, &sp, &sb2)?;
    let right = g.glue(&Cover::new(sys, a2, cover.b.clone())?, &sa2, &right_inner)?;
    let input = || {
        json!({ "cover": to_json(cover), "a_shrink": to_json(a_shrink), "b_shrink": to_json(b_shrink), "section": to_json(s) })
    };
    expect_eq("gleaf associativity", input, &left, &right)
}
