//! Compositories: simplicial sets with a dimension-raising composition
//! `A ∘_k B` defined on pairs whose terminal and initial `k`-faces agree.

mod harness;
pub(crate) mod laws;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{bail, Result};
use crate::simplex::{source_incl, target_incl, MonotoneMap};

pub use harness::{
    exhaustive_workload, facenot_scan, random_workload, run_compository_suite, Axiom, FacenotScan,
    Failure, PairCase, Report, SuiteOptions, TripleCase, Workload,
};
pub use laws::{
    check_associativity, check_back_and_forth, check_degeneracy_compat, check_face_compat,
    check_facenot, check_functoriality, check_higher_identity, check_identity_axiom,
    check_source_target, check_st_comp, check_two_step, LawFailure, Violation,
};

/// A simplicial set: simplices graded by dimension, with a contravariant
/// action `A ↦ Af` of monotone maps.
pub trait SimplicialSet {
    type Simplex: Clone + Eq + Hash + Debug + Serialize + Send + Sync;

    fn dim(&self, a: &Self::Simplex) -> usize;

    /// The right action `Af` for `f : [p] -> [dim A]`.
    fn act(&self, a: &Self::Simplex, f: &MonotoneMap) -> Result<Self::Simplex>;

    /// `A s_k`, the initial `k`-face.
    fn source_face(&self, a: &Self::Simplex, k: usize) -> Result<Self::Simplex> {
        self.act(a, &source_incl(k, self.dim(a))?)
    }

    /// `A t_k`, the terminal `k`-face.
    fn target_face(&self, a: &Self::Simplex, k: usize) -> Result<Self::Simplex> {
        self.act(a, &target_incl(k, self.dim(a))?)
    }
}

/// A simplicial set with a composition `A ∘_k B` of dimension `m + n - k`.
pub trait Compository: SimplicialSet {
    fn compose(&self, a: &Self::Simplex, k: usize, b: &Self::Simplex) -> Result<Self::Simplex>;
}

/// True iff `A t_k = B s_k`.
pub fn is_k_composable<C: SimplicialSet + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
) -> Result<bool> {
    let (m, n) = (c.dim(a), c.dim(b));
    if k > m.min(n) {
        bail!(Domain, "k = {k} exceeds min(dim A, dim B) = {}", m.min(n));
    }
    Ok(c.target_face(a, k)? == c.source_face(b, k)?)
}

/// A pair `(A, B)` together with the overlap `k`, validated to be composable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KComposablePair<S> {
    a: S,
    k: usize,
    b: S,
}

impl<S: Clone> KComposablePair<S> {
    pub fn new<C>(c: &C, a: S, k: usize, b: S) -> Result<Self>
    where
        C: SimplicialSet<Simplex = S> + ?Sized,
    {
        if !is_k_composable(c, &a, k, &b)? {
            bail!(Composition, "terminal {k}-face of A differs from initial {k}-face of B");
        }
        Ok(KComposablePair { a, k, b })
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> &S {
        &self.b
    }
}

/// Describes why `(A, B)` is not `k`-composable, naming the mismatched face.
pub fn composability_diagnostic<C: SimplicialSet + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
) -> Result<Option<String>> {
    if is_k_composable(c, a, k, b)? {
        return Ok(None);
    }
    let at = serde_json::to_string(&c.target_face(a, k)?).unwrap_or_default();
    let bs = serde_json::to_string(&c.source_face(b, k)?).unwrap_or_default();
    Ok(Some(format!(
        "not {k}-composable: terminal {k}-face of A is {at} but initial {k}-face of B is {bs}"
    )))
}
