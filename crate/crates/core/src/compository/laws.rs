//! Exact-equality checks of the compository axioms and their consequences.
//!
//! Each check returns `Ok(())` when every equation it covers holds, a
//! [`LawFailure::Violation`] carrying both sides of the first equation that
//! fails, or a [`LawFailure::Precondition`] when the inputs are out of range.

use serde::Serialize;
use serde_json::{json, Value};

use super::{is_k_composable, Compository};
use crate::error::{bail, Error};
use crate::simplex::{compose as compose_maps, degeneracy, face, MonotoneMap};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub law: String,
    pub input: Value,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LawFailure {
    Violation(Violation),
    Precondition(Error),
}

impl From<Error> for LawFailure {
    fn from(e: Error) -> Self {
        LawFailure::Precondition(e)
    }
}

impl std::fmt::Display for LawFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LawFailure::Violation(v) => write!(f, "{} violated: {} != {}", v.law, v.lhs, v.rhs),
            LawFailure::Precondition(e) => write!(f, "{e}"),
        }
    }
}

pub type LawResult = Result<(), LawFailure>;

pub(crate) fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub(crate) fn expect_eq<T: PartialEq + Serialize>(law: &str, input: impl FnOnce() -> Value, lhs: &T, rhs: &T) -> LawResult {
    if lhs == rhs {
        Ok(())
    } else {
        Err(LawFailure::Violation(Violation {
            law: law.to_string(),
            input: input(),
            lhs: to_json(lhs),
            rhs: to_json(rhs),
        }))
    }
}

fn pair_input<S: Serialize>(a: &S, k: usize, b: &S, extra: Value) -> Value {
    let mut v = json!({ "a": to_json(a), "k": k, "b": to_json(b) });
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

fn require_composable<C: Compository + ?Sized>(c: &C, a: &C::Simplex, k: usize, b: &C::Simplex) -> LawResult {
    if !is_k_composable(c, a, k, b)? {
        return Err(Error::Composition(format!("pair is not {k}-composable")).into());
    }
    Ok(())
}

/// `A s_k ∘_k A = A` and `A ∘_k A t_k = A`.
pub fn check_identity_axiom<C: Compository + ?Sized>(c: &C, a: &C::Simplex, k: usize) -> LawResult {
    let m = c.dim(a);
    if k > m {
        bail!(Domain, "k = {k} exceeds dim A = {m}");
    }
    let input = || json!({ "a": to_json(a), "k": k });
    let left = c.compose(&c.source_face(a, k)?, k, a)?;
    expect_eq("identity (source)", input, &left, a)?;
    let right = c.compose(a, k, &c.target_face(a, k)?)?;
    expect_eq("identity (target)", input, &right, a)
}

/// `A ∘_k B = (A ∘_k B) s_{m+i} ∘_{k+i} B = A ∘_{k+j} (A ∘_k B) t_{n+j}`
/// for `i <= n - k` and `j <= m - k`.
pub fn check_back_and_forth<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
    i: usize,
    j: usize,
) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    if i > n - k || j > m - k {
        bail!(Domain, "back-and-forth needs i <= n-k and j <= m-k (i={i}, j={j}, m={m}, n={n}, k={k})");
    }
    let input = || pair_input(a, k, b, json!({ "i": i, "j": j }));
    let ab = c.compose(a, k, b)?;
    let first = c.compose(&c.source_face(&ab, m + i)?, k + i, b)?;
    expect_eq("back-and-forth (source)", input, &first, &ab)?;
    let second = c.compose(a, k + j, &c.target_face(&ab, n + j)?)?;
    expect_eq("back-and-forth (target)", input, &second, &ab)
}

/// Compatibility with `η_i`, checking every case whose index range contains `i`.
pub fn check_degeneracy_compat<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
    i: usize,
) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    let top = m + n - k;
    if i > top {
        bail!(Domain, "degeneracy index {i} exceeds {top}");
    }
    let input = || pair_input(a, k, b, json!({ "i": i }));
    let lhs = c.act(&c.compose(a, k, b)?, &degeneracy(i, top)?)?;
    if i <= m - k {
        let rhs = c.compose(&c.act(a, &degeneracy(i, m)?)?, k, b)?;
        expect_eq("degeneracy (initial range)", input, &lhs, &rhs)?;
    }
    if i >= m {
        let rhs = c.compose(a, k, &c.act(b, &degeneracy(i + k - m, n)?)?)?;
        expect_eq("degeneracy (terminal range)", input, &lhs, &rhs)?;
    }
    if m - k <= i && i <= m {
        let rhs = c.compose(
            &c.act(a, &degeneracy(i, m)?)?,
            k + 1,
            &c.act(b, &degeneracy(i + k - m, n)?)?,
        )?;
        expect_eq("degeneracy (common face)", input, &lhs, &rhs)?;
    }
    Ok(())
}

/// Compatibility with `∂_i` for `i < m - k` or `i > m`.
pub fn check_face_compat<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
    i: usize,
) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    let top = m + n - k;
    if i > top {
        bail!(Domain, "face index {i} exceeds {top}");
    }
    if m - k <= i && i <= m {
        bail!(Domain, "face compatibility says nothing for m-k <= i <= m (i={i}, m={m}, k={k})");
    }
    let input = || pair_input(a, k, b, json!({ "i": i }));
    let lhs = c.act(&c.compose(a, k, b)?, &face(i, top)?)?;
    let rhs = if i < m - k {
        c.compose(&c.act(a, &face(i, m)?)?, k, b)?
    } else {
        c.compose(a, k, &c.act(b, &face(i + k - m, n)?)?)?
    };
    expect_eq("face", input, &lhs, &rhs)
}

/// The face condition on the common face, `(A ∘_k B)∂_i = A∂_i ∘_{k-1} B∂_{i-m+k}`
/// for `m - k <= i <= m`. This is not a compository axiom; it holds for nerves
/// and fails for metrics.
pub fn check_facenot<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
    i: usize,
) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    if k == 0 || i + k < m || i > m {
        bail!(Domain, "common-face condition needs k >= 1 and m-k <= i <= m (i={i}, m={m}, k={k})");
    }
    let input = || pair_input(a, k, b, json!({ "i": i }));
    let lhs = c.act(&c.compose(a, k, b)?, &face(i, m + n - k)?)?;
    let a_face = c.act(a, &face(i, m)?)?;
    let b_face = c.act(b, &face(i + k - m, n)?)?;
    if !is_k_composable(c, &a_face, k - 1, &b_face)? {
        return Err(LawFailure::Violation(Violation {
            law: "common face (faces not composable)".into(),
            input: input(),
            lhs: to_json(&c.target_face(&a_face, k - 1)?),
            rhs: to_json(&c.source_face(&b_face, k - 1)?),
        }));
    }
    let rhs = c.compose(&a_face, k - 1, &b_face)?;
    expect_eq("common face", input, &lhs, &rhs)
}

/// `(A ∘_k B) s_m = A` and `(A ∘_k B) t_n = B`.
pub fn check_source_target<C: Compository + ?Sized>(c: &C, a: &C::Simplex, k: usize, b: &C::Simplex) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    let input = || pair_input(a, k, b, Value::Null);
    let ab = c.compose(a, k, b)?;
    expect_eq("source recovery", input, &c.source_face(&ab, m)?, a)?;
    expect_eq("target recovery", input, &c.target_face(&ab, n)?, b)
}

/// `A ∘_k B = A ∘_i (A t_i ∘_k B) = (A ∘_k B s_j) ∘_j B` for `k <= i <= m`, `k <= j <= n`.
pub fn check_two_step<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
    i: usize,
    j: usize,
) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    if i < k || i > m || j < k || j > n {
        bail!(Domain, "two-step rule needs k <= i <= m and k <= j <= n");
    }
    let input = || pair_input(a, k, b, json!({ "i": i, "j": j }));
    let ab = c.compose(a, k, b)?;
    let first = c.compose(a, i, &c.compose(&c.target_face(a, i)?, k, b)?)?;
    expect_eq("two-step (via A t_i)", input, &ab, &first)?;
    let second = c.compose(&c.compose(a, k, &c.source_face(b, j)?)?, j, b)?;
    expect_eq("two-step (via B s_j)", input, &ab, &second)
}

/// `A ∘_j (B ∘_k C) = (A ∘_j B) ∘_k C` for a `(j, k)`-composable triple.
pub fn check_associativity<Co: Compository + ?Sized>(
    co: &Co,
    a: &Co::Simplex,
    j: usize,
    b: &Co::Simplex,
    k: usize,
    c: &Co::Simplex,
) -> LawResult {
    require_composable(co, a, j, b)?;
    require_composable(co, b, k, c)?;
    let input = || json!({ "a": to_json(a), "j": j, "b": to_json(b), "k": k, "c": to_json(c) });
    let left = co.compose(a, j, &co.compose(b, k, c)?)?;
    let right = co.compose(&co.compose(a, j, b)?, k, c)?;
    expect_eq("associativity", input, &left, &right)
}

/// `(A ∘_k B) s_i = A ∘_k B s_{i-m+k}` for `i >= m` and
/// `(A ∘_k B) t_j = A t_{j-n+k} ∘_k B` for `j >= n`.
pub fn check_st_comp<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    k: usize,
    b: &C::Simplex,
    i: usize,
    j: usize,
) -> LawResult {
    require_composable(c, a, k, b)?;
    let (m, n) = (c.dim(a), c.dim(b));
    let top = m + n - k;
    if i < m || j < n || i > top || j > top {
        bail!(Domain, "needs m <= i <= m+n-k and n <= j <= m+n-k");
    }
    let input = || pair_input(a, k, b, json!({ "i": i, "j": j }));
    let ab = c.compose(a, k, b)?;
    let lhs = c.source_face(&ab, i)?;
    let rhs = c.compose(a, k, &c.source_face(b, i + k - m)?)?;
    expect_eq("initial face of composite", input, &lhs, &rhs)?;
    let lhs = c.target_face(&ab, j)?;
    let rhs = c.compose(&c.target_face(a, j + k - n)?, k, b)?;
    expect_eq("terminal face of composite", input, &lhs, &rhs)
}

/// Degenerate faces act as higher identities:
/// `A ∘_k Fη_k = Aη_m` with `F = A t_k`, its two faces `∂_m, ∂_{m+1}` are `A`,
/// and `Eη_0 ∘_k A = Aη_0` with `E = A s_k`.
pub fn check_higher_identity<C: Compository + ?Sized>(c: &C, a: &C::Simplex, k: usize) -> LawResult {
    let m = c.dim(a);
    if k > m {
        bail!(Domain, "k = {k} exceeds dim A = {m}");
    }
    let input = || json!({ "a": to_json(a), "k": k });
    let f = c.target_face(a, k)?;
    let f_deg = c.act(&f, &degeneracy(k, k)?)?;
    let composite = c.compose(a, k, &f_deg)?;
    expect_eq("higher identity (target)", input, &composite, &c.act(a, &degeneracy(m, m)?)?)?;
    expect_eq("higher identity (face m)", input, &c.act(&composite, &face(m, m + 1)?)?, a)?;
    expect_eq("higher identity (face m+1)", input, &c.act(&composite, &face(m + 1, m + 1)?)?, a)?;
    let e = c.source_face(a, k)?;
    let e_deg = c.act(&e, &degeneracy(0, k)?)?;
    let composite = c.compose(&e_deg, k, a)?;
    expect_eq("higher identity (source)", input, &composite, &c.act(a, &degeneracy(0, m)?)?)
}

/// `(A g) f = A (g ∘ f)`, and `A id = A`.
pub fn check_functoriality<C: Compository + ?Sized>(
    c: &C,
    a: &C::Simplex,
    g: &MonotoneMap,
    f: &MonotoneMap,
) -> LawResult {
    let input = || json!({ "a": to_json(a), "g": to_json(g), "f": to_json(f) });
    let id = MonotoneMap::identity(c.dim(a));
    expect_eq("identity action", input, &c.act(a, &id)?, a)?;
    let lhs = c.act(&c.act(a, g)?, f)?;
    let rhs = c.act(a, &compose_maps(g, f)?)?;
    expect_eq("functoriality", input, &lhs, &rhs)
}
