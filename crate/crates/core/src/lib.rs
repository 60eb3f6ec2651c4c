//! Compositories and gleaves over finite data.
//!
//! A *compository* is a simplicial set with a composition `A ∘_k B` that
//! glues an `m`-simplex and an `n`-simplex along a shared `k`-face. A
//! *gleaf* is a presheaf with a gluing operation on compatible pairs of local
//! sections. This crate implements both structures, instantiates them on
//! nerves of finite categories, higher spans in finite lattices, finite
//! metrics, probability tables, relations and finite topologies, and checks
//! every axiom with exact rational arithmetic.

pub mod compository;
pub mod error;
pub mod finset;
pub mod gleaf;
pub mod metric;
pub mod nerve;
pub mod probability;
pub mod rational;
pub mod relational;
pub mod simplex;
pub mod spans;
pub mod suite;
pub mod topology;

pub use compository::{Compository, KComposablePair, Report, SimplicialSet};
pub use error::{Error, Result};
pub use finset::{FinMap, FinSet, Label};
pub use gleaf::{BicoveringSystem, Cover, Gleaf};
pub use rational::{ExtRational, Q};
pub use simplex::MonotoneMap;
