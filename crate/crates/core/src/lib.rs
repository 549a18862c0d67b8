//! Exact arithmetic for d-dimensional matrices of order n.
//!
//! The crate computes multidimensional permanents, works with Latin
//! hypercubes through their correspondence with 1-permutation matrices, and
//! builds explicit convex-hull certificates. Every scalar is an exact
//! rational; there is no floating-point path.
//!
//! Module map:
//!
//! * [`tensor`]: dense exact tensors, plane sums, stochasticity predicates,
//!   convex combinations and the contraction product.
//! * [`latin`]: Latin hypercubes, linear and cyclic constructions, the Delta
//!   function, cycle switching, completion and species canonical forms.
//! * [`permanent`]: 1-permanents and s-permanents, transversals, mixed
//!   transversals and the Delta-sum check.
//! * [`polytope`]: vertex tests, Birkhoff decomposition, transversal covers
//!   and exact rank.
//! * [`constructions`]: zero-permanent families, orthogonal pairs, the order
//!   six certificate, inductive hull witnesses and perturbation scans.
//! * [`repro`]: named reproduction checks shared by the CLI and the
//!   acceptance suite.

pub mod constructions;
pub mod error;
pub mod exact_cover;
pub mod latin;
pub mod limits;
pub mod linalg;
pub mod permanent;
pub mod polytope;
pub mod rational;
pub mod repro;
pub mod tensor;

pub use error::{Error, Result};
pub use latin::LatinHypercube;
pub use limits::Limits;
pub use permanent::{Diagonal, PermanentResult};
pub use polytope::HullCertificate;
pub use rational::Rational;
pub use tensor::{ConvexCombination, PlaneSpec, Tensor};
