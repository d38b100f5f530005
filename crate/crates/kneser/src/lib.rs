//! Toolkit for Kneser graph colorings and the combinatorics behind the
//! Kneser-Lovász theorem: proper-coloring constructions and verification,
//! star-shaped color-class analysis and counting bounds, descent reductions
//! that shrink instances toward finitely many base cases, exhaustive base-case
//! search, truncated octahedral balls with antipodal labelings (the truncated
//! Tucker lemma), and propositional translations of all of the above.
//!
//! Everything is exact: binomials use arbitrary-precision integers, thresholds
//! use exact rationals, and every randomized path is driven by a single 64-bit
//! seed so artifacts are reproducible byte for byte.

pub mod basecase;
pub mod coloring;
pub mod combinat;
pub mod descent;
pub mod rng;
pub mod translate;
pub mod tucker;

pub use coloring::Coloring;
pub use combinat::{InstanceParams, Vertex};
