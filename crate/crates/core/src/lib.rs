//! Generalized circumradius computations and finite diversity tooling.
//!
//! `R(A, K)` is the least `λ ≥ 0` such that some translate of `λK` covers the
//! finite point set `A`. The crate computes it for several families of convex
//! bodies, models finite diversities (set functions satisfying the diversity
//! axioms), and builds or rejects isometric embeddings of finite diversities
//! into circumradius diversities.
//!
//! Module map:
//! - [`geomkit`]: points, point sets, affine maps, kernels and elementary predicates.
//! - [`linprog`]: a small dense two-phase simplex solver.
//! - [`circumradius`]: `R(A, K)` with witness centers, core sets, union translations.
//! - [`diversity`]: finite diversity tables, standard families, axiom checks.
//! - [`embed`]: embeddability tests and constructive embeddings.
//! - [`cli`]: the `circumdiv` command-line front end.

pub mod circumradius;
pub mod cli;
pub mod diversity;
pub mod embed;
mod error;
pub mod geomkit;
pub mod linprog;
pub mod tolerance;

pub use circumradius::{
    ball_core_set, circumradius, circumradius_seeded, core_set, min_union_translation,
    union_translation_witness, Circumsolution, CoreSetResult, UnionTranslation,
};
pub use diversity::{DiversityOracle, FiniteDiversity};
pub use error::{Error, Result};
pub use geomkit::{AffineMap, Kernel, Point, PointSet};

/// Seed used by every randomized routine unless overridden.
pub const DEFAULT_SEED: u64 = 0x5EED;
