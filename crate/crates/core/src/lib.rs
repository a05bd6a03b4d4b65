//! Exact computations for representation-theoretic obstructions to small
//! tensor border rank.
//!
//! The crate is organised bottom-up:
//!
//! - [`partitions`]: dominance order, meets, staircase partitions.
//! - [`symgroup`], [`kronecker`]: characters of `S_d` and Kronecker
//!   coefficients.
//! - [`tableaux`]: semistandard bases of weight spaces and straightening.
//! - [`invariants`]: invariant dimensions for the stabilizers of unit and
//!   matrix multiplication tensors.
//! - [`tensors`], [`hwv`]: rank-one decompositions and exact evaluation of
//!   highest weight vectors on them.
//! - [`obstructions`]: the end-to-end border rank argument.
//! - [`polytopes`]: normalised weights and exact convex hull membership.
//!
//! The guide under `book/` walks through the same material; its code
//! snippets are compiled as doctests of this crate.

pub mod error;
pub mod hwv;
pub mod invariants;
pub mod kronecker;
pub mod linalg;
pub mod obstructions;
pub mod partitions;
pub mod perm;
pub mod polytopes;
pub mod serial;
pub mod symgroup;
pub mod tableaux;
pub mod tensors;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use perm::Permutation;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/kronecker.md")]
    mod kronecker {}
    #[doc = include_str!("../../../book/src/tableaux.md")]
    mod tableaux {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/polytopes.md")]
    mod polytopes {}
}
