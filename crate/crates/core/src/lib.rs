//! Exact computation in the glued product `G ⋈ H` of two groups.
//!
//! Two groups `G` and `H` act on the union of their underlying sets with the
//! neutral elements identified into a single basepoint: each factor acts by
//! left multiplication on its own copy and trivially on the other one. The
//! group generated by both actions is the glued product. This crate models
//! elements of that group exactly, in the normal form `g · h · a` where `a`
//! is a finitely supported permutation, together with:
//!
//! * a catalog of factor groups ([`groups`]) and a Schreier–Sims order engine,
//! * finitely supported permutations of the pointed union ([`pointed_union`]),
//! * the product law, commutators, projections and embeddings ([`pv_core`]),
//! * the dense backend and Alt/Sym classification for finite factors ([`finite_pv`]),
//! * the commensurated-subset cube complex and its orbit invariant ([`cube_complex`]),
//! * local embeddings into finite glued products ([`lef`]),
//! * the free-semigroup check and Følner sets ([`dynamics`]).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cube_complex;
pub mod dynamics;
mod error;
pub mod finite_pv;
pub mod groups;
pub mod lef;
pub mod pointed_union;
pub mod pv_core;
pub mod text;

pub use error::{Error, Result};
pub use groups::{Element, Group, GroupKind, Order};
pub use pointed_union::{FinPerm, Parity, Point, Side};
pub use pv_core::{Letter, PvContext, PvElement, Regime};
