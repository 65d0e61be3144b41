//! Exact computation in the monoid of multipermutations on `[n]` and the
//! lattice of down-shop-monoids.
//!
//! A multipermutation is a binary relation on `[n]` that is total (every
//! element has an image) and surjective (every element has a preimage);
//! equivalently, an n×n boolean matrix with no zero row and no zero column.
//! This crate provides:
//!
//! * [`relcore`] — the value types (bit-packed relations, multipermutations,
//!   permutations) and their elementwise algebra;
//! * [`blurred`] — blurred permutations: construction from a block
//!   partition and a block permutation, recognition, and the difunctional /
//!   completely-regular characterisations;
//! * [`monoid`] — enumeration of the full monoid M_n, closure of generating
//!   sets, generating-set verification, and prime-element search;
//! * [`green`] — Green's relations on M_n via bounded row/column spans,
//!   with brute-force multiplication oracles;
//! * [`regular`] — regularity of relations and multipermutations, greatest
//!   inverses, and the Kim–Roush inverse construction adapted to
//!   multipermutations;
//! * [`dsm`] — down-shop-monoids (sets containing the identity, closed
//!   under composition and sub-multipermutations), the lattice F_n, its
//!   inverse and relabelling automorphisms, and blurred permutation
//!   subgroups;
//! * [`galois`] — surjective hyper-endomorphisms of finite structures,
//!   invariant relations, witness relations, and the Logspace /
//!   Pspace-complete classifier for she-complementative structures.
//!
//! The crate is `no_std` (with `alloc`); all operations are pure functions
//! over immutable values and may be called concurrently without
//! restriction. Results are deterministic: sets are kept in a canonical
//! order (ascending packed matrix key).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bitset;
pub mod blurred;
pub mod dsm;
pub mod error;
pub mod galois;
pub mod green;
pub mod monoid;
pub mod regular;
pub mod relcore;

pub use error::{Error, Result};
pub use relcore::{BoolVec, Multipermutation, Permutation, Relation};
