//! Acyclic CP-nets over uniform finite domains.
//!
//! The crate covers the swap semantics of CP-nets, brute-force concept-class parameters
//! (VC, teaching and recursive teaching dimension), universal sets, constructive teaching
//! sets, membership-query oracles with persistent corruption, and exact learners.
//!
//! It is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod classes;
pub mod error;
pub mod generate;
pub mod graph;
pub mod learners;
pub mod model;
pub mod oracles;
pub mod teaching;
pub mod universal;

pub use error::{Error, Result};
pub use model::{
    canonical_swap, complete_extension, evaluate_swap, instance_space, max_edges, max_size, subsumes, ClassSpec,
    Completeness, CpNet, Cpt, Outcome, SwapInstance, Value,
};
