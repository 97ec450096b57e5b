//! Lower and upper bounds on the optimal codelength of multi-sender
//! uniprior-multicast index coding problems, explicit sender-feasible XOR
//! codes, and a brute-force linear oracle for small instances.
//!
//! The pipeline mirrors the CLI: [`model`] parses and simplifies an instance
//! and derives its graph pair, [`graphs`] classifies leaf SCCs, [`bound`] runs
//! the leaf-SCC breaking algorithm for the lower bound, [`code`] builds
//! connecting-tree codes for the upper bound, and [`verify`] certifies
//! decodability and searches for the shortest linear code.

pub mod bound;
pub mod code;
pub mod dot;
pub mod error;
pub mod gf2;
pub mod graphs;
pub mod model;
mod one_based;
pub mod report;
pub mod verify;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use model::{parse_instance, GraphPair, InstanceDoc, ProblemInstance};
