//! Toolkit for building and exactly verifying partite hypergraph families
//! that pack many edge-disjoint copies of a pattern while containing few
//! copies overall.
//!
//! The crate is organized around the pipeline the CLI drives:
//!
//! - [`hypergraph`]: uniform hypergraphs, shadows, blowups, partiteness,
//!   text/JSON round-trips.
//! - [`homomorphism`]: homomorphism search, isomorphism, core computation.
//! - [`structure`]: chordality certificates, clique extraction on chordal
//!   shadows, and witness selection for the analyzer.
//! - [`behrend`]: dense progression-free subsets of `[m]` plus exact oracles.
//! - [`constructions`]: the partite instance builders (arithmetic copy
//!   placements, randomized extension with alteration, blowup amplification,
//!   lifting along a subgraph embedding).
//! - [`counting`]: exact copy counting and disjointness verification.
//! - [`cli`]: reproducible command front-end used by the `rlab` binary.

pub mod behrend;
pub mod bits;
pub mod cli;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod homomorphism;
pub mod hypergraph;
pub mod rng;
pub mod structure;
pub mod util;

pub use error::{Error, Result};
pub use hypergraph::{Graph, KGraph, VertexMap};
