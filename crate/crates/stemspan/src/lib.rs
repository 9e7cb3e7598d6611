//! Spanning trees whose stems have few branch vertices.
//!
//! Deleting the leaves of a tree leaves its stem; this crate is a toolkit
//! around spanning trees whose stems have a bounded number of branch
//! vertices (stem vertices of stem-degree at least three), with a focus on
//! claw-free host graphs:
//!
//! - [`graph`]: immutable simple graphs, BFS distances, claw detection;
//! - [`tree`]: tree subgraphs and the leaf/stem decomposition;
//! - [`invariants`]: distance-constrained independence numbers, degree-sum
//!   minima, and the named sufficient conditions built on them;
//! - [`exact`]: exhaustive minimum-branch spanning tree search (plus an
//!   independent brute-force reference);
//! - [`search`]: a certified local-search solver that either produces a
//!   spanning tree within budget or a degree-sum violation witness;
//! - [`sharp`]: the extremal clique-chain family and its verifier;
//! - [`io`]: edge-list files, reports, corpus generation and the
//!   validation pipeline backing the CLI.

pub mod error;
pub mod exact;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod limits;
pub mod search;
pub mod sharp;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Edge, Graph};
pub use limits::Limits;
pub use tree::{StemProfile, TreeSubgraph};
