//! Exact solvers for balanced connected 2-partitions of a graph's vertices
//! (BCP₂) and edges (BCEP₂).
//!
//! Engines: an exhaustive oracle, a dynamic program over nice tree
//! decompositions, a ball-and-contract driver for planar inputs, a
//! grid-cell kernel for unit disk graphs, and a representative-family
//! algorithm over the co-graphic matroid for edge partitions.

pub mod bcep;
pub mod dp;
pub mod dsu;
pub mod error;
pub mod field;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matroid;
pub mod oracle;
pub mod planar;
pub mod stats;
pub mod treedecomp;
pub mod udg;
pub mod util;

pub use error::{Error, Result};
pub use graph::{
    bfs_ball, connected_components, contract_outside, is_connected, verify_bcep2, verify_bcp2,
    BcepSemantics, Contraction, EdgePartitionWitness, Graph, VertexPartitionWitness,
};
pub use stats::Stats;
