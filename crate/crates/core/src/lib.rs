//! Constructive blocking partitions for planar, bounded-treewidth and
//! bounded-genus graphs, with an exhaustive clean-path verifier.

pub mod blocking;
pub mod chordal;
pub mod claims;
pub mod embedding;
pub mod generators;
pub mod graph;
pub mod refinement;
pub mod report;
pub mod shallow;
pub mod steiner;
pub mod surface;
pub mod treepart;
