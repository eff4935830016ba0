//! Almost-balanced orientations and the schemas built on them: splitting,
//! Δ-edge coloring of regular bipartite graphs, and edge-subset compression.

pub mod decompose;
pub mod edge_coloring;
pub mod edge_subset;
pub mod schema;
pub mod splitting;

pub use decompose::{cycle_decompose, orient_short_cycle, CycleDecomposition, Piece};
pub use schema::{OrientationConfig, OrientationEncoding, OrientationSchema, Pair, ShiftProblem};
pub use edge_coloring::{delta_edge_coloring_alpha, delta_edge_coloring_schema};
pub use edge_subset::EdgeSubsetCodec;
pub use splitting::{splitting_schema, HandSplitting, TwoColoringSchema};
