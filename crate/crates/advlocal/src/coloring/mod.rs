//! Vertex coloring with advice: an O(Δ²)-coloring from clusters, color
//! reduction, list coloring, Δ-coloring of Δ-colorable graphs and a 1-bit
//! 3-coloring of 3-colorable graphs.

pub mod constants;
pub mod delta;
pub mod initial;
pub mod linial;
pub mod list;
pub mod three;

pub use constants::{ColoringConstants, Constant};
pub use delta::{delta_coloring_alpha, delta_schema, find_recolor_plan, PartialColoring, RecolorPlan};
pub use initial::InitialColoringSchema;
pub use linial::{linial_reduce, linial_target};
pub use list::list_coloring;
pub use three::{three_coloring_schema, ThreeColoringSchema};
