//! Local computation with advice: encoders that assign short bit-strings to
//! the nodes of a graph, and LOCAL-model decoders that turn those strings
//! into solutions of graph problems in a number of rounds independent of
//! the graph size.

pub mod advice;
pub mod bits;
pub mod coloring;
pub mod compose;
pub mod error;
pub mod experiment;
pub mod gen;
pub mod graph;
pub mod io;
pub mod lcl;
pub mod local;
pub mod onebit;
pub mod orientation;
pub mod search;
pub mod subexp;
pub mod solution;

pub use error::{Error, Result};
pub use graph::Graph;
