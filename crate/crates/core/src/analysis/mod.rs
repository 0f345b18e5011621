//! Interaction digraphs, distances and property verification.

mod digraph;
mod verify;

pub use digraph::*;
pub use verify::*;
