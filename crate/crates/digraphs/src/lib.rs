//! Coloured test digraphs and the combinatorial structures derived from them:
//! weakly connected components, quotients by vertex partitions, colour
//! restrictions, two-edge-connected components, and graphs of coloured
//! components (GCC) over a string assignment.
#![forbid(unsafe_code)]

mod colour;
mod digraph;
pub mod fixture;
mod gcc;
mod two_edge;

pub use colour::{
    build_string_assignment, is_g_reduced, minimize_strings, ColourGraph, StringAssignment,
};
pub use digraph::{components, quotient, restrict_colours, Edge, TestDigraph};
pub use gcc::{
    colour_quotient, gcc, induced_walk, pi_colour, rho, string_quotient, BipartiteMultigraph,
    ColouredComponent, Gcc, GccEdge, GccVertex, GccWalk,
};
pub use two_edge::{two_edge_connected, TwoEdgeReport};

use gpsofic_combinat::PartitionError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("vertex {vertex} out of range (digraph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown string index {0}")]
    UnknownString(usize),
    #[error("unknown colour index {0}")]
    UnknownColour(usize),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("colour graph is invalid: {0}")]
    InvalidColourGraph(String),
    #[error("string assignment is invalid: {0}")]
    InvalidAssignment(String),
    #[error("partition for string {string} is not above its floor")]
    BelowFloor { string: usize },
    #[error("partition tuple has {got} entries, expected {expected}")]
    TupleLength { got: usize, expected: usize },
    #[error("edge id {0} not present")]
    UnknownEdge(usize),
    #[error("edge sequence is not a walk: {0}")]
    NotAWalk(String),
}
