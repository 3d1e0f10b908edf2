//! Traffic moments of coloured test digraphs whose edges carry matrices on
//! tensor products of strings: plain and injective traces, the kernel
//! expansion into `gamma` terms, the exact expectation over independent
//! uniformly random permutations (one per colour), its leading-order part,
//! and the glued-cycle digraphs used for centered products.
#![forbid(unsafe_code)]

mod ambient;
mod eval;
mod expected;
mod glued;

pub use ambient::{Ambient, Labels, Operand};
pub use eval::{
    gamma, lambda_weight, trace_tau, trace_tau_injective, unnormalized_sum, Model, SumKind,
};
pub use expected::{
    all_permutations, expected_gamma, expected_trace, expected_trace_brute_force,
    leafcount_exponent, mingo_speicher_bound, moebius_injective, tuples_above_floor,
    LeafcountReport, Mode, MomentReport,
};
pub use glued::{
    build_centered_product_graph, centered_norm_direct, centered_norm_expansion,
    check_inconsistency, GluedCycles,
};

use gpsofic_digraphs::GraphError;
use thiserror::Error;

pub type Complex = num_complex::Complex64;
pub type DenseMatrix = nalgebra::DMatrix<Complex>;

#[derive(Debug, Error, PartialEq)]
pub enum TrafficError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] gpsofic_combinat::PartitionError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no matrix for label `{0}`")]
    MissingLabel(String),
    #[error("test digraph must be connected")]
    Disconnected,
    #[error("leading-order mode needs a two-edge-connected digraph")]
    NotTwoEdgeConnected,
    #[error("partition for string {0} is not above its floor")]
    BelowFloor(usize),
    #[error("empty colour word")]
    EmptyWord,
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}
