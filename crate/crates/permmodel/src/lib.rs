//! The random permutation model for graph independence over the diagonal:
//! operands on tensor products of strings, uniformly random permutations per
//! colour, the diagonal conditional expectation, centered alternating words,
//! and a seeded experiment that tracks their decay as `N` grows.
#![forbid(unsafe_code)]

mod experiment;
mod operand;
mod perms;
mod word;

pub use experiment::{
    independence_experiment, median, two_free_m2_config, ExperimentConfig, ExperimentReport,
    LetterSpec, Source, SummaryRow, TrialValue, WordSpec, TWO_FREE_M2_WORD,
};
pub use operand::{delta, norm2, normalized_trace, pad, Space, TensorOperand, DEFAULT_DENSE_CAP};
pub use perms::{keyed_rng, tag, ColourPermutations};
pub use word::{graph_product_microstates, place_microstate, Factor, PermModel, WordLetter};

use gpsofic_digraphs::GraphError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PermError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Alg(#[from] gpsofic_algnum::AlgError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("colour word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("operand norm {norm} exceeds the declared bound {cap}")]
    NormCap { norm: f64, cap: f64 },
    #[error("resource limit: {0}")]
    Resource(String),
}
