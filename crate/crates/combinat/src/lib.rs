//! Set partitions of `{0, .., n-1}` ordered by reverse refinement.
//!
//! A [`Partition`] is always stored in canonical form: blocks sorted by their
//! least element and elements sorted inside each block.  Two partitions are
//! therefore equal exactly when they have the same blocks, and can be used as
//! hash-map keys.
#![forbid(unsafe_code)]

mod enumerate;
mod moebius;
mod partition;

pub use enumerate::{bell, AbovePartitions, SetPartitions};
pub use moebius::{factorial, moebius_coefficient};
pub use partition::{kernel_of, Partition, PartitionTuple};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("ground-set sizes differ: {left} vs {right}")]
    GroundSizeMismatch { left: usize, right: usize },
    #[error("partitions are not comparable in the refinement order")]
    NotComparable,
    #[error("invalid block structure: {0}")]
    InvalidBlocks(String),
    #[error("partition tuple is empty or has inconsistent ground sizes")]
    InvalidTuple,
}
