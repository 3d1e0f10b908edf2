//! Exact arithmetic in cyclotomic integers and matrices over them, Galois
//! orbits, pseudo-determinants with the orbit lower bound, and explicit
//! microstates for matrix algebras built from finite crossed products.
#![forbid(unsafe_code)]

mod cyclotomic;
mod determinant;
mod matrix;
mod microstates;

pub use cyclotomic::{units, CycInt, DEFAULT_MAX_CONDUCTOR};
pub use determinant::{
    certify, det_plus, galois_certificate_bound, galois_orbit, liminf_certificate,
    operator_norm_upper, orbit_lower_bound, singular_values, Certificate, DetPlus, GaloisOrbit,
    LiminfRow, LiminfTable, RankThreshold, CERTIFICATE_TOLERANCE,
};
pub use matrix::CycMatrix;
pub use microstates::{
    crossed_product_generators, crossed_product_microstate, diag_deviation, diagonal_is_constant,
    direct_sum_microstates, multiplicity_schedule, tensor_microstates, CrossedElement,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
