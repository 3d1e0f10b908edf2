//! Noncommutative polynomials with cyclotomic integer coefficients, their
//! evaluation at matrix tuples, free difference quotients into the tensor
//! square, the relation matrix built from them, and finite-degree laws.
#![forbid(unsafe_code)]

mod bipoly;
mod law;
mod parse;
mod poly;
mod presentation;

pub use bipoly::{
    build_df, free_difference_quotient, rank_defect_report, DfMatrix, NcBiPoly, RankDefect,
};
pub use law::{diag_constancy, Law, DEFAULT_DEGREE_CAP};
pub use poly::{evaluate_matrix, Letter, NcPoly, Variables, Word};
pub use presentation::{crossed_product_presentation, Presentation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("expected {expected} variables, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("free difference quotients need self-adjoint variables")]
    NotSelfAdjoint,
    #[error("word of length {degree} is beyond the degree cap {cap}")]
    DegreeCap { cap: usize, degree: usize },
    #[error(transparent)]
    Alg(#[from] gpsofic_algnum::AlgError),
}
