//! Exact arithmetic: Gaussian rationals and sparse matrices over them.

mod matrix;
mod scalar;

pub use matrix::{span_rank, ExactMatrix, SparseRow};
pub use scalar::GaussRat;
