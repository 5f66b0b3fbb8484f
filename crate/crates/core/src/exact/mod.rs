//! Arbitrary-precision integer and rational linear algebra.

mod elimination;
mod matrix;
mod snf;

use thiserror::Error;

pub use elimination::{
    determinant, hermite_row_basis, rank, rational_inverse, solve_rational, unimodular_inverse, Solution,
};
pub use matrix::{reduce_mod, IntMatrix, RatVector};
pub use snf::{smith_normal_form, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix needs {rows}x{cols} entries, got {found}")]
    EntryCount { rows: usize, cols: usize, found: usize },
    #[error("ragged rows: expected length {expected}, found {found}")]
    RaggedRows { expected: usize, found: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("square matrix required, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
}
