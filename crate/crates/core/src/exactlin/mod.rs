//! Exact sparse linear algebra over the rationals.
//!
//! All homology and quotient dimensions in this crate are computed here, so
//! they are exact integers rather than rank estimates.

mod echelon;
mod rational;
mod sparse;

pub use echelon::{kernel_basis, quotient_dim, rank, rref, Echelon, Subspace};
pub use rational::{ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactLinError {
    #[error("basis vector {index} of the subspace is not contained in the ambient subspace")]
    ContainmentViolation { index: usize },
    #[error("ambient dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
}
