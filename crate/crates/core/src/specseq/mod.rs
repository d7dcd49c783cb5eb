//! Spectral sequences of finite filtered chain complexes.

mod complex;
mod pages;

pub use complex::{BoundaryEntry, Cell, ComplexSpec, FilteredComplex};
pub use pages::{
    associated_graded_homology, convergence_check, homology_dims, page, pages, pages_to_csv,
    PageTable, SpectralSequence,
};

use crate::free_dga::DgaError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecSeqError {
    #[error("boundary matrix is {rows}x{cols} but there are {cells} cells")]
    Shape { cells: usize, rows: usize, cols: usize },
    #[error("boundary of {from} hits {to}, which is not one degree lower")]
    DegreeViolation { from: String, to: String },
    #[error("boundary of {from} hits {to}, which has higher filtration")]
    FiltrationViolation { from: String, to: String },
    #[error("boundary of boundary of {0} is nonzero")]
    BoundarySquaredNonzero(String),
    #[error("duplicate cell id `{0}`")]
    DuplicateCell(String),
    #[error("unknown cell id `{0}`")]
    UnknownCell(String),
    #[error("page index must be at least 1, got {0}")]
    InvalidPage(usize),
    #[error("invalid complex file: {0}")]
    Format(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
}
