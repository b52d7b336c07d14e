//! Simplicial complexes, semisimplicial sets, links, Cohen–Macaulay checks, and split partial bases.

pub mod bases;
pub mod complex;
pub mod homol;
pub mod ss;

pub use bases::{bases_complex, obases, BasesComplex, BasesVertex, OBases};
pub use complex::{SimplicialComplex, StandardKind};
pub use homol::{
    boundary_matrix, connectivity_failure, is_weakly_cm, is_weakly_forward_cm, reduced_homology, CmMode, CmReport,
    ReducedHomology,
};
pub use ss::{large_ordering, osim, quotient_by_group, GroupActionOnSS, SemisimplicialSet};

use thiserror::Error;

use crate::exactlin::LinError;
use crate::finring::RingError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("face {0:?} of a listed simplex is missing")]
    NotClosed(Vec<usize>),
    #[error("simplex {0:?} is not present")]
    Absent(Vec<usize>),
    #[error("semisimplicial identity fails at level {level}, simplex {simplex}, (i, j) = ({i}, {j})")]
    FaceIdentity { level: usize, simplex: usize, i: usize, j: usize },
    #[error("operation needs an ordering (vertex sequences)")]
    NotOrdering,
    #[error("invalid group action: {0}")]
    BadAction(String),
    #[error("level {needed} is required but the set was truncated at level {cap}")]
    BeyondCap { needed: usize, cap: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lin(#[from] LinError),
}
