//! Group homology with twisted coefficients: finite groups and presentations, the bar
//! complex, stability tables, stabilizer systems, the machine conditions, the spectral
//! sequence of an equivariant system, and finite-index comparisons.

pub mod bar;
pub mod finite_index;
pub mod group;
pub mod machine;
pub mod present;
pub mod spectral;
pub mod sq;
pub mod stability;

pub use bar::bar_homology;
pub use finite_index::{finite_index_comparison, AbelianGroup, FiniteIndexReport, Lattice};
pub use group::{coinvariants, invariants, FiniteGroup, FiniteGroupRep, Representation};
pub use machine::{
    machine_conditions_check, obases_instance, osim_instance, stabilizer_system, Designation, GroupOnSystem,
    MachineInstance, MachineReport, StabilizerSystem, MACHINE_GROUP_GUARD,
};
pub use present::{h1_map, h1_presentation, Presentation, PresentationComplex};
pub use spectral::{spectral_sequence, DoubleComplex, SpectralPages, SpectralReport};
pub use stability::{twisted_stability_table, GlPresentation, StabilityFamily, StabilityRow, StabilityTable};

use thiserror::Error;

use crate::coeffsys::CoeffError;
use crate::exactlin::LinError;
use crate::finring::RingError;
use crate::funmod::FunError;
use crate::scomplex::ScError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("relation fails: {0}")]
    Relation(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("missing presentation: {0}")]
    MissingPresentation(String),
    #[error("precondition not verified: {0}")]
    Precondition(String),
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Fun(#[from] FunError),
    #[error(transparent)]
    Sc(#[from] ScError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lin(#[from] LinError),
}
