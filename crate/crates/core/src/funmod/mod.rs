//! Truncated FI-modules and VIC(R)-modules, their shifts and derivatives, and polynomiality.

pub mod fi;
pub mod unipotent;
pub mod vic;

pub use fi::{fi_build, fi_map, fi_poly_check, fi_shift_derive, FiKind, FiShiftDerive, TruncatedFIModule};
pub use unipotent::{invariants_power_check, is_unipotent, unipotent_onset, unipotent_scan, PowerCheckReport};
pub use vic::{
    regular_rep, scalar_rep, vic_build, vic_map, vic_poly_check, vic_shift_derive, TruncatedVICModule, VicKind,
    VicMorphism,
};

use serde::Serialize;
use thiserror::Error;

use crate::exactlin::LinError;
use crate::finring::RingError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("module axiom fails: {0}")]
    Axiom(String),
    #[error("level {needed} is required but the module is truncated at {have}")]
    Truncation { needed: usize, have: usize },
    #[error("map is not injective")]
    NotInjective,
    #[error("not a ring homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("characteristic mismatch: ring {ring}, field {field}")]
    Characteristic { ring: usize, field: u64 },
    #[error("[f | C] is not invertible")]
    NotComplementary,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// Outcome of a polynomiality check; only levels up to `verified_up_to` were examined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyVerdict {
    pub holds: bool,
    pub degree: isize,
    pub start: isize,
    pub verified_up_to: usize,
    /// One line per recursion step, outermost first.
    pub trace: Vec<String>,
    pub failure: Option<String>,
}
