//! Finite rings, unimodular vectors, stable rank, and elementary-matrix algorithms.

pub mod group;
pub mod ops;
pub mod reduce;
pub mod rmat;
pub mod ring;
pub mod unimod;

pub use group::{generate_group, k1_finite, GroupKind, K1Report, MatrixGroup};
pub use ops::{ElemOp, Letter, OpWord};
pub use reduce::{
    partial_basis_frame, reduce_relative, reduce_split, reduce_unimodular, split_frame, Complement, SplitFrame,
    SplitReduction,
};
pub use rmat::RMat;
pub use ring::{
    all_ideals, ideal_quotient, make_ring, make_ring_guarded, quotient_by, Elt, FiniteRing, QuotientRing, RingFile,
    RingSpec, TwoSidedIdeal, DEFAULT_RING_GUARD,
};
pub use unimod::{certify_stable_rank, is_unimodular, SrCertificate, SrVerdict, DEFAULT_VECTOR_GUARD};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("ring axiom fails: {0}")]
    Axiom(String),
    #[error("guard exceeded: {what} (limit {limit})")]
    Guard { what: String, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("vectors are not congruent modulo the ideal")]
    NotCongruent,
    #[error("operation needs a commutative ring")]
    NotCommutative,
}
