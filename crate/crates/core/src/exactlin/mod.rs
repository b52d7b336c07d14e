//! Exact linear algebra over Q, F_p and Z.
//!
//! Everything downstream computes ranks, kernels and homology through this module.

pub mod dense;
pub mod field;
pub mod homology;
pub mod smith;
pub mod sparse;

pub use dense::{Mat, Quotient, Subspace};
pub use field::{Field, FieldId, Fp, Q};
pub use homology::{homology_dims, rank_over, Coeff, HomologyGroup};
pub use smith::{invariant_factors, smith_normal_form, SmithForm};
pub use sparse::SparseMatrix;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large for word arithmetic")]
    ModulusTooLarge(u64),
    #[error("denominator vanishes modulo {0}")]
    DenominatorVanishes(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("entry ({row}, {col}) out of bounds")]
    OutOfBounds { row: usize, col: usize },
    #[error("matrix has non-integral entries")]
    NotIntegral,
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("composite of the two maps is nonzero")]
    CompositeNonzero,
}

/// Rank and a kernel basis (as the columns of a `cols × k` matrix).
pub fn rank_kernel(m: &SparseMatrix, field: FieldId) -> Result<(usize, SparseMatrix), LinError> {
    field.validate()?;
    match field {
        FieldId::Rationals => rank_kernel_in(&Q, m),
        FieldId::PrimeField { p } => rank_kernel_in(&Fp::new(p)?, m),
    }
}

fn rank_kernel_in<F: Field>(f: &F, m: &SparseMatrix) -> Result<(usize, SparseMatrix), LinError> {
    let cols = m.to_columns(f)?;
    let red = sparse::reduce_columns(f, m.rows, cols, true, None);
    let mut entries = Vec::new();
    for (k, v) in red.kernel.iter().enumerate() {
        for (r, x) in v {
            entries.push((*r, k, f.to_rational(x)));
        }
    }
    let ker = SparseMatrix::from_entries(m.cols, red.kernel.len(), entries)?;
    Ok((red.rank, ker))
}
