//! Homology of a pair of composable maps.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::field::{FieldId, Fp, Q};
use super::smith::invariant_factors;
use super::sparse::{sparse_rank, SparseMatrix};
use super::LinError;

/// Coefficients for a homology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coeff {
    Integers,
    Field(FieldId),
}

/// A finitely generated abelian group (or vector space): free part plus invariant factors > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(r: usize) -> Self {
        HomologyGroup { free_rank: r, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rank of a sparse matrix over a field.
pub fn rank_over(m: &SparseMatrix, field: FieldId) -> Result<usize, LinError> {
    field.validate()?;
    match field {
        FieldId::Rationals => Ok(sparse_rank(&Q, m.rows, m.to_columns(&Q)?)),
        FieldId::PrimeField { p } => {
            let f = Fp::new(p)?;
            Ok(sparse_rank(&f, m.rows, m.to_columns(&f)?))
        }
    }
}

/// `ker d_k / im d_{k+1}` where `d_k: C_k → C_{k-1}` and `d_k1: C_{k+1} → C_k`.
pub fn homology_dims(d_k: &SparseMatrix, d_k1: &SparseMatrix, coeff: Coeff) -> Result<HomologyGroup, LinError> {
    if d_k.cols != d_k1.rows {
        return Err(LinError::Shape { expected: d_k.cols, found: d_k1.rows });
    }
    if !d_k.mul(d_k1).is_zero() {
        return Err(LinError::CompositeNonzero);
    }
    let n = d_k.cols;
    match coeff {
        Coeff::Field(fid) => {
            let r0 = rank_over(d_k, fid)?;
            let r1 = rank_over(d_k1, fid)?;
            Ok(HomologyGroup::free(n - r0 - r1))
        }
        Coeff::Integers => {
            let f0 = invariant_factors(d_k)?;
            let f1 = invariant_factors(d_k1)?;
            let torsion = f1.iter().filter(|x| !x.is_one()).cloned().collect();
            Ok(HomologyGroup { free_rank: n - f0.len() - f1.len(), torsion })
        }
    }
}
