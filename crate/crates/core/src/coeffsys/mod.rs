//! Coefficient systems on semisimplicial sets: validation, equivariance, twisted chains and
//! homology, polynomiality and the vanishing check.
//!
//! Cells are indexed by level + 1, so cell level 0 holds the (−1)-simplex of an augmented
//! system and cell level L ≥ 1 holds the simplices of dimension L − 1.

pub mod build;
pub mod chain;
pub mod poly;
pub mod validate;

pub use build::{fi_sequence_system, fi_system, vic_system, BuiltSystem};
pub use chain::{
    homology_with_coefficients, les_check, ChainComplex, LesReport, SystemHomology, SystemShortExactSequence,
};
pub use poly::{is_polynomial_system, vanishing_check, SystemPolyVerdict, VanishingReport};
pub use validate::{validate_system, CayleyTable, EquivariantStructure, ValidationFailure, ValidationReport};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::dense::{identity, mul, zeros};
use crate::exactlin::{Field, FieldId, LinError, Mat, SparseMatrix};
use crate::finring::RingError;
use crate::funmod::FunError;
use crate::scomplex::ss::SsFile;
use crate::scomplex::{ScError, SemisimplicialSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("module truncated at {have}, level {needed} is required")]
    Truncation { needed: usize, have: usize },
    #[error("d∘d ≠ 0 in degree {degree}")]
    NotComplex { degree: isize },
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("precondition not verified: {0}")]
    Precondition(String),
    #[error("degree {needed} needs levels beyond the cap {cap}")]
    BeyondCap { needed: usize, cap: usize },
    #[error(transparent)]
    Fun(#[from] FunError),
    #[error(transparent)]
    Sc(#[from] ScError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// A functor from the simplex category of `base` to finite-dimensional vector spaces.
#[derive(Clone, Debug)]
pub struct CoefficientSystem<F: Field> {
    pub field: F,
    pub base: Arc<SemisimplicialSet>,
    pub augmented: bool,
    /// dims[L][s]; dims[0] is `[F(∅)]` when augmented and empty otherwise.
    pub dims: Vec<Vec<usize>>,
    /// faces[L][s][i] : F(σ) → F(d_i σ). Vertices carry one map to F(∅) when augmented.
    pub faces: Vec<Vec<Vec<Mat<F::E>>>>,
}

impl<F: Field> CoefficientSystem<F> {
    /// Checks shapes only; use [`validate_system`] for the functoriality squares.
    pub fn new(
        field: F,
        base: Arc<SemisimplicialSet>,
        augmented: bool,
        dims: Vec<Vec<usize>>,
        faces: Vec<Vec<Vec<Mat<F::E>>>>,
    ) -> Result<Self, CoeffError> {
        let s = CoefficientSystem { field, base, augmented, dims, faces };
        s.check_shapes()?;
        Ok(s)
    }

    fn check_shapes(&self) -> Result<(), CoeffError> {
        let levels = self.base.levels() + 1;
        if self.dims.len() != levels || self.faces.len() != levels {
            return Err(CoeffError::Invalid(format!("expected {levels} cell levels")));
        }
        if self.dims[0].len() != usize::from(self.augmented)
            || self.faces[0].len() != self.dims[0].len()
            || !self.faces[0].iter().all(|f| f.is_empty())
        {
            return Err(CoeffError::Invalid("bad (−1)-level".into()));
        }
        for l in 1..levels {
            let k = l - 1;
            if self.dims[l].len() != self.base.count(k) || self.faces[l].len() != self.base.count(k) {
                return Err(CoeffError::Invalid(format!("level {k} has the wrong number of simplices")));
            }
            for s in 0..self.base.count(k) {
                let want = if k == 0 { usize::from(self.augmented) } else { k + 1 };
                if self.faces[l][s].len() != want {
                    return Err(CoeffError::Invalid(format!("simplex ({k}, {s}) has {} face maps", self.faces[l][s].len())));
                }
                for (i, m) in self.faces[l][s].iter().enumerate() {
                    let t = self.face_target(l, s, i);
                    if m.cols != self.dims[l][s] || m.rows != self.dims[l - 1][t] {
                        return Err(CoeffError::Invalid(format!("face map d_{i} on ({k}, {s}) has the wrong shape")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index (in cell level L−1) of the i-th face of cell (L, s).
    pub fn face_target(&self, l: usize, s: usize, i: usize) -> usize {
        if l == 1 {
            0
        } else {
            self.base.face(l - 1, s, i)
        }
    }

    pub fn cell_levels(&self) -> usize {
        self.dims.len()
    }

    pub fn dim_at(&self, k: isize, s: usize) -> usize {
        self.dims[(k + 1) as usize][s]
    }

    pub fn empty_dim(&self) -> usize {
        self.dims[0].first().copied().unwrap_or(0)
    }

    /// Total dimension of the chain group in degree k.
    pub fn chain_dim(&self, k: isize) -> usize {
        self.dims.get((k + 1) as usize).map_or(0, |l| l.iter().sum())
    }

    /// Constant augmented system with value F^dim and identity face maps.
    pub fn constant(field: F, base: Arc<SemisimplicialSet>, dim: usize) -> Self {
        let levels = base.levels() + 1;
        let id = identity(&field, dim);
        let mut dims = vec![vec![dim]];
        let mut faces = vec![vec![Vec::new()]];
        for l in 1..levels {
            let k = l - 1;
            let n = base.count(k);
            dims.push(vec![dim; n]);
            faces.push(vec![vec![id.clone(); k + 1]; n]);
        }
        CoefficientSystem { field, base, augmented: true, dims, faces }
    }

    pub fn zero(field: F, base: Arc<SemisimplicialSet>) -> Self {
        Self::constant(field, base, 0)
    }

    /// Maps F(σ) → F(∅) along iterated d_0, per cell.
    pub fn to_empty(&self) -> Vec<Vec<Mat<F::E>>> {
        let f = &self.field;
        let mut out: Vec<Vec<Mat<F::E>>> = vec![vec![identity(f, self.empty_dim())]];
        for l in 1..self.cell_levels() {
            let mut lvl = Vec::with_capacity(self.dims[l].len());
            for s in 0..self.dims[l].len() {
                if !self.augmented {
                    lvl.push(zeros(f, 0, self.dims[l][s]));
                    continue;
                }
                let t = self.face_target(l, s, 0);
                lvl.push(mul(f, &out[l - 1][t], &self.faces[l][s][0]));
            }
            out.push(lvl);
        }
        out
    }

    /// Composite F(σ) → F(σ′) deleting the listed positions (any order) of a cell.
    pub fn delete_positions(&self, l: usize, s: usize, positions: &[usize]) -> (usize, usize, Mat<F::E>) {
        let f = &self.field;
        let mut pos = positions.to_vec();
        pos.sort_unstable_by(|a, b| b.cmp(a));
        let (mut l, mut s) = (l, s);
        let mut m = identity(f, self.dims[l][s]);
        for p in pos {
            let t = self.face_target(l, s, p);
            m = mul(f, &self.faces[l][s][p], &m);
            l -= 1;
            s = t;
        }
        (l, s, m)
    }

    pub fn to_file(&self) -> SystemFile {
        let f = &self.field;
        let mut simplices = Vec::new();
        for l in 0..self.cell_levels() {
            for s in 0..self.dims[l].len() {
                simplices.push(SystemValue {
                    level: l as isize - 1,
                    index: s,
                    dim: self.dims[l][s],
                    faces: self.faces[l][s].iter().map(|m| SparseMatrix::from_dense(f, m)).collect(),
                });
            }
        }
        SystemFile { field: f.id(), base: self.base.to_file(), augmented: self.augmented, simplices, phi: None }
    }

    pub fn from_file(field: F, file: &SystemFile) -> Result<Self, CoeffError> {
        if file.field != field.id() {
            return Err(CoeffError::Invalid(format!("system is over {}, not {}", file.field, field.id())));
        }
        let base = Arc::new(SemisimplicialSet::from_file(&file.base)?);
        let levels = base.levels() + 1;
        let mut dims: Vec<Vec<Option<usize>>> =
            (0..levels).map(|l| vec![None; if l == 0 { usize::from(file.augmented) } else { base.count(l - 1) }]).collect();
        let mut faces: Vec<Vec<Vec<Mat<F::E>>>> = dims.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for v in &file.simplices {
            let l = usize::try_from(v.level + 1).map_err(|_| CoeffError::Invalid(format!("level {}", v.level)))?;
            let slot = dims.get_mut(l).and_then(|d| d.get_mut(v.index));
            match slot {
                Some(d @ None) => *d = Some(v.dim),
                _ => return Err(CoeffError::Invalid(format!("simplex ({}, {}) is unknown or repeated", v.level, v.index))),
            }
            faces[l][v.index] = v.faces.iter().map(|m| m.to_dense(&field)).collect::<Result<_, _>>()?;
        }
        let dims = dims
            .into_iter()
            .map(|l| l.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CoeffError::Invalid("missing simplex values".into()))?;
        Self::new(field, base, file.augmented, dims, faces)
    }
}

/// Value record: level −1 is the augmentation simplex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemValue {
    pub level: isize,
    pub index: usize,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<SparseMatrix>,
}

/// Exchange format for systems, with optional per-generator action matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub field: FieldId,
    pub base: SsFile,
    pub augmented: bool,
    pub simplices: Vec<SystemValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<validate::PhiFile>,
}
