//! Subquotients Z/B of coordinate spaces, with chosen representatives.

use super::HomError;
use crate::exactlin::dense::{contains, is_subspace, mul_vec, quotient, rref, solve, Subspace};
use crate::exactlin::{Field, Mat};

#[derive(Clone, Debug)]
pub struct SubQuotient<E> {
    pub dim: usize,
    pub ambient: usize,
    z: Subspace<E>,
    b: Subspace<E>,
    proj: Mat<E>,
    /// Images of the representatives in ambient/B, as columns.
    images: Mat<E>,
    /// Representatives in Z, as columns.
    pub reps: Mat<E>,
}

impl<E: Clone + PartialEq + Default> SubQuotient<E> {
    pub fn new<F: Field<E = E>>(f: &F, z: &Subspace<E>, b: &Subspace<E>) -> Result<Self, HomError> {
        if !is_subspace(f, b, z) {
            return Err(HomError::Invalid("boundaries are not contained in cycles".into()));
        }
        let q = quotient(f, b);
        let zs = z.vectors();
        let all: Vec<Vec<E>> = zs.iter().map(|v| mul_vec(f, &q.proj, v)).collect();
        let (_, pivots) = rref(f, &Mat::from_cols(q.dim, &all));
        let chosen: Vec<Vec<E>> = pivots.iter().map(|&p| zs[p].clone()).collect();
        let imgs: Vec<Vec<E>> = pivots.iter().map(|&p| all[p].clone()).collect();
        let dim = chosen.len();
        Ok(SubQuotient {
            dim,
            ambient: z.ambient,
            z: z.clone(),
            b: b.clone(),
            images: Mat::from_cols(q.dim, &imgs),
            reps: Mat::from_cols(z.ambient, &chosen),
            proj: q.proj,
        })
    }

    /// Coordinates of the class of v ∈ Z; `None` when v ∉ Z.
    pub fn coords<F: Field<E = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        if !contains(f, &self.z, v) {
            return None;
        }
        if self.dim == 0 {
            return Some(Vec::new());
        }
        solve(f, &self.images, &mul_vec(f, &self.proj, v))
    }

    /// Matrix of the map Z/B → Z'/B' induced by t, or `None` if t does not carry Z into Z'
    /// and B into B'.
    pub fn induced<F: Field<E = E>>(&self, f: &F, t: &Mat<E>, target: &SubQuotient<E>) -> Option<Mat<E>> {
        for v in self.b.vectors() {
            if target.coords(f, &mul_vec(f, t, &v))?.iter().any(|x| !f.is_zero(x)) {
                return None;
            }
        }
        let mut cols = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            cols.push(target.coords(f, &mul_vec(f, t, &self.reps.col(j)))?);
        }
        Some(Mat::from_cols(target.dim, &cols))
    }
}

/// Span of sparse columns, reduced sparsely before the dense echelon step.
pub(crate) fn sparse_span<F: Field<E = E>, E: Clone + PartialEq + Default>(
    f: &F,
    nrows: usize,
    cols: Vec<crate::exactlin::sparse::SparseVec<E>>,
) -> Subspace<E> {
    use crate::exactlin::sparse::axpy;
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; nrows];
    let mut kept: Vec<crate::exactlin::sparse::SparseVec<E>> = Vec::new();
    for mut col in cols {
        if kept.len() == nrows {
            break;
        }
        while let Some((low, val)) = col.last().cloned() {
            match pivot_of_row[low] {
                Some(p) => col = axpy(f, &col, &f.neg(&val), &kept[p]),
                None => {
                    let inv = f.inv(&val);
                    for e in col.iter_mut() {
                        e.1 = f.mul(&inv, &e.1);
                    }
                    pivot_of_row[low] = Some(kept.len());
                    kept.push(col);
                    break;
                }
            }
        }
    }
    let dense: Vec<Vec<E>> = kept
        .iter()
        .map(|c| {
            let mut v = vec![f.zero(); nrows];
            for (r, x) in c {
                v[*r] = x.clone();
            }
            v
        })
        .collect();
    crate::exactlin::dense::span(f, nrows, &dense)
}
