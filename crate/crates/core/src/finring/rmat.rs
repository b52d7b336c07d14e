//! Matrices over a finite ring, acting on column vectors from the left.

use super::ring::{Elt, FiniteRing};
use super::unimod::all_vectors;
use super::RingError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u16>,
}

impl RMat {
    pub fn zero(r: &FiniteRing, rows: usize, cols: usize) -> Self {
        RMat { rows, cols, data: vec![r.zero() as u16; rows * cols] }
    }

    pub fn identity(r: &FiniteRing, n: usize) -> Self {
        let mut m = Self::zero(r, n, n);
        for i in 0..n {
            m.set(i, i, r.one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        RMat { rows: r, cols: c, data: rows.iter().flatten().map(|&x| x as u16).collect() }
    }

    /// Matrix with the given columns.
    pub fn from_cols(rows: usize, cols: &[Vec<Elt>]) -> Self {
        let mut data = vec![0u16; rows * cols.len()];
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                data[i * cols.len() + j] = x as u16;
            }
        }
        RMat { rows, cols: cols.len(), data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elt {
        self.data[i * self.cols + j] as Elt
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elt) {
        self.data[i * self.cols + j] = v as u16;
    }

    pub fn col(&self, j: usize) -> Vec<Elt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elt> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn mul(&self, r: &FiniteRing, other: &RMat) -> RMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RMat::zero(r, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = r.zero();
                for k in 0..self.cols {
                    s = r.add(s, r.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn apply(&self, r: &FiniteRing, v: &[Elt]) -> Vec<Elt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(r.zero(), |s, k| r.add(s, r.mul(self.get(i, k), v[k]))))
            .collect()
    }

    /// Row covector times matrix: (π A)_j = Σ_i π_i A_ij.
    pub fn covector_apply(&self, r: &FiniteRing, pi: &[Elt]) -> Vec<Elt> {
        assert_eq!(self.rows, pi.len());
        (0..self.cols)
            .map(|j| (0..self.rows).fold(r.zero(), |s, i| r.add(s, r.mul(pi[i], self.get(i, j)))))
            .collect()
    }

    pub fn is_identity(&self, r: &FiniteRing) -> bool {
        self.rows == self.cols && *self == RMat::identity(r, self.rows)
    }

    /// Block sum with an identity of size k in the lower-right corner.
    pub fn pad_identity(&self, r: &FiniteRing, k: usize) -> RMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = RMat::identity(r, n + k);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise image under a ring map.
    pub fn map_entries(&self, f: impl Fn(Elt) -> Elt) -> RMat {
        RMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x as Elt) as u16).collect() }
    }

    /// Determinant by permutation expansion (commutative rings, small n).
    pub fn det(&self, r: &FiniteRing) -> Elt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = r.zero();
        permute_sum(r, self, &mut perm, 0, true, &mut total);
        total
    }
}

fn permute_sum(r: &FiniteRing, m: &RMat, perm: &mut Vec<usize>, k: usize, even: bool, total: &mut Elt) {
    let n = perm.len();
    if k == n {
        let mut p = r.one();
        for (i, &j) in perm.iter().enumerate() {
            p = r.mul(p, m.get(i, j));
        }
        *total = if even { r.add(*total, p) } else { r.sub(*total, p) };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute_sum(r, m, perm, k + 1, if i == k { even } else { !even }, total);
        perm.swap(k, i);
    }
}

/// Inverse of a square matrix, by tabulating the action on all of R^n.
///
/// A bijective linear endomorphism of a finite free module is invertible, so bijectivity
/// decides invertibility.
pub fn inverse(r: &FiniteRing, m: &RMat, guard: usize) -> Result<Option<RMat>, RingError> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let vecs = all_vectors(r, n, guard)?;
    let mut preimage_of_basis: Vec<Option<Vec<Elt>>> = vec![None; n];
    let mut seen = std::collections::HashSet::new();
    for v in &vecs {
        let w = m.apply(r, v);
        if !seen.insert(w.clone()) {
            return Ok(None);
        }
        for (i, slot) in preimage_of_basis.iter_mut().enumerate() {
            if slot.is_none() && w.iter().enumerate().all(|(k, &x)| x == if k == i { r.one() } else { r.zero() }) {
                *slot = Some(v.clone());
            }
        }
    }
    let cols: Option<Vec<Vec<Elt>>> = preimage_of_basis.into_iter().collect();
    Ok(cols.map(|c| RMat::from_cols(n, &c)))
}

pub fn is_invertible(r: &FiniteRing, m: &RMat, guard: usize) -> Result<bool, RingError> {
    Ok(inverse(r, m, guard)?.is_some())
}
