//! Elementary operations and words in them.

use serde::{Deserialize, Serialize};

use super::rmat::RMat;
use super::ring::{Elt, FiniteRing, TwoSidedIdeal};
use super::RingError;

/// Adds `r` times entry `i` to entry `j` (1-based): the matrix I + r·E_{j,i}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElemOp {
    pub i: usize,
    pub j: usize,
    pub r: Elt,
}

impl ElemOp {
    pub fn new(i: usize, j: usize, r: Elt) -> Result<Self, RingError> {
        if i == j || i == 0 || j == 0 {
            return Err(RingError::Invalid(format!("elementary op needs distinct 1-based indices, got ({i}, {j})")));
        }
        Ok(ElemOp { i, j, r })
    }

    pub fn matrix(&self, ring: &FiniteRing, n: usize, inverse: bool) -> RMat {
        let mut m = RMat::identity(ring, n);
        let r = if inverse { ring.neg(self.r) } else { self.r };
        m.set(self.j - 1, self.i - 1, r);
        m
    }
}

/// One letter of a word: the op, whether its inverse is applied, and whether r lies in the tagged ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub op: ElemOp,
    pub inverse: bool,
    pub in_ideal: bool,
}

/// A sequence of elementary operations applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpWord {
    pub n: usize,
    pub letters: Vec<Letter>,
}

impl OpWord {
    pub fn empty(n: usize) -> Self {
        OpWord { n, letters: Vec::new() }
    }

    pub fn push(&mut self, ring: &FiniteRing, i: usize, j: usize, r: Elt, ideal: Option<&TwoSidedIdeal>) {
        if r == ring.zero() {
            return;
        }
        let op = ElemOp::new(i, j, r).expect("indices checked by caller");
        let in_ideal = ideal.is_some_and(|q| q.contains(r));
        self.letters.push(Letter { op, inverse: false, in_ideal });
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn extend(&mut self, other: &OpWord) {
        assert_eq!(self.n, other.n);
        self.letters.extend_from_slice(&other.letters);
    }

    /// Word for the inverse matrix.
    pub fn inverse(&self) -> OpWord {
        OpWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| Letter { inverse: !l.inverse, ..*l }).collect(),
        }
    }

    /// Recomputes ideal tags against `q`.
    pub fn retag(&mut self, q: &TwoSidedIdeal) {
        for l in &mut self.letters {
            l.in_ideal = q.contains(l.op.r);
        }
    }

    pub fn replay(&self, ring: &FiniteRing, v: &[Elt]) -> Vec<Elt> {
        assert_eq!(v.len(), self.n);
        let mut w = v.to_vec();
        for l in &self.letters {
            let r = if l.inverse { ring.neg(l.op.r) } else { l.op.r };
            let (i, j) = (l.op.i - 1, l.op.j - 1);
            w[j] = ring.add(w[j], ring.mul(r, w[i]));
        }
        w
    }

    /// Product matrix E_k ··· E_1 (first letter applied first).
    pub fn matrix(&self, ring: &FiniteRing) -> RMat {
        let mut m = RMat::identity(ring, self.n);
        for l in &self.letters {
            m = l.op.matrix(ring, self.n, l.inverse).mul(ring, &m);
        }
        m
    }

    /// Exchange format: list of [i, j, element, inverse-flag, ideal-tag].
    pub fn to_records(&self) -> Vec<(usize, usize, Elt, bool, bool)> {
        self.letters.iter().map(|l| (l.op.i, l.op.j, l.op.r, l.inverse, l.in_ideal)).collect()
    }

    pub fn from_records(n: usize, recs: &[(usize, usize, Elt, bool, bool)]) -> Result<Self, RingError> {
        let mut letters = Vec::with_capacity(recs.len());
        for &(i, j, r, inverse, in_ideal) in recs {
            if i > n || j > n {
                return Err(RingError::Invalid(format!("index out of range for n = {n}")));
            }
            letters.push(Letter { op: ElemOp::new(i, j, r)?, inverse, in_ideal });
        }
        Ok(OpWord { n, letters })
    }
}
