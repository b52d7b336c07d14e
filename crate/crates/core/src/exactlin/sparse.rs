//! Sparse matrices: the exchange type and column-reduction rank over a field.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::dense::Mat;
use super::field::{format_rational, parse_rational, Field};
use super::LinError;

/// Sparse matrix with rational (or integral) entries, no duplicates and no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::from_integer(1.into()));
        }
        m
    }

    /// Builds from triples; duplicates are rejected, zeros dropped.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigRational)>,
    ) -> Result<Self, LinError> {
        let mut m = Self::zero(rows, cols);
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinError::OutOfBounds { row: r, col: c });
            }
            if m.entries.contains_key(&(r, c)) {
                return Err(LinError::DuplicateEntry { row: r, col: c });
            }
            if !v.is_zero() {
                m.entries.insert((r, c), v);
            }
        }
        Ok(m)
    }

    pub fn from_i64_entries(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Result<Self, LinError> {
        Self::from_entries(rows, cols, entries.iter().map(|&(r, c, v)| (r, c, BigRational::from_integer(v.into()))))
    }

    pub fn from_dense_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.entries.insert((i, j), BigRational::from_integer(v.into()));
                }
            }
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(super::field::rational_is_integer)
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    let e = out.entry((i, j)).or_insert_with(BigRational::zero);
                    *e += a * b;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        SparseMatrix { rows: self.rows, cols: other.cols, entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Image in a field; fails if a denominator vanishes there.
    pub fn to_dense<F: Field>(&self, f: &F) -> Result<Mat<F::E>, LinError> {
        let mut m = Mat::filled(self.rows, self.cols, f.zero());
        for (&(r, c), v) in &self.entries {
            m.set(r, c, f.from_rational(v)?);
        }
        Ok(m)
    }

    pub fn from_dense<F: Field>(f: &F, m: &Mat<F::E>) -> Self {
        let mut s = Self::zero(m.rows, m.cols);
        for r in 0..m.rows {
            for c in 0..m.cols {
                let v = m.get(r, c);
                if !f.is_zero(v) {
                    s.entries.insert((r, c), f.to_rational(v));
                }
            }
        }
        s
    }

    /// Columns as sorted (row, value) lists in the field.
    pub fn to_columns<F: Field>(&self, f: &F) -> Result<Vec<SparseVec<F::E>>, LinError> {
        let mut cols: Vec<SparseVec<F::E>> = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            let x = f.from_rational(v)?;
            if !f.is_zero(&x) {
                cols[c].push((r, x));
            }
        }
        for c in &mut cols {
            c.sort_by_key(|e| e.0);
        }
        Ok(cols)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Value)>,
}

impl Serialize for SparseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|(&(r, c), v)| {
                let val = if v.denom() == &1.into() {
                    match i64::try_from(v.numer()) {
                        Ok(i) => Value::from(i),
                        Err(_) => Value::from(format_rational(v)),
                    }
                } else {
                    Value::from(format_rational(v))
                };
                (r, c, val)
            })
            .collect();
        MatrixRecord { rows: self.rows, cols: self.cols, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = MatrixRecord::deserialize(d)?;
        let mut triples = Vec::with_capacity(rec.entries.len());
        for (r, c, v) in rec.entries {
            let q = match v {
                Value::Number(n) => {
                    let i = n.as_i64().ok_or_else(|| D::Error::custom("entry is not an integer"))?;
                    BigRational::from_integer(i.into())
                }
                Value::String(s) => parse_rational(&s).map_err(D::Error::custom)?,
                _ => return Err(D::Error::custom("entry must be an integer or a \"num/den\" string")),
            };
            triples.push((r, c, q));
        }
        SparseMatrix::from_entries(rec.rows, rec.cols, triples).map_err(D::Error::custom)
    }
}

pub type SparseVec<E> = Vec<(usize, E)>;

/// `a + c * b` on sorted sparse vectors.
pub fn axpy<F: Field>(f: &F, a: &SparseVec<F::E>, c: &F::E, b: &SparseVec<F::E>) -> SparseVec<F::E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = f.mul(c, &b[j].1);
            if !f.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of reducing the columns of a sparse matrix.
pub struct ColumnReduction<E> {
    pub rank: usize,
    /// Kernel basis vectors (length = number of columns), when tracking was requested.
    pub kernel: Vec<SparseVec<E>>,
}

/// Column reduction keyed on the last nonzero row of each column.
/// `upper_bound` stops early once the rank provably cannot grow further.
pub fn reduce_columns<F: Field>(
    f: &F,
    nrows: usize,
    cols: Vec<SparseVec<F::E>>,
    track_kernel: bool,
    upper_bound: Option<usize>,
) -> ColumnReduction<F::E> {
    let ncols = cols.len();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; nrows];
    let mut reduced: Vec<SparseVec<F::E>> = Vec::with_capacity(ncols);
    let mut combos: Vec<SparseVec<F::E>> = Vec::new();
    let mut kernel = Vec::new();
    let mut rank = 0;
    let cap = upper_bound.unwrap_or(usize::MAX).min(nrows);
    for (j, mut col) in cols.into_iter().enumerate() {
        if rank == cap && !track_kernel {
            break;
        }
        let mut combo: SparseVec<F::E> = if track_kernel { vec![(j, f.one())] } else { Vec::new() };
        while let Some((low, val)) = col.last().cloned() {
            match pivot_of_row[low] {
                Some(p) => {
                    // Pivot columns are normalized to have 1 at their low row.
                    let c = f.neg(&val);
                    col = axpy(f, &col, &c, &reduced[p]);
                    if track_kernel {
                        combo = axpy(f, &combo, &c, &combos[p]);
                    }
                }
                None => {
                    let inv = f.inv(&val);
                    for e in col.iter_mut() {
                        e.1 = f.mul(&inv, &e.1);
                    }
                    if track_kernel {
                        for e in combo.iter_mut() {
                            e.1 = f.mul(&inv, &e.1);
                        }
                    }
                    pivot_of_row[low] = Some(reduced.len());
                    rank += 1;
                    break;
                }
            }
        }
        if col.is_empty() {
            if track_kernel {
                kernel.push(combo);
            }
            reduced.push(Vec::new());
            if track_kernel {
                combos.push(Vec::new());
            }
        } else {
            reduced.push(col);
            if track_kernel {
                combos.push(combo);
            }
        }
    }
    ColumnReduction { rank, kernel }
}

/// Rank of a matrix given by its columns.
pub fn sparse_rank<F: Field>(f: &F, nrows: usize, cols: Vec<SparseVec<F::E>>) -> usize {
    reduce_columns(f, nrows, cols, false, None).rank
}
