//! Smith normal form over Z with exact big integers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseMatrix;
use super::LinError;

/// Dense integer matrix, row-major.
pub type IntMat = Vec<Vec<BigInt>>;

/// `U · A · V = D` with unimodular `U`, `V` and `D` diagonal in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// Nonzero diagonal entries d_1 | d_2 | ... .
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn int_identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let m = a.len();
    let k = b.len();
    let n = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        assert_eq!(a[i].len(), k);
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[t][j].is_zero() {
                    out[i][j] += &a[i][t] * &b[t][j];
                }
            }
        }
    }
    out
}

/// Exact determinant by fraction-free elimination (Bareiss).
pub fn int_det(a: &IntMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

pub fn sparse_to_int(a: &SparseMatrix) -> Result<IntMat, LinError> {
    if !a.is_integral() {
        return Err(LinError::NotIntegral);
    }
    let mut m = vec![vec![BigInt::zero(); a.cols]; a.rows];
    for (r, c, v) in a.entries() {
        m[r][c] = v.numer() * v.denom().signum();
    }
    Ok(m)
}

struct Work {
    a: IntMat,
    u: Option<IntMat>,
    v: Option<IntMat>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }
    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        let src = self.a[j].clone();
        for (x, y) in self.a[i].iter_mut().zip(&src) {
            if !y.is_zero() {
                *x += q * y;
            }
        }
        if let Some(u) = &mut self.u {
            let src = u[j].clone();
            for (x, y) in u[i].iter_mut().zip(&src) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        }
    }
    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in &mut self.a {
            if !row[j].is_zero() {
                let t = q * &row[j];
                row[i] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v {
                if !row[j].is_zero() {
                    let t = q * &row[j];
                    row[i] += t;
                }
            }
        }
    }
    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -x.clone();
            }
        }
    }
}

/// Minimal |a_ij| over the trailing block, ties broken by lowest row then column.
fn min_pivot(a: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if x.abs() < a[bi][bj].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

fn run(mut w: Work) -> Work {
    let m = w.a.len();
    let n = w.a.first().map_or(0, |r| r.len());
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_pivot(&w.a, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let piv = w.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&piv);
                    w.add_row(i, t, &-q);
                    if !w.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&piv);
                    w.add_col(j, t, &-q);
                    if !w.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A smaller remainder sits in row t or column t; move the smallest to the pivot.
                let mut best = (t, t);
                for i in t + 1..m {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // Row and column cleared; enforce divisibility of the trailing block.
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&w.a[i][j] % &piv).is_zero()));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    w
}

/// Full Smith normal form with transformation matrices.
pub fn smith_normal_form(a: &SparseMatrix) -> Result<SmithForm, LinError> {
    let ai = sparse_to_int(a)?;
    Ok(smith_dense(&ai))
}

pub fn smith_dense(a: &IntMat) -> SmithForm {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let w = run(Work { a: a.clone(), u: Some(int_identity(m)), v: Some(int_identity(n)) });
    SmithForm { u: w.u.unwrap(), d: w.a, v: w.v.unwrap() }
}

fn dense_diagonal(a: IntMat) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let w = run(Work { a, u: None, v: None });
    (0..m.min(n)).map(|i| w.a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
///
/// Unit pivots are eliminated sparsely first; the leftover block goes through the dense
/// algorithm. The result agrees with the diagonal of `smith_normal_form`.
pub fn invariant_factors(a: &SparseMatrix) -> Result<Vec<BigInt>, LinError> {
    if !a.is_integral() {
        return Err(LinError::NotIntegral);
    }
    let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); a.rows];
    for (r, c, v) in a.entries() {
        rows[r].push((c, v.numer() * v.denom().signum()));
    }
    for r in &mut rows {
        r.sort_by_key(|e| e.0);
    }
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c].insert(i);
        }
    }
    let mut alive_row = vec![true; a.rows];
    let mut alive_col = vec![true; a.cols];
    let mut units = 0usize;
    loop {
        let mut progress = false;
        for c in 0..a.cols {
            if !alive_col[c] {
                continue;
            }
            let pivot = col_rows[c]
                .iter()
                .filter(|&&i| rows[i].iter().any(|(cc, v)| *cc == c && v.abs().is_one()))
                .min_by_key(|&&i| (rows[i].len(), i))
                .copied();
            let Some(p) = pivot else { continue };
            let prow = std::mem::take(&mut rows[p]);
            let pval = prow.iter().find(|e| e.0 == c).unwrap().1.clone();
            for (cc, _) in &prow {
                col_rows[*cc].remove(&p);
            }
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for i in others {
                let val = rows[i].iter().find(|e| e.0 == c).unwrap().1.clone();
                // row_i -= (val / pval) * prow; pval = ±1.
                let q = &val * &pval;
                let old = std::mem::take(&mut rows[i]);
                let new = int_axpy(&old, &-q, &prow);
                for (cc, _) in &old {
                    col_rows[*cc].remove(&i);
                }
                for (cc, _) in &new {
                    col_rows[*cc].insert(i);
                }
                rows[i] = new;
            }
            alive_row[p] = false;
            alive_col[c] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..a.rows).filter(|&i| alive_row[i] && !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..a.cols).filter(|&c| alive_col[c] && !col_rows[c].is_empty()).collect();
    let mut col_pos = vec![usize::MAX; a.cols];
    for (k, &c) in live_cols.iter().enumerate() {
        col_pos[c] = k;
    }
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (k, &i) in live_rows.iter().enumerate() {
        for (c, v) in &rows[i] {
            dense[k][col_pos[*c]] = v.clone();
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(dense_diagonal(dense));
    Ok(out)
}

fn int_axpy(a: &[(usize, BigInt)], q: &BigInt, b: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, q * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + q * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
