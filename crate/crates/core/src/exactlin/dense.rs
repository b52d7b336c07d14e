//! Dense matrices over a field and row-space subspace arithmetic.

use super::field::Field;

/// Row-major dense matrix. Vectors act as columns: `A * x` has length `rows`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Mat { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Mat { rows: r, cols, data }
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<E>]) -> Self
    where
        E: Default,
    {
        let mut m = Mat { rows, cols: cols.len(), data: vec![E::default(); rows * cols.len()] };
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        let cols = self.cols;
        self.data[r * cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            for &c in idx {
                data.push(self.get(r, c).clone());
            }
        }
        Mat { rows: self.rows, cols: idx.len(), data }
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Mat<F::E> {
    Mat::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::E> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn is_zero_mat<F: Field>(f: &F, a: &Mat<F::E>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

pub fn is_identity<F: Field>(f: &F, a: &Mat<F::E>) -> bool {
    a.rows == a.cols && *a == identity(f, a.rows)
}

pub fn mul<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            let brow = b.row(k);
            let base = i * out.cols;
            for (j, bkj) in brow.iter().enumerate() {
                if !f.is_zero(bkj) {
                    let t = f.mul(aik, bkj);
                    out.data[base + j] = f.add(&out.data[base + j], &t);
                }
            }
        }
    }
    out
}

pub fn mul_vec<F: Field>(f: &F, a: &Mat<F::E>, x: &[F::E]) -> Vec<F::E> {
    assert_eq!(a.cols, x.len());
    (0..a.rows)
        .map(|i| {
            let mut s = f.zero();
            for (aij, xj) in a.row(i).iter().zip(x) {
                if !f.is_zero(aij) && !f.is_zero(xj) {
                    s = f.add(&s, &f.mul(aij, xj));
                }
            }
            s
        })
        .collect()
}

pub fn add<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    assert!(a.rows == b.rows && a.cols == b.cols);
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect() }
}

pub fn sub<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    assert!(a.rows == b.rows && a.cols == b.cols);
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect() }
}

pub fn scale<F: Field>(f: &F, c: &F::E, a: &Mat<F::E>) -> Mat<F::E> {
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().map(|x| f.mul(c, x)).collect() }
}

pub fn pow<F: Field>(f: &F, a: &Mat<F::E>, mut e: u64) -> Mat<F::E> {
    assert_eq!(a.rows, a.cols);
    let mut base = a.clone();
    let mut r = identity(f, a.rows);
    while e > 0 {
        if e & 1 == 1 {
            r = mul(f, &r, &base);
        }
        base = mul(f, &base, &base);
        e >>= 1;
    }
    r
}

/// Kronecker product `a ⊗ b`, with index (i, j) ↦ i * dim(b) + j.
pub fn kron<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    let mut out = zeros(f, a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.get(i, j);
            if f.is_zero(aij) {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    let v = f.mul(aij, b.get(k, l));
                    out.set(i * b.rows + k, j * b.cols + l, v);
                }
            }
        }
    }
    out
}

/// Block-diagonal sum.
pub fn direct_sum<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    let mut out = zeros(f, a.rows + b.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
        }
    }
    out
}

pub fn hstack<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    assert_eq!(a.rows, b.rows);
    let mut out = zeros(f, a.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
        for j in 0..b.cols {
            out.set(i, a.cols + j, b.get(i, j).clone());
        }
    }
    out
}

pub fn vstack<F: Field>(a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    assert_eq!(a.cols, b.cols);
    let mut data = a.data.clone();
    data.extend_from_slice(&b.data);
    Mat { rows: a.rows + b.rows, cols: a.cols, data }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref_in_place<F: Field>(f: &F, m: &mut Mat<F::E>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let cols = m.cols;
    for c in 0..cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.get(r, c));
        for j in c..cols {
            let v = f.mul(&inv, m.get(r, j));
            m.set(r, j, v);
        }
        let pivot_row: Vec<F::E> = m.row(r)[c..].to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for (off, pv) in pivot_row.iter().enumerate() {
                if !f.is_zero(pv) {
                    let j = c + off;
                    let v = f.sub(m.get(i, j), &f.mul(&factor, pv));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref<F: Field>(f: &F, m: &Mat<F::E>) -> (Mat<F::E>, Vec<usize>) {
    let mut a = m.clone();
    let p = rref_in_place(f, &mut a);
    (a, p)
}

pub fn rank<F: Field>(f: &F, m: &Mat<F::E>) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // Eliminate on the shorter side.
    if m.rows > m.cols {
        rref(f, &m.transpose()).1.len()
    } else {
        rref(f, m).1.len()
    }
}

/// Basis of the null space {x : m x = 0}, as a list of vectors.
pub fn kernel<F: Field>(f: &F, m: &Mat<F::E>) -> Vec<Vec<F::E>> {
    let (r, pivots) = rref(f, m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(r.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse<F: Field>(f: &F, m: &Mat<F::E>) -> Option<Mat<F::E>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let aug = hstack(f, m, &identity(f, n));
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    let idx: Vec<usize> = (n..2 * n).collect();
    Some(r.select_cols(&idx))
}

/// Some solution x of m x = b, if any.
pub fn solve<F: Field>(f: &F, m: &Mat<F::E>, b: &[F::E]) -> Option<Vec<F::E>> {
    assert_eq!(m.rows, b.len());
    let bm = Mat { rows: b.len(), cols: 1, data: b.to_vec() };
    let aug = hstack(f, m, &bm);
    let (r, pivots) = rref(f, &aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols).clone();
    }
    Some(x)
}

/// A subspace of F^ambient, stored as an RREF row basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<E> {
    pub ambient: usize,
    pub basis: Mat<E>,
    pivots: Vec<usize>,
}

impl<E: Clone> Subspace<E> {
    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn vectors(&self) -> Vec<Vec<E>> {
        self.basis.row_vecs()
    }
}

pub fn span<F: Field>(f: &F, ambient: usize, vectors: &[Vec<F::E>]) -> Subspace<F::E> {
    let m = Mat::from_rows(ambient, vectors.to_vec());
    let (r, pivots) = rref(f, &m);
    let idx: Vec<usize> = (0..pivots.len()).collect();
    Subspace { ambient, basis: r.select_rows(&idx), pivots }
}

pub fn zero_space<F: Field>(f: &F, ambient: usize) -> Subspace<F::E> {
    span(f, ambient, &[])
}

pub fn whole_space<F: Field>(f: &F, ambient: usize) -> Subspace<F::E> {
    let id = identity(f, ambient);
    Subspace { ambient, basis: id, pivots: (0..ambient).collect() }
}

/// Column space of a matrix.
pub fn column_space<F: Field>(f: &F, m: &Mat<F::E>) -> Subspace<F::E> {
    span(f, m.rows, &m.col_vecs())
}

pub fn kernel_space<F: Field>(f: &F, m: &Mat<F::E>) -> Subspace<F::E> {
    span(f, m.cols, &kernel(f, m))
}

pub fn sum_spaces<F: Field>(f: &F, a: &Subspace<F::E>, b: &Subspace<F::E>) -> Subspace<F::E> {
    assert_eq!(a.ambient, b.ambient);
    let mut v = a.vectors();
    v.extend(b.vectors());
    span(f, a.ambient, &v)
}

/// Reduce a vector modulo the subspace; zero result means membership.
pub fn reduce<F: Field>(f: &F, s: &Subspace<F::E>, v: &[F::E]) -> Vec<F::E> {
    let mut w = v.to_vec();
    for (i, &p) in s.pivots.iter().enumerate() {
        if !f.is_zero(&w[p]) {
            let c = w[p].clone();
            for (j, bj) in s.basis.row(i).iter().enumerate() {
                if !f.is_zero(bj) {
                    w[j] = f.sub(&w[j], &f.mul(&c, bj));
                }
            }
        }
    }
    w
}

pub fn contains<F: Field>(f: &F, s: &Subspace<F::E>, v: &[F::E]) -> bool {
    reduce(f, s, v).iter().all(|x| f.is_zero(x))
}

pub fn is_subspace<F: Field>(f: &F, a: &Subspace<F::E>, b: &Subspace<F::E>) -> bool {
    a.vectors().iter().all(|v| contains(f, b, v))
}

pub fn same_space<F: Field>(f: &F, a: &Subspace<F::E>, b: &Subspace<F::E>) -> bool {
    a.dim() == b.dim() && is_subspace(f, a, b)
}

/// Annihilator matrix: rows y with y · v = 0 for all v in s.
pub fn annihilator<F: Field>(f: &F, s: &Subspace<F::E>) -> Mat<F::E> {
    let k = kernel(f, &s.basis);
    Mat::from_rows(s.ambient, k)
}

pub fn intersect<F: Field>(f: &F, a: &Subspace<F::E>, b: &Subspace<F::E>) -> Subspace<F::E> {
    assert_eq!(a.ambient, b.ambient);
    if a.dim() == 0 || b.dim() == 0 {
        return zero_space(f, a.ambient);
    }
    let ann = annihilator(f, b);
    // x = c^T A with ann x = 0.
    let at = a.basis.transpose();
    let cond = mul(f, &ann, &at);
    let coeffs = kernel(f, &cond);
    let vecs: Vec<Vec<F::E>> = coeffs.iter().map(|c| mul_vec(f, &at, c)).collect();
    span(f, a.ambient, &vecs)
}

/// Image of a subspace under the map `t` (vectors as columns).
pub fn image<F: Field>(f: &F, t: &Mat<F::E>, s: &Subspace<F::E>) -> Subspace<F::E> {
    assert_eq!(t.cols, s.ambient);
    let vecs: Vec<Vec<F::E>> = s.vectors().iter().map(|v| mul_vec(f, t, v)).collect();
    span(f, t.rows, &vecs)
}

/// {x : t x ∈ s}.
pub fn preimage<F: Field>(f: &F, t: &Mat<F::E>, s: &Subspace<F::E>) -> Subspace<F::E> {
    assert_eq!(t.rows, s.ambient);
    let ann = annihilator(f, s);
    if ann.rows == 0 {
        return whole_space(f, t.cols);
    }
    kernel_space(f, &mul(f, &ann, t))
}

/// Quotient data for `ambient / sub`: a projection matrix P (q × ambient) with kernel `sub`
/// and a section S (ambient × q) with P S = I.
#[derive(Clone, Debug)]
pub struct Quotient<E> {
    pub dim: usize,
    pub proj: Mat<E>,
    pub section: Mat<E>,
}

pub fn quotient<F: Field>(f: &F, sub: &Subspace<F::E>) -> Quotient<F::E> {
    let n = sub.ambient;
    let mut is_pivot = vec![false; n];
    for &p in &sub.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let q = free.len();
    // Coordinates on free positions after reducing modulo `sub`.
    let mut proj = zeros(f, q, n);
    for j in 0..n {
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        let r = reduce(f, sub, &e);
        for (k, &c) in free.iter().enumerate() {
            proj.set(k, j, r[c].clone());
        }
    }
    let mut section = zeros(f, n, q);
    for (k, &c) in free.iter().enumerate() {
        section.set(c, k, f.one());
    }
    Quotient { dim: q, proj, section }
}

/// Matrix of the map induced by `t: V → W` on `V/a → W/b`, given quotient data.
pub fn induced_on_quotients<F: Field>(
    f: &F,
    t: &Mat<F::E>,
    qa: &Quotient<F::E>,
    qb: &Quotient<F::E>,
) -> Mat<F::E> {
    mul(f, &qb.proj, &mul(f, t, &qa.section))
}
