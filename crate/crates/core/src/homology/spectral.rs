//! The double complex C̃_p(X; F) ⊗ k[Ḡ]^{⊗q} of an equivariant system and the spectral
//! sequence of its filtration by p.
//!
//! The total differential is d_h + (−1)^p d_v. With bar groups up to q = depth, the total
//! complex is exact in degrees n ≤ depth − 1, so pages are computed for p + q ≤ depth − 2.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::bar::{bar_boundary, bar_dim, bar_dims, inverse_action};
use super::group::FiniteGroupRep;
use super::machine::{stabilizer_system, GroupOnSystem};
use super::sq::{sparse_span, SubQuotient};
use super::{bar_homology, HomError};
use crate::coeffsys::chain::{homology_with_coefficients, ChainComplex};
use crate::exactlin::dense::{kernel, kernel_space, rank, span, sum_spaces, zeros, Subspace};
use crate::exactlin::sparse::SparseVec;
use crate::exactlin::{Field, Mat};

/// Bytes charged per stored sparse entry.
const ENTRY_BYTES: usize = 24;

/// C_{p,q} for −1 ≤ p ≤ p_max, 0 ≤ q ≤ q_max; index P = p + 1.
#[derive(Clone, Debug)]
pub struct DoubleComplex<F: Field> {
    pub field: F,
    /// dims[P][q].
    pub dims: Vec<Vec<usize>>,
    /// dh[P][q] : C_{p,q} → C_{p−1,q}; empty for P = 0.
    pub dh: Vec<Vec<Vec<SparseVec<F::E>>>>,
    /// dv[P][q] : C_{p,q} → C_{p,q−1}; empty for q = 0.
    pub dv: Vec<Vec<Vec<SparseVec<F::E>>>>,
}

fn apply<F: Field>(f: &F, cols: &[SparseVec<F::E>], v: &SparseVec<F::E>) -> SparseVec<F::E> {
    let mut acc: BTreeMap<usize, F::E> = BTreeMap::new();
    for (j, x) in v {
        for (r, y) in &cols[*j] {
            let e = acc.entry(*r).or_insert_with(|| f.zero());
            *e = f.add(e, &f.mul(x, y));
        }
    }
    acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
}

fn unit<E>(j: usize, one: E) -> SparseVec<E> {
    vec![(j, one)]
}

impl<F: Field> DoubleComplex<F> {
    /// Bar chains of G with coefficients in each G-module C̃_p(X; F), up to q = depth.
    pub fn from_action(ctx: &GroupOnSystem<'_, F>, depth: usize, guard_bytes: usize) -> Result<Self, HomError> {
        let sys = ctx.system;
        let f = &sys.field;
        let chain = ChainComplex::from_system(sys);
        let o = ctx.order();
        let levels = sys.cell_levels();
        let mut entries: usize = 0;
        for l in 0..levels {
            for q in 0..=depth {
                let d = bar_dim(chain.dims[l], o, q).ok_or_else(|| HomError::Guard("bar dimension overflows".into()))?;
                entries = entries.saturating_add(d.saturating_mul(q + 2 + chain.dims[l].min(8)));
            }
        }
        let cost = entries.saturating_mul(ENTRY_BYTES);
        if cost > guard_bytes {
            return Err(HomError::Guard(format!("double complex needs about {cost} bytes, guard is {guard_bytes}")));
        }
        let mut dims = Vec::with_capacity(levels);
        let mut dh = Vec::with_capacity(levels);
        let mut dv = Vec::with_capacity(levels);
        for l in 0..levels {
            let dim = chain.dims[l];
            // Block action of each element on C̃_{L−1}.
            let mats: Vec<Mat<F::E>> = (0..o)
                .map(|x| {
                    let mut m = zeros(f, dim, dim);
                    for s in 0..sys.dims[l].len() {
                        let t = ctx.act(x, l, s);
                        let phi = ctx.phi(x, l, s);
                        let (r0, c0) = (chain.offsets[l][t], chain.offsets[l][s]);
                        for i in 0..phi.rows {
                            for j in 0..phi.cols {
                                let v = phi.get(i, j);
                                if !f.is_zero(v) {
                                    m.set(r0 + i, c0 + j, v.clone());
                                }
                            }
                        }
                    }
                    m
                })
                .collect();
            let act = inverse_action(f, &ctx.group, &mats);
            dims.push((0..=depth).map(|q| bar_dim(dim, o, q).unwrap()).collect::<Vec<_>>());
            dv.push((0..=depth).map(|q| if q == 0 { Vec::new() } else { bar_boundary(f, &ctx.group, &act, dim, q) }).collect());
            let mut hl = Vec::with_capacity(depth + 1);
            for q in 0..=depth {
                if l == 0 {
                    hl.push(Vec::new());
                    continue;
                }
                let below = chain.dims[l - 1];
                let n = bar_dim(dim, o, q).unwrap();
                let cols: Vec<SparseVec<F::E>> = (0..n)
                    .map(|c| {
                        let (i, code) = (c % dim, c / dim);
                        chain.boundary[l][i].iter().map(|(r, v)| (code * below + r, v.clone())).collect()
                    })
                    .collect();
                hl.push(cols);
            }
            dh.push(hl);
        }
        let dc = DoubleComplex { field: f.clone(), dims, dh, dv };
        dc.verify()?;
        Ok(dc)
    }

    pub fn columns(&self) -> usize {
        self.dims.len()
    }

    pub fn q_max(&self) -> usize {
        self.dims.first().map_or(0, |d| d.len() - 1)
    }

    /// d_h² = 0, d_v² = 0 and d_h d_v = d_v d_h.
    pub fn verify(&self) -> Result<(), HomError> {
        let f = &self.field;
        let qm = self.q_max();
        for l in 0..self.columns() {
            for q in 0..=qm {
                for c in 0..self.dims[l][q] {
                    let e = unit(c, f.one());
                    if l >= 2 && !apply(f, &self.dh[l - 1][q], &apply(f, &self.dh[l][q], &e)).is_empty() {
                        return Err(HomError::Internal(format!("d_h² ≠ 0 at ({}, {q})", l as isize - 1)));
                    }
                    if q >= 2 && !apply(f, &self.dv[l][q - 1], &apply(f, &self.dv[l][q], &e)).is_empty() {
                        return Err(HomError::Internal(format!("d_v² ≠ 0 at ({}, {q})", l as isize - 1)));
                    }
                    if l >= 1 && q >= 1 {
                        let a = apply(f, &self.dh[l][q - 1], &apply(f, &self.dv[l][q], &e));
                        let b = apply(f, &self.dv[l - 1][q], &apply(f, &self.dh[l][q], &e));
                        if a != b {
                            return Err(HomError::Internal(format!("d_h d_v ≠ d_v d_h at ({}, {q})", l as isize - 1)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Blocks (P, q, offset) of Tot_n in increasing P, and their total size.
    fn total(&self, n: isize) -> (Vec<(usize, usize, usize)>, usize) {
        let mut blocks = Vec::new();
        let mut off = 0;
        for l in 0..self.columns() {
            let q = n - (l as isize - 1);
            if q < 0 || q > self.q_max() as isize {
                continue;
            }
            let q = q as usize;
            blocks.push((l, q, off));
            off += self.dims[l][q];
        }
        (blocks, off)
    }

    /// Dimension of F_p Tot_n.
    fn filtered_dim(&self, n: isize, p: isize) -> usize {
        let (blocks, _) = self.total(n);
        blocks.iter().filter(|b| b.0 as isize - 1 <= p).map(|b| self.dims[b.0][b.1]).sum()
    }

    /// Columns of D : Tot_n → Tot_{n−1}.
    fn total_differential(&self, n: isize) -> Vec<SparseVec<F::E>> {
        let f = &self.field;
        let (src, _) = self.total(n);
        let (dst, _) = self.total(n - 1);
        let at: HashMap<(usize, usize), usize> = dst.iter().map(|&(l, q, o)| ((l, q), o)).collect();
        let mut cols = Vec::new();
        for &(l, q, _) in &src {
            let neg = (l as isize - 1).rem_euclid(2) == 1;
            for c in 0..self.dims[l][q] {
                let mut acc: BTreeMap<usize, F::E> = BTreeMap::new();
                if l >= 1 {
                    if let Some(&o) = at.get(&(l - 1, q)) {
                        for (r, v) in &self.dh[l][q][c] {
                            acc.insert(o + r, v.clone());
                        }
                    }
                }
                if q >= 1 {
                    if let Some(&o) = at.get(&(l, q - 1)) {
                        for (r, v) in &self.dv[l][q][c] {
                            let v = if neg { f.neg(v) } else { v.clone() };
                            let e = acc.entry(o + r).or_insert_with(|| f.zero());
                            *e = f.add(e, &v);
                        }
                    }
                }
                cols.push(acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect());
            }
        }
        cols
    }
}

fn dense<F: Field>(f: &F, rows: usize, cols: &[SparseVec<F::E>]) -> Mat<F::E> {
    let mut m = zeros(f, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (r, v) in c {
            m.set(*r, j, v.clone());
        }
    }
    m
}

/// s ∩ (first `prefix` coordinates).
fn restrict_prefix<F: Field>(f: &F, s: &Subspace<F::E>, prefix: usize) -> Subspace<F::E> {
    let n = s.ambient;
    if prefix >= n {
        return s.clone();
    }
    let vecs = s.vectors();
    // Combinations c with Σ c_i v_i vanishing past the prefix.
    let tail = Mat::from_cols(n - prefix, &vecs.iter().map(|v| v[prefix..].to_vec()).collect::<Vec<_>>());
    let combos = kernel(f, &tail);
    let out: Vec<Vec<F::E>> = combos
        .iter()
        .map(|c| {
            let mut w = vec![f.zero(); n];
            for (ci, v) in c.iter().zip(&vecs) {
                if f.is_zero(ci) {
                    continue;
                }
                for (wj, vj) in w.iter_mut().zip(v) {
                    *wj = f.add(wj, &f.mul(ci, vj));
                }
            }
            w
        })
        .collect();
    span(f, n, &out)
}

/// Differential d^r out of one position, with its matrix.
#[derive(Clone, Debug)]
pub struct PageDifferential<E> {
    pub from: (isize, isize),
    pub to: (isize, isize),
    pub matrix: Mat<E>,
}

#[derive(Clone, Debug)]
pub struct Page<E> {
    pub r: usize,
    /// dims[(p, q)].
    pub dims: BTreeMap<(isize, isize), usize>,
    pub differentials: Vec<PageDifferential<E>>,
}

#[derive(Clone, Debug)]
pub struct SpectralPages<E> {
    /// Pages hold every (p, q) with p + q ≤ window.
    pub window: isize,
    pub pages: Vec<Page<E>>,
    pub infinity: BTreeMap<(isize, isize), usize>,
    /// E^1 from column homology, valid for q ≤ depth − 1: e1_columns[p + 1][q].
    pub e1_columns: Vec<Vec<usize>>,
    /// dim H_n(Tot) for −1 ≤ n ≤ window.
    pub total_homology: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub depth: usize,
    pub window: isize,
    /// dim E^r_{p,q} = dim E^{r−1} − rank(out) − rank(in), for every computed page.
    pub pages_consistent: bool,
    pub converged: bool,
    /// Σ_p E^∞_{p, n−p} = dim H_n(Tot).
    pub total_matches: bool,
    /// Column E^1 equals ⊕ over orbits of H_q(G_σ; F(σ)) for q ≤ depth − 1, and agrees
    /// with the filtration page inside the window.
    pub e1_matches: bool,
    /// E^2 rows q = 0, 1 equal the homology of the stabilizer systems inside the window.
    pub e2_matches: bool,
    /// d^1 on the q = 0 row is the boundary of the H_0 stabilizer system, signs included.
    pub row0_differential_matches: bool,
    /// (r, holds): RH_k(X; F) = 0 for −1 ≤ k ≤ r was verified and E^∞ vanishes for
    /// p + q ≤ min(r, window).
    pub vanishing: Option<(isize, bool)>,
    pub dims: Vec<SpectralDims>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralDims {
    /// Page number; 0 stands for E^∞.
    pub r: usize,
    pub p: isize,
    pub q: isize,
    pub dim: usize,
}

struct Pager<'a, F: Field> {
    dc: &'a DoubleComplex<F>,
    diffs: HashMap<isize, Vec<SparseVec<F::E>>>,
    dense_diffs: HashMap<isize, Mat<F::E>>,
    z: HashMap<(isize, isize, isize), Subspace<F::E>>,
    images: HashMap<(isize, isize), Subspace<F::E>>,
}

/// r = usize::MAX stands for ∞.
const INF: usize = usize::MAX;

impl<F: Field> Pager<'_, F> {
    fn f(&self) -> &F {
        &self.dc.field
    }

    fn dim(&self, n: isize) -> usize {
        self.dc.total(n).1
    }

    fn fdim(&self, n: isize, p: isize) -> usize {
        self.dc.filtered_dim(n, p)
    }

    fn diff(&mut self, n: isize) -> &Vec<SparseVec<F::E>> {
        if !self.diffs.contains_key(&n) {
            let d = self.dc.total_differential(n);
            self.diffs.insert(n, d);
        }
        &self.diffs[&n]
    }

    fn dense_diff(&mut self, n: isize) -> Mat<F::E> {
        if !self.dense_diffs.contains_key(&n) {
            let rows = self.dim(n - 1);
            let d = dense(&self.dc.field, rows, &self.diff(n).clone());
            self.dense_diffs.insert(n, d);
        }
        self.dense_diffs[&n].clone()
    }

    fn lower(p: isize, r: usize) -> isize {
        if r == INF {
            -2
        } else {
            (p - r as isize).max(-2)
        }
    }

    /// Z^r_{p,n} = {x ∈ F_p Tot_n : D x ∈ F_{p−r} Tot_{n−1}}.
    fn z(&mut self, r: usize, p: isize, n: isize) -> Subspace<F::E> {
        let low = Self::lower(p, r);
        let key = (n, p, low);
        if let Some(s) = self.z.get(&key) {
            return s.clone();
        }
        let ambient = self.dim(n);
        let fp = self.fdim(n, p);
        let keep_from = self.fdim(n - 1, low);
        let rows = self.dim(n - 1);
        let d = self.dense_diff(n);
        let f = self.f().clone();
        let idx_r: Vec<usize> = (keep_from..rows).collect();
        let idx_c: Vec<usize> = (0..fp).collect();
        let m = d.select_rows(&idx_r).select_cols(&idx_c);
        let k = kernel_space(&f, &m);
        let vecs: Vec<Vec<F::E>> = k
            .vectors()
            .into_iter()
            .map(|mut v| {
                v.resize(ambient, f.zero());
                v
            })
            .collect();
        let s = span(&f, ambient, &vecs);
        self.z.insert(key, s.clone());
        s
    }

    /// D(F_top Tot_{n+1}) ∩ F_p Tot_n.
    fn image(&mut self, top: isize, p: isize, n: isize) -> Subspace<F::E> {
        let key = (n, top);
        if !self.images.contains_key(&key) {
            let rows = self.dim(n);
            let upto = self.fdim(n + 1, top);
            let cols: Vec<SparseVec<F::E>> = self.diff(n + 1)[..upto].to_vec();
            let s = sparse_span(&self.dc.field, rows, cols);
            self.images.insert(key, s);
        }
        let fp = self.fdim(n, p);
        restrict_prefix(self.f(), &self.images[&key], fp)
    }

    /// B^r_{p,n} = Z^{r−1}_{p−1,n} + D(Z^{r−1}_{p+r−1,n+1}).
    fn b(&mut self, r: usize, p: isize, n: isize) -> Subspace<F::E> {
        let f = self.f().clone();
        let (prev, top) = if r == INF { (INF, isize::MAX / 2) } else { (r - 1, p + r as isize - 1) };
        let a = self.z(prev, p - 1, n);
        let top = top.min(self.dc.columns() as isize);
        let b = self.image(top, p, n);
        sum_spaces(&f, &a, &b)
    }

    fn page(&mut self, r: usize, p: isize, n: isize) -> Result<SubQuotient<F::E>, HomError> {
        let z = self.z(r, p, n);
        let b = self.b(r, p, n);
        SubQuotient::new(self.f(), &z, &b)
    }

    /// Rank of d^r arriving at (p, n), from D(Z^r_{p+r,n+1}) modulo B^r_{p,n}.
    fn rank_in(&mut self, r: usize, p: isize, n: isize) -> usize {
        let f = self.f().clone();
        let b = self.b(r, p, n);
        let top = (p + r as isize).min(self.dc.columns() as isize);
        let img = self.image(top, p, n);
        sum_spaces(&f, &img, &b).dim() - b.dim()
    }
}

/// Pages E^1..E^pages (at least until the sequence degenerates) and E^∞ of the filtration
/// by p, with the checks of [`SpectralReport`]. `vanishing_input` asks for RH_k(X; F) = 0,
/// −1 ≤ k ≤ r, to be verified and E^∞ to vanish for p + q ≤ min(r, window).
pub fn spectral_sequence<F: Field>(
    ctx: &GroupOnSystem<'_, F>,
    depth: usize,
    pages: usize,
    vanishing_input: Option<isize>,
    guard_bytes: usize,
) -> Result<(SpectralPages<F::E>, SpectralReport), HomError> {
    if depth < 2 {
        return Err(HomError::Invalid("resolution depth must be at least 2".into()));
    }
    let sys = ctx.system;
    let f = &sys.field;
    if let Some(r) = vanishing_input {
        let h = homology_with_coefficients(sys, -1, r)?;
        if let Some(k) = (-1..=r).find(|&k| h.dim(k) != 0) {
            return Err(HomError::Precondition(format!("RH_{k}(X; F) has dimension {}", h.dim(k))));
        }
    }
    let dc = DoubleComplex::from_action(ctx, depth, guard_bytes)?;
    let window = depth as isize - 2;
    let p_max = dc.columns() as isize - 2;
    let span_p = (p_max + 1).max(0) as usize;
    let last = pages.max(span_p + 1).max(1);
    let mut pager = Pager { dc: &dc, diffs: HashMap::new(), dense_diffs: HashMap::new(), z: HashMap::new(), images: HashMap::new() };

    let positions: Vec<(isize, isize)> =
        (-1..=window).flat_map(|n| (-1..=p_max).filter(move |&p| n - p >= 0).map(move |p| (p, n))).collect();
    let mut sqs: Vec<HashMap<(isize, isize), SubQuotient<F::E>>> = Vec::new();
    let mut ranks: Vec<HashMap<(isize, isize), usize>> = Vec::new();
    let mut out_pages = Vec::new();
    let mut consistent = true;
    for r in 1..=last {
        let mut here = HashMap::new();
        for &(p, n) in &positions {
            here.insert((p, n), pager.page(r, p, n)?);
        }
        if let (Some(prev), Some(prank)) = (sqs.last(), ranks.last()) {
            // This page against the homology of the previous one.
            let pr = r - 1;
            for &(p, n) in &positions {
                let before: &SubQuotient<F::E> = &prev[&(p, n)];
                let out = prank.get(&(p, n)).copied().unwrap_or(0);
                let inn = pager.rank_in(pr, p, n);
                if let Some(&stored) = prank.get(&(p + pr as isize, n + 1)) {
                    consistent &= stored == inn;
                }
                consistent &= here[&(p, n)].dim + out + inn == before.dim;
            }
        }
        let mut diffs = Vec::new();
        let mut rank_out = HashMap::new();
        for &(p, n) in &positions {
            let tgt = (p - r as isize, n - 1);
            let Some(t) = here.get(&tgt) else { continue };
            let d = pager.dense_diff(n);
            let m = here[&(p, n)]
                .induced(f, &d, t)
                .ok_or_else(|| HomError::Internal(format!("d^{r} is not well defined at ({p}, {})", n - p)))?;
            rank_out.insert((p, n), rank(f, &m));
            diffs.push(PageDifferential { from: (p, n - p), to: (tgt.0, tgt.1 - tgt.0), matrix: m });
        }
        out_pages.push(Page {
            r,
            dims: positions.iter().map(|&(p, n)| ((p, n - p), here[&(p, n)].dim)).collect(),
            differentials: diffs,
        });
        sqs.push(here);
        ranks.push(rank_out);
    }

    let mut infinity = BTreeMap::new();
    for &(p, n) in &positions {
        infinity.insert((p, n - p), pager.page(INF, p, n)?.dim);
    }
    let converged = out_pages.last().map_or(true, |pg| pg.dims == infinity);

    // Direct homology of the total complex.
    let mut total_homology = Vec::new();
    for n in -1..=window {
        let rows = pager.dim(n - 1);
        let rank_n = if n == -1 { 0 } else { crate::exactlin::sparse::sparse_rank(f, rows, pager.diff(n).clone()) };
        let rank_up = crate::exactlin::sparse::sparse_rank(f, pager.dim(n), pager.diff(n + 1).clone());
        total_homology.push(pager.dim(n) - rank_n - rank_up);
    }
    let total_matches = (-1..=window).all(|n| {
        let s: usize = infinity.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum();
        s == total_homology[(n + 1) as usize]
    });

    // Column homology and the stabilizer oracle.
    let orbits = ctx.orbits();
    let mut e1_columns = Vec::new();
    let mut e1_matches = true;
    let chain = ChainComplex::from_system(sys);
    for l in 0..dc.columns() {
        let dim = chain.dims[l];
        let mats: Vec<Mat<F::E>> = (0..ctx.order()).map(|x| block_action(ctx, &chain, l, x)).collect();
        let act = inverse_action(f, &ctx.group, &mats);
        let col = bar_dims(f, &ctx.group, &act, dim, depth - 1);
        let mut oracle = vec![0usize; depth];
        let norb = if l == 0 { usize::from(sys.augmented) } else { orbits[l].iter().max().map_or(0, |&m| m + 1) };
        for o in 0..norb {
            let s = (0..sys.dims[l].len()).find(|&s| orbits[l][s] == o).unwrap();
            let elements = ctx.stabilizer(l, s);
            let gens = ctx.group.generators_of(&elements);
            let (grp, _) = ctx.group.subgroup(&elements, &gens)?;
            let el_mats: Vec<Mat<F::E>> = elements.iter().map(|&x| ctx.phi(x, l, s)).collect();
            let rep = FiniteGroupRep::from_elements(grp, f.clone(), sys.dims[l][s], el_mats)?;
            let h = bar_homology(&rep, depth - 1, guard_bytes)?;
            for (q, d) in h.iter().enumerate() {
                oracle[q] += d;
            }
        }
        e1_matches &= col == oracle;
        e1_columns.push(col);
    }
    if let Some(pg) = out_pages.first() {
        for (&(p, q), &d) in &pg.dims {
            if (q as usize) < depth {
                e1_matches &= e1_columns[(p + 1) as usize][q as usize] == d;
            }
        }
    }

    // E^2 rows against stabilizer systems, and d^1 on row 0.
    let mut e2_matches = true;
    let mut row0_differential_matches = true;
    for q in 0..=1usize {
        if q as isize > window + 1 {
            break;
        }
        let st = stabilizer_system(ctx, q, guard_bytes)?;
        let hi = window - q as isize;
        if hi < -1 {
            continue;
        }
        let h = homology_with_coefficients(&st.system, -1, hi)?;
        if let Some(pg) = out_pages.get(1) {
            for p in -1..=hi.min(p_max) {
                e2_matches &= pg.dims.get(&(p, q as isize)).copied().unwrap_or(0) == h.dim(p);
            }
        }
        if q == 0 {
            row0_differential_matches = row0_check(ctx, &dc, &chain, &st, &sqs[0], &out_pages[0], window.min(p_max))?;
        }
    }

    let vanishing = vanishing_input.map(|r| {
        let w = r.min(window);
        (r, infinity.iter().filter(|((p, q), _)| p + q <= w).all(|(_, &d)| d == 0))
    });
    let mut dims = Vec::new();
    for pg in &out_pages {
        for (&(p, q), &d) in &pg.dims {
            dims.push(SpectralDims { r: pg.r, p, q, dim: d });
        }
    }
    for (&(p, q), &d) in &infinity {
        dims.push(SpectralDims { r: 0, p, q, dim: d });
    }
    let report = SpectralReport {
        depth,
        window,
        pages_consistent: consistent,
        converged,
        total_matches,
        e1_matches,
        e2_matches,
        row0_differential_matches,
        vanishing,
        dims,
    };
    Ok((SpectralPages { window, pages: out_pages, infinity, e1_columns, total_homology }, report))
}

fn block_action<F: Field>(ctx: &GroupOnSystem<'_, F>, chain: &ChainComplex<F>, l: usize, x: usize) -> Mat<F::E> {
    let sys = ctx.system;
    let f = &sys.field;
    let dim = chain.dims[l];
    let mut m = zeros(f, dim, dim);
    for s in 0..sys.dims[l].len() {
        let t = ctx.act(x, l, s);
        let phi = ctx.phi(x, l, s);
        let (r0, c0) = (chain.offsets[l][t], chain.offsets[l][s]);
        for i in 0..phi.rows {
            for j in 0..phi.cols {
                m.set(r0 + i, c0 + j, phi.get(i, j).clone());
            }
        }
    }
    m
}

/// ι_p : C_p(X/G; H_0) → E^1_{p,0}, sending a class at an orbit to its representative in
/// C_{p,0} at the least lift, must be an isomorphism with d^1 ι_p = ι_{p−1} ∂_p.
fn row0_check<F: Field>(
    ctx: &GroupOnSystem<'_, F>,
    dc: &DoubleComplex<F>,
    chain: &ChainComplex<F>,
    st: &super::machine::StabilizerSystem<F>,
    e1: &HashMap<(isize, isize), SubQuotient<F::E>>,
    page: &Page<F::E>,
    top: isize,
) -> Result<bool, HomError> {
    let f = &ctx.system.field;
    let quot = ChainComplex::from_system(&st.system);
    let mut iotas: HashMap<isize, Mat<F::E>> = HashMap::new();
    for p in -1..=top {
        let l = (p + 1) as usize;
        let Some(sq) = e1.get(&(p, p)) else { continue };
        let block = dc.total(p).0.iter().find(|b| b.0 == l && b.1 == 0).map_or(0, |b| b.2);
        let mut cols = Vec::new();
        for (o, &s) in st.reps[l].iter().enumerate() {
            let reps = &st.classes[l][o];
            for j in 0..reps.cols {
                let mut v = vec![f.zero(); sq.ambient];
                let off = block + chain.offsets[l][s];
                for i in 0..reps.rows {
                    v[off + i] = reps.get(i, j).clone();
                }
                cols.push(sq.coords(f, &v).ok_or_else(|| HomError::Internal("row-0 class is not a cycle".into()))?);
            }
        }
        let iota = Mat::from_cols(sq.dim, &cols);
        if iota.cols != sq.dim || rank(f, &iota) != sq.dim {
            return Ok(false);
        }
        iotas.insert(p, iota);
    }
    for p in 0..=top {
        let (Some(a), Some(b)) = (iotas.get(&p), iotas.get(&(p - 1))) else { continue };
        let Some(d1) = page.differentials.iter().find(|d| d.from == (p, 0)) else { continue };
        let lhs = crate::exactlin::dense::mul(f, &d1.matrix, a);
        let rhs = crate::exactlin::dense::mul(f, b, &quot.dense_boundary(p));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
