//! Twisted chain complexes C_k(X; F) = ⊕ F(σ), their homology, and long exact sequences.

use serde::Serialize;

use super::{CoeffError, CoefficientSystem};
use crate::exactlin::dense::{
    self, column_space, direct_sum, image, is_zero_mat, kernel_space, mul, mul_vec, rank, solve, span, sum_spaces, zeros,
    Subspace,
};
use crate::exactlin::sparse::{reduce_columns, SparseVec};
use crate::exactlin::{Field, Mat};

/// Boundary maps d = Σ (−1)^i F(d_i), indexed by cell level.
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Field> {
    pub field: F,
    /// dims[L] = dim C_{L−1}.
    pub dims: Vec<usize>,
    /// Block offsets of each cell inside its chain group.
    pub offsets: Vec<Vec<usize>>,
    /// boundary[L] : C_{L−1} → C_{L−2} as sparse columns; boundary[0] maps to zero.
    pub boundary: Vec<Vec<SparseVec<F::E>>>,
    pub cap: Option<usize>,
}

impl<F: Field> ChainComplex<F> {
    pub fn from_system(sys: &CoefficientSystem<F>) -> Self {
        let f = &sys.field;
        let mut offsets = Vec::with_capacity(sys.cell_levels());
        let mut dims = Vec::with_capacity(sys.cell_levels());
        for l in 0..sys.cell_levels() {
            let mut acc = 0;
            let mut offs = Vec::with_capacity(sys.dims[l].len());
            for &d in &sys.dims[l] {
                offs.push(acc);
                acc += d;
            }
            offsets.push(offs);
            dims.push(acc);
        }
        let mut boundary = vec![vec![Vec::new(); dims[0]]];
        for l in 1..sys.cell_levels() {
            let mut cols = Vec::with_capacity(dims[l]);
            for s in 0..sys.dims[l].len() {
                for c in 0..sys.dims[l][s] {
                    let mut acc: std::collections::BTreeMap<usize, F::E> = Default::default();
                    for (i, m) in sys.faces[l][s].iter().enumerate() {
                        let off = offsets[l - 1][sys.face_target(l, s, i)];
                        for r in 0..m.rows {
                            let v = m.get(r, c);
                            if f.is_zero(v) {
                                continue;
                            }
                            let v = if i % 2 == 0 { v.clone() } else { f.neg(v) };
                            let e = acc.entry(off + r).or_insert_with(|| f.zero());
                            *e = f.add(e, &v);
                        }
                    }
                    cols.push(acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect());
                }
            }
            boundary.push(cols);
        }
        ChainComplex { field: f.clone(), dims, offsets, boundary, cap: sys.base.cap }
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    /// dim C_k (zero outside the stored range).
    pub fn dim(&self, k: isize) -> usize {
        usize::try_from(k + 1).ok().and_then(|l| self.dims.get(l).copied()).unwrap_or(0)
    }

    /// rank of d_k : C_k → C_{k−1}.
    pub fn rank(&self, k: isize) -> usize {
        let Some(cols) = usize::try_from(k + 1).ok().and_then(|l| self.boundary.get(l)) else { return 0 };
        if k + 1 == 0 {
            return 0;
        }
        reduce_columns(&self.field, self.dim(k - 1), cols.clone(), false, None).rank
    }

    fn apply(&self, l: usize, v: &SparseVec<F::E>) -> SparseVec<F::E> {
        let f = &self.field;
        let mut acc: std::collections::BTreeMap<usize, F::E> = Default::default();
        for (j, x) in v {
            for (r, y) in &self.boundary[l][*j] {
                let e = acc.entry(*r).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(x, y));
            }
        }
        acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
    }

    /// d_{k} d_{k+1} = 0 for every stored k.
    pub fn check_dd(&self) -> Result<(), CoeffError> {
        for l in 2..self.levels() {
            for col in &self.boundary[l] {
                if !self.apply(l - 1, col).is_empty() {
                    return Err(CoeffError::NotComplex { degree: l as isize - 2 });
                }
            }
        }
        Ok(())
    }

    /// Dense matrix of d_k.
    pub fn dense_boundary(&self, k: isize) -> Mat<F::E> {
        let f = &self.field;
        let mut m = zeros(f, self.dim(k - 1), self.dim(k));
        if let Some(cols) = usize::try_from(k + 1).ok().filter(|&l| l > 0).and_then(|l| self.boundary.get(l)) {
            for (j, c) in cols.iter().enumerate() {
                for (r, v) in c {
                    m.set(*r, j, v.clone());
                }
            }
        }
        m
    }

    fn check_cap(&self, hi: isize) -> Result<(), CoeffError> {
        if let Some(c) = self.cap {
            let need = (hi + 1).max(0) as usize;
            if need > c {
                return Err(CoeffError::BeyondCap { needed: need, cap: c });
            }
        }
        Ok(())
    }
}

/// dim RH_k(X; F) (H_k when the system is not augmented) for k in lo..=hi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemHomology {
    pub lo: isize,
    pub dims: Vec<usize>,
}

impl SystemHomology {
    pub fn dim(&self, k: isize) -> usize {
        self.dims[(k - self.lo) as usize]
    }

    pub fn hi(&self) -> isize {
        self.lo + self.dims.len() as isize - 1
    }

    pub fn vanishes(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }
}

pub fn homology_with_coefficients<F: Field>(sys: &CoefficientSystem<F>, lo: isize, hi: isize) -> Result<SystemHomology, CoeffError> {
    homology_with_coefficients_jobs(sys, lo, hi, 1)
}

/// As [`homology_with_coefficients`], computing the needed ranks on up to `jobs` threads.
pub fn homology_with_coefficients_jobs<F: Field>(
    sys: &CoefficientSystem<F>,
    lo: isize,
    hi: isize,
    jobs: usize,
) -> Result<SystemHomology, CoeffError> {
    let lo = lo.max(-1);
    if hi < lo {
        return Ok(SystemHomology { lo, dims: Vec::new() });
    }
    let cx = ChainComplex::from_system(sys);
    cx.check_cap(hi)?;
    cx.check_dd()?;
    let degrees: Vec<isize> = (lo..=hi + 1).collect();
    let ranks = parallel_map(&degrees, jobs, |&k| cx.rank(k));
    let dims = (lo..=hi)
        .map(|k| {
            let i = (k - lo) as usize;
            cx.dim(k) - ranks[i] - ranks[i + 1]
        })
        .collect();
    Ok(SystemHomology { lo, dims })
}

pub(crate) fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|sc| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                sc.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// 0 → A → B → C → 0, cellwise.
#[derive(Clone, Debug)]
pub struct SystemShortExactSequence<F: Field> {
    pub a: CoefficientSystem<F>,
    pub b: CoefficientSystem<F>,
    pub c: CoefficientSystem<F>,
    /// inj[L][s] : A(σ) → B(σ).
    pub inj: Vec<Vec<Mat<F::E>>>,
    /// surj[L][s] : B(σ) → C(σ).
    pub surj: Vec<Vec<Mat<F::E>>>,
}

impl<F: Field> SystemShortExactSequence<F> {
    /// Checks cellwise exactness and the face-map squares.
    pub fn new(
        a: CoefficientSystem<F>,
        b: CoefficientSystem<F>,
        c: CoefficientSystem<F>,
        inj: Vec<Vec<Mat<F::E>>>,
        surj: Vec<Vec<Mat<F::E>>>,
    ) -> Result<Self, CoeffError> {
        let s = SystemShortExactSequence { a, b, c, inj, surj };
        s.verify()?;
        Ok(s)
    }

    /// B = A ⊕ C with the evident maps.
    pub fn split(a: CoefficientSystem<F>, c: CoefficientSystem<F>) -> Result<Self, CoeffError> {
        let f = a.field.clone();
        if a.base.counts() != c.base.counts() || a.augmented != c.augmented {
            return Err(CoeffError::Invalid("systems live on different bases".into()));
        }
        let mut dims = Vec::new();
        let mut faces = Vec::new();
        let mut inj = Vec::new();
        let mut surj = Vec::new();
        for l in 0..a.cell_levels() {
            let mut dl = Vec::new();
            let mut fl = Vec::new();
            let mut il = Vec::new();
            let mut sl = Vec::new();
            for s in 0..a.dims[l].len() {
                let (da, dc) = (a.dims[l][s], c.dims[l][s]);
                dl.push(da + dc);
                fl.push(a.faces[l][s].iter().zip(&c.faces[l][s]).map(|(x, y)| direct_sum(&f, x, y)).collect());
                il.push(dense::vstack::<F>(&dense::identity(&f, da), &zeros(&f, dc, da)));
                sl.push(dense::hstack(&f, &zeros(&f, dc, da), &dense::identity(&f, dc)));
            }
            dims.push(dl);
            faces.push(fl);
            inj.push(il);
            surj.push(sl);
        }
        let b = CoefficientSystem::new(f, a.base.clone(), a.augmented, dims, faces)?;
        Self::new(a, b, c, inj, surj)
    }

    pub fn verify(&self) -> Result<(), CoeffError> {
        let f = &self.a.field;
        let (a, b, c) = (&self.a, &self.b, &self.c);
        if a.dims.iter().map(|l| l.len()).ne(b.dims.iter().map(|l| l.len()))
            || c.dims.iter().map(|l| l.len()).ne(b.dims.iter().map(|l| l.len()))
        {
            return Err(CoeffError::Invalid("systems live on different bases".into()));
        }
        if self.inj.len() != b.cell_levels() || self.surj.len() != b.cell_levels() {
            return Err(CoeffError::Invalid("map levels do not match the systems".into()));
        }
        for l in 0..b.cell_levels() {
            if self.inj[l].len() != b.dims[l].len() || self.surj[l].len() != b.dims[l].len() {
                return Err(CoeffError::Invalid(format!("maps missing at level {}", l as isize - 1)));
            }
            for s in 0..b.dims[l].len() {
                let (i, p) = (&self.inj[l][s], &self.surj[l][s]);
                let (da, db, dc) = (a.dims[l][s], b.dims[l][s], c.dims[l][s]);
                let at = format!("simplex ({}, {s})", l as isize - 1);
                if i.rows != db || i.cols != da || p.rows != dc || p.cols != db {
                    return Err(CoeffError::Invalid(format!("map shapes at {at}")));
                }
                if db != da + dc || rank(f, i) != da || rank(f, p) != dc || !is_zero_mat(f, &mul(f, p, i)) {
                    return Err(CoeffError::NotExact(at));
                }
                if l == 0 {
                    continue;
                }
                for k in 0..b.faces[l][s].len() {
                    let t = b.face_target(l, s, k);
                    let ok_i = mul(f, &b.faces[l][s][k], i) == mul(f, &self.inj[l - 1][t], &a.faces[l][s][k]);
                    let ok_p = mul(f, &c.faces[l][s][k], p) == mul(f, &self.surj[l - 1][t], &b.faces[l][s][k]);
                    if !ok_i || !ok_p {
                        return Err(CoeffError::NotExact(format!("face d_{k} does not commute at {at}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One position of the long exact sequence with the ranks of the maps into and out of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesPosition {
    pub degree: isize,
    /// "A", "B" or "C".
    pub term: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub holds: bool,
    pub positions: Vec<LesPosition>,
    /// (k, rank of δ : H_k(C) → H_{k−1}(A)).
    pub connecting_ranks: Vec<(isize, usize)>,
}

struct Cycles<E> {
    z: Subspace<E>,
    b: Subspace<E>,
}

fn cycles<F: Field>(cx: &ChainComplex<F>, k: isize) -> Cycles<F::E> {
    let f = &cx.field;
    Cycles { z: kernel_space(f, &cx.dense_boundary(k)), b: column_space(f, &cx.dense_boundary(k + 1)) }
}

fn block_diag<F: Field>(f: &F, blocks: &[Mat<F::E>]) -> Mat<F::E> {
    let rows = blocks.iter().map(|m| m.rows).sum();
    let cols = blocks.iter().map(|m| m.cols).sum();
    let mut out = zeros(f, rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for m in blocks {
        for r in 0..m.rows {
            for c in 0..m.cols {
                out.set(r0 + r, c0 + c, m.get(r, c).clone());
            }
        }
        r0 += m.rows;
        c0 += m.cols;
    }
    out
}

/// X with m X = I (m surjective), column by column.
fn right_inverse<F: Field>(f: &F, m: &Mat<F::E>) -> Mat<F::E> {
    let mut out = zeros(f, m.cols, m.rows);
    for j in 0..m.rows {
        let mut e = vec![f.zero(); m.rows];
        e[j] = f.one();
        let x = solve(f, m, &e).expect("surjective");
        for (i, v) in x.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    out
}

/// rank of the map induced by `t` on homology: dim(t(Z) + B′) − dim B′.
fn induced_rank<F: Field>(f: &F, t: &Mat<F::E>, z: &Subspace<F::E>, b_target: &Subspace<F::E>) -> usize {
    sum_spaces(f, &image(f, t, z), b_target).dim() - b_target.dim()
}

pub fn les_check<F: Field>(seq: &SystemShortExactSequence<F>, lo: isize, hi: isize) -> Result<LesReport, CoeffError> {
    seq.verify()?;
    let f = &seq.a.field;
    let lo = lo.max(-1);
    let (ca, cb, cc) =
        (ChainComplex::from_system(&seq.a), ChainComplex::from_system(&seq.b), ChainComplex::from_system(&seq.c));
    for cx in [&ca, &cb, &cc] {
        cx.check_cap(hi)?;
        cx.check_dd()?;
    }
    let level_map = |maps: &Vec<Vec<Mat<F::E>>>, k: isize| -> Mat<F::E> {
        usize::try_from(k + 1).ok().and_then(|l| maps.get(l)).map_or_else(|| zeros(f, 0, 0), |m| block_diag(f, m))
    };
    let lift = |k: isize| -> Mat<F::E> {
        usize::try_from(k + 1)
            .ok()
            .and_then(|l| seq.surj.get(l))
            .map_or_else(|| zeros(f, 0, 0), |m| block_diag(f, &m.iter().map(|p| right_inverse(f, p)).collect::<Vec<_>>()))
    };
    let mut positions = Vec::new();
    let mut connecting = Vec::new();
    // rank δ_k : H_k(C) → H_{k−1}(A).
    let delta_rank = |k: isize| -> usize {
        if k - 1 < -1 {
            return 0;
        }
        let zc = cycles(&cc, k).z;
        let ba = cycles(&ca, k - 1).b;
        let up = lift(k);
        let d = cb.dense_boundary(k);
        let i_prev = level_map(&seq.inj, k - 1);
        let vecs: Vec<Vec<F::E>> = zc
            .vectors()
            .iter()
            .map(|v| {
                let w = mul_vec(f, &d, &mul_vec(f, &up, v));
                solve(f, &i_prev, &w).expect("boundary of a lift lies in the image of A")
            })
            .collect();
        sum_spaces(f, &span(f, ca.dim(k - 1), &vecs), &ba).dim() - ba.dim()
    };
    let mut deltas = std::collections::BTreeMap::new();
    for k in lo..=hi + 1 {
        let r = delta_rank(k);
        deltas.insert(k, r);
        connecting.push((k, r));
    }
    for k in lo..=hi {
        let (a, b, c) = (cycles(&ca, k), cycles(&cb, k), cycles(&cc, k));
        let ik = level_map(&seq.inj, k);
        let pk = level_map(&seq.surj, k);
        let ri = induced_rank(f, &ik, &a.z, &b.b);
        let rp = induced_rank(f, &pk, &b.z, &c.b);
        let ha = a.z.dim() - a.b.dim();
        let hb = b.z.dim() - b.b.dim();
        let hc = c.z.dim() - c.b.dim();
        for (term, dim, rin, rout) in [("A", ha, deltas[&(k + 1)], ri), ("B", hb, ri, rp), ("C", hc, rp, deltas[&k])] {
            positions.push(LesPosition { degree: k, term: term.into(), dim, rank_in: rin, rank_out: rout, exact: rin + rout == dim });
        }
    }
    connecting.retain(|&(k, _)| k <= hi);
    Ok(LesReport { holds: positions.iter().all(|p| p.exact), positions, connecting_ranks: connecting })
}
