//! Constructive reductions of unimodular vectors and splittings by elementary operations.

use super::ops::OpWord;
use super::rmat::RMat;
use super::ring::{Elt, FiniteRing, TwoSidedIdeal};
use super::unimod::{combine, find_shortening, is_unimodular, unimodular_fast};
use super::RingError;

/// π(v) = Σ π_i v_i.
pub fn covector_eval(r: &FiniteRing, pi: &[Elt], v: &[Elt]) -> Elt {
    combine(r, pi, v)
}

pub fn basis_vector(r: &FiniteRing, n: usize, k: usize) -> Vec<Elt> {
    (0..n).map(|i| if i == k { r.one() } else { r.zero() }).collect()
}

/// Word carrying a unimodular v of length n ≥ r to e_n = (0, ..., 0, 1).
///
/// Phase one shortens with a stable-rank witness, phase two makes the last entry 1,
/// phase three clears the rest.
pub fn reduce_unimodular(r: &FiniteRing, v: &[Elt], rr: usize) -> Result<OpWord, RingError> {
    let n = v.len();
    if n < rr || n < 2 {
        return Err(RingError::Precondition(format!("vector length {n} is below the stable range {rr}")));
    }
    if !unimodular_fast(r, v) {
        return Err(RingError::Precondition(format!("{v:?} is not unimodular")));
    }
    let mut word = OpWord::empty(n);
    let mut w = v.to_vec();
    if w == basis_vector(r, n, n - 1) {
        return Ok(word);
    }
    let b = find_shortening(r, &w, None)
        .ok_or_else(|| RingError::Precondition(format!("no stable-rank witness for {v:?}")))?;
    for (i, &bi) in b.iter().enumerate() {
        word.push(r, n, i + 1, bi, None);
    }
    w = word.replay(r, v);
    let a = is_unimodular(r, &w[..n - 1]).expect("shortened vector is unimodular");
    let s = r.sub(r.one(), w[n - 1]);
    let mut fill = OpWord::empty(n);
    for (i, &ai) in a.iter().enumerate() {
        fill.push(r, i + 1, n, r.mul(s, ai), None);
    }
    w = fill.replay(r, &w);
    word.extend(&fill);
    debug_assert_eq!(w[n - 1], r.one());
    for i in 0..n - 1 {
        word.push(r, n, i + 1, r.neg(w[i]), None);
    }
    Ok(word)
}

/// Word carrying e_n to e_1 (n ≥ 2).
pub fn last_to_first(r: &FiniteRing, n: usize) -> OpWord {
    let mut w = OpWord::empty(n);
    w.push(r, n, 1, r.one(), None);
    w.push(r, 1, n, r.neg(r.one()), None);
    w
}

/// Complement ker π of x, described by a covector with π(x) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complement {
    pub pi: Vec<Elt>,
}

/// Elements of ker π, enumerated (guarded).
pub fn kernel_elements(r: &FiniteRing, pi: &[Elt], guard: usize) -> Result<Vec<Vec<Elt>>, RingError> {
    Ok(super::unimod::all_vectors(r, pi.len(), guard)?
        .into_iter()
        .filter(|v| covector_eval(r, pi, v) == r.zero())
        .collect())
}

/// All complements of x, as covectors with π(x) = 1.
pub fn complements_of(r: &FiniteRing, x: &[Elt], guard: usize) -> Result<Vec<Complement>, RingError> {
    Ok(super::unimod::all_vectors(r, x.len(), guard)?
        .into_iter()
        .filter(|pi| covector_eval(r, pi, x) == r.one())
        .map(|pi| Complement { pi })
        .collect())
}

/// Word N with N e_n = e_n and N(span(e_1..e_{n-1})) = ker ρ, for ρ(e_n) = 1.
fn standard_to_kernel(r: &FiniteRing, rho: &[Elt]) -> OpWord {
    let n = rho.len();
    let mut w = OpWord::empty(n);
    for (i, &l) in rho.iter().enumerate().take(n - 1) {
        w.push(r, i + 1, n, r.neg(l), None);
    }
    w
}

/// A frame G ∈ EL_n(R) with G e_n = x and G(span(e_1..e_{n-1})) = ker π.
#[derive(Clone, Debug)]
pub struct SplitFrame {
    pub word: OpWord,
    pub matrix: RMat,
    pub inverse: RMat,
}

impl SplitFrame {
    /// Free basis of the complement: the first n−1 columns.
    pub fn complement_basis(&self) -> Vec<Vec<Elt>> {
        (0..self.matrix.cols - 1).map(|j| self.matrix.col(j)).collect()
    }

    /// First c columns: a free basis of the complement of a partial basis of size n − c.
    pub fn complement_basis_cols(&self, c: usize) -> Vec<Vec<Elt>> {
        (0..c).map(|j| self.matrix.col(j)).collect()
    }
}

pub fn split_frame(r: &FiniteRing, x: &[Elt], c: &Complement, rr: usize) -> Result<SplitFrame, RingError> {
    let n = x.len();
    if c.pi.len() != n || covector_eval(r, &c.pi, x) != r.one() {
        return Err(RingError::Precondition("covector does not split x".into()));
    }
    let a = reduce_unimodular(r, x, rr)?;
    let a_inv = a.inverse().matrix(r);
    let rho = a_inv.covector_apply(r, &c.pi);
    debug_assert_eq!(rho[n - 1], r.one());
    let nw = standard_to_kernel(r, &rho);
    // G = A^{-1} N: apply N first, then A^{-1}.
    let mut word = nw.clone();
    word.extend(&a.inverse());
    let matrix = word.matrix(r);
    let inverse = word.inverse().matrix(r);
    Ok(SplitFrame { word, matrix, inverse })
}

/// Result of matching one splitting with another.
#[derive(Clone, Debug)]
pub struct SplitReduction {
    pub word: OpWord,
    /// Free basis of C (the first splitting's complement).
    pub complement_basis: Vec<Vec<Elt>>,
}

/// Word M with M x = y and M(C) = D.
pub fn reduce_split(
    r: &FiniteRing,
    x: &[Elt],
    c: &Complement,
    y: &[Elt],
    d: &Complement,
    rr: usize,
) -> Result<SplitReduction, RingError> {
    if x.len() != y.len() {
        return Err(RingError::Precondition("vectors of different length".into()));
    }
    let gx = split_frame(r, x, c, rr)?;
    let gy = split_frame(r, y, d, rr)?;
    // M = G_y G_x^{-1}.
    let mut word = gx.word.inverse();
    word.extend(&gy.word);
    Ok(SplitReduction { word, complement_basis: gx.complement_basis() })
}

/// Checks M x = y and M(ker π_C) = ker π_D by enumerating C.
pub fn verify_split(
    r: &FiniteRing,
    m: &RMat,
    x: &[Elt],
    c: &Complement,
    y: &[Elt],
    d: &Complement,
    guard: usize,
) -> Result<bool, RingError> {
    if m.apply(r, x) != y {
        return Ok(false);
    }
    let cs = kernel_elements(r, &c.pi, guard)?;
    let ds = kernel_elements(r, &d.pi, guard)?;
    let mut image = std::collections::BTreeSet::new();
    for v in &cs {
        let w = m.apply(r, v);
        if covector_eval(r, &d.pi, &w) != r.zero() {
            return Ok(false);
        }
        image.insert(w);
    }
    Ok(image.len() == ds.len())
}

/// Frame for a partial basis (x_0..x_k) with covectors π_i (π_i(x_j) = δ_ij).
///
/// Returns G ∈ EL_N(R) with G e_{N-t} = x_t and G(span(e_1..e_{N-k-1})) = ∩ ker π_i.
pub fn partial_basis_frame(r: &FiniteRing, xs: &[Vec<Elt>], pis: &[Vec<Elt>], rr: usize) -> Result<SplitFrame, RingError> {
    let big_n = xs.first().map_or(0, |x| x.len());
    let mut total = OpWord::empty(big_n);
    // Accumulated frame so far, as a matrix and its inverse.
    let mut g = RMat::identity(r, big_n);
    let mut g_inv = RMat::identity(r, big_n);
    for (t, (x, pi)) in xs.iter().zip(pis).enumerate() {
        let m = big_n - t;
        let xc = g_inv.apply(r, x);
        if xc[m..].iter().any(|&e| e != r.zero()) {
            return Err(RingError::Precondition("vectors are not mutually split".into()));
        }
        let pc = g.covector_apply(r, pi);
        let local = split_frame(r, &xc[..m], &Complement { pi: pc[..m].to_vec() }, rr)?;
        let lifted = OpWord { n: big_n, letters: local.word.letters.clone() };
        // New frame G · (local ⊕ 1): apply the local word first.
        let mut next = lifted.clone();
        next.extend(&total);
        total = next;
        g = g.mul(r, &local.matrix.pad_identity(r, t));
        g_inv = local.inverse.pad_identity(r, t).mul(r, &g_inv);
    }
    Ok(SplitFrame { word: total, matrix: g, inverse: g_inv })
}

/// Word M ∈ EL_n(R, q) with M v = v', for unimodular v ≡ v' mod q.
///
/// Reduces to v' = e_1 by conjugation; for v ≡ e_1 it shortens inside q, forces the last
/// entry to q_1, and clears with the conjugate E^{-1} F E.
pub fn reduce_relative(
    r: &FiniteRing,
    q: &TwoSidedIdeal,
    v: &[Elt],
    v2: &[Elt],
    rr: usize,
) -> Result<OpWord, RingError> {
    let n = v.len();
    if v2.len() != n {
        return Err(RingError::Precondition("vectors of different length".into()));
    }
    if v.iter().zip(v2).any(|(&a, &b)| !q.contains(r.sub(a, b))) {
        return Err(RingError::NotCongruent);
    }
    let mut a = reduce_unimodular(r, v2, rr)?;
    a.extend(&last_to_first(r, n));
    let w = a.replay(r, v);
    let b = reduce_relative_to_first(r, q, &w, rr)?;
    let mut word = a.clone();
    word.extend(&b);
    word.extend(&a.inverse());
    word.retag(q);
    Ok(word)
}

fn reduce_relative_to_first(r: &FiniteRing, q: &TwoSidedIdeal, v: &[Elt], rr: usize) -> Result<OpWord, RingError> {
    let n = v.len();
    if n < rr || n < 2 {
        return Err(RingError::Precondition(format!("vector length {n} is below the stable range {rr}")));
    }
    let mut word = OpWord::empty(n);
    let b = find_shortening(r, v, Some(q))
        .ok_or_else(|| RingError::Precondition(format!("no relative stable-rank witness for {v:?}")))?;
    for (i, &bi) in b.iter().enumerate() {
        word.push(r, n, i + 1, bi, Some(q));
    }
    let w1 = word.replay(r, v);
    let a = is_unimodular(r, &w1[..n - 1]).expect("shortened vector is unimodular");
    let q1 = r.sub(w1[0], r.one());
    let s = r.sub(q1, w1[n - 1]);
    let mut step2 = OpWord::empty(n);
    for (i, &ai) in a.iter().enumerate() {
        step2.push(r, i + 1, n, r.mul(s, ai), Some(q));
    }
    let w2 = step2.replay(r, &w1);
    word.extend(&step2);
    debug_assert_eq!(w2[n - 1], q1);
    let mut e = OpWord::empty(n);
    e.push(r, n, 1, r.neg(r.one()), Some(q));
    let w3 = e.replay(r, &w2);
    debug_assert_eq!(w3[0], r.one());
    let mut f = OpWord::empty(n);
    for j in 1..n {
        f.push(r, 1, j + 1, r.neg(w3[j]), Some(q));
    }
    word.extend(&e);
    word.extend(&f);
    word.extend(&e.inverse());
    Ok(word)
}
