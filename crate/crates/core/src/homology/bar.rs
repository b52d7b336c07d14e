//! Normalized bar complex C_q(G; M) = M ⊗ k[Ḡ]^{⊗q}, Ḡ = G ∖ {1}.
//!
//! d(m ⊗ [g_1|…|g_q]) = g_1⁻¹m ⊗ [g_2|…|g_q] + Σ_{0<i<q} (−1)^i m ⊗ […|g_i g_{i+1}|…]
//!                      + (−1)^q m ⊗ [g_1|…|g_{q−1}].

use super::group::{coinvariants, FiniteGroup, FiniteGroupRep};
use super::HomError;
use crate::exactlin::dense::inverse;
use crate::exactlin::sparse::{reduce_columns, SparseVec};
use crate::exactlin::{Field, Mat};

/// Bytes charged per stored sparse entry.
const ENTRY_BYTES: usize = 24;

/// Columns of ρ(g⁻¹) for every element, in sparse form.
pub(crate) fn inverse_action<F: Field>(f: &F, group: &FiniteGroup, elements: &[Mat<F::E>]) -> Vec<Vec<SparseVec<F::E>>> {
    (0..group.order())
        .map(|g| {
            let m = &elements[group.inv[g]];
            (0..m.cols)
                .map(|c| (0..m.rows).filter(|&r| !f.is_zero(m.get(r, c))).map(|r| (r, m.get(r, c).clone())).collect())
                .collect()
        })
        .collect()
}

/// Basis index of m_i ⊗ [g_1|…|g_q]; the g_j are elements 1..order.
pub(crate) fn bar_index(dim: usize, base: usize, i: usize, word: &[usize]) -> usize {
    let mut code = 0;
    for &g in word.iter().rev() {
        code = code * base + (g - 1);
    }
    code * dim + i
}

pub(crate) fn bar_dim(dim: usize, order: usize, q: usize) -> Option<usize> {
    (order - 1).checked_pow(q as u32)?.checked_mul(dim)
}

/// Estimated bytes for the chain groups C_0..C_{q_max+1}.
pub fn bar_cost(dim: usize, order: usize, q_max: usize) -> Option<usize> {
    let mut total: usize = 0;
    for q in 0..=q_max + 1 {
        let cols = bar_dim(dim, order, q)?;
        total = total.checked_add(cols.checked_mul((dim.min(4) + q + 1).checked_mul(ENTRY_BYTES)?)?)?;
    }
    Some(total)
}

/// Columns of d_q : C_q → C_{q−1} (q ≥ 1).
pub(crate) fn bar_boundary<F: Field>(
    f: &F,
    group: &FiniteGroup,
    act_inv: &[Vec<SparseVec<F::E>>],
    dim: usize,
    q: usize,
) -> Vec<SparseVec<F::E>> {
    let o = group.order();
    let base = o - 1;
    let ncols = bar_dim(dim, o, q).expect("size checked");
    let mut cols = Vec::with_capacity(ncols);
    let mut word = vec![1usize; q];
    let sign = |k: usize| if k % 2 == 0 { f.one() } else { f.neg(&f.one()) };
    for c in 0..ncols {
        let i = c % dim;
        let mut code = c / dim;
        for w in word.iter_mut() {
            *w = code % base + 1;
            code /= base;
        }
        let mut acc: std::collections::BTreeMap<usize, F::E> = Default::default();
        let mut push = |row: usize, v: F::E| {
            let e = acc.entry(row).or_insert_with(|| f.zero());
            *e = f.add(e, &v);
        };
        for (r, v) in &act_inv[word[0]][i] {
            push(bar_index(dim, base, *r, &word[1..]), v.clone());
        }
        let mut merged = Vec::with_capacity(q.saturating_sub(1));
        for k in 1..q {
            let p = group.mul[word[k - 1]][word[k]];
            if p == 0 {
                continue;
            }
            merged.clear();
            merged.extend_from_slice(&word[..k - 1]);
            merged.push(p);
            merged.extend_from_slice(&word[k + 1..]);
            push(bar_index(dim, base, i, &merged), sign(k));
        }
        push(bar_index(dim, base, i, &word[..q - 1]), sign(q));
        cols.push(acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect());
    }
    cols
}

/// dims of H_q for q = 0..=q_max from boundary ranks.
pub(crate) fn bar_dims<F: Field>(
    f: &F,
    group: &FiniteGroup,
    act_inv: &[Vec<SparseVec<F::E>>],
    dim: usize,
    q_max: usize,
) -> Vec<usize> {
    let o = group.order();
    let dims: Vec<usize> = (0..=q_max + 1).map(|q| bar_dim(dim, o, q).unwrap()).collect();
    let mut ranks = vec![0usize; q_max + 2];
    for q in 1..=q_max + 1 {
        if dims[q] == 0 || dims[q - 1] == 0 {
            continue;
        }
        // im d_q ⊆ ker d_{q−1}.
        let bound = dims[q - 1] - ranks[q - 1];
        let cols = bar_boundary(f, group, act_inv, dim, q);
        ranks[q] = reduce_columns(f, dims[q - 1], cols, false, Some(bound)).rank;
    }
    (0..=q_max).map(|q| dims[q] - ranks[q] - ranks[q + 1]).collect()
}

/// H_q(G; M) for q ≤ q_max through the normalized bar complex.
pub fn bar_homology<F: Field>(rep: &FiniteGroupRep<F>, q_max: usize, guard_bytes: usize) -> Result<Vec<usize>, HomError> {
    let f = &rep.module.field;
    let o = rep.group.order();
    let cost = bar_cost(rep.dim(), o, q_max).unwrap_or(usize::MAX);
    if cost > guard_bytes {
        return Err(HomError::Guard(format!("bar complex needs about {cost} bytes, guard is {guard_bytes}")));
    }
    if rep.elements.iter().any(|m| inverse(f, m).is_none()) {
        return Err(HomError::Invalid("element matrix is not invertible".into()));
    }
    let act = inverse_action(f, &rep.group, &rep.elements);
    let dims = bar_dims(f, &rep.group, &act, rep.dim(), q_max);
    let (h0, _) = coinvariants(&rep.module);
    if dims[0] != h0 {
        return Err(HomError::Internal(format!("bar H_0 = {} but coinvariants have dimension {h0}", dims[0])));
    }
    Ok(dims)
}
