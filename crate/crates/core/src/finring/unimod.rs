//! Unimodular vectors and stable-rank certification.

use std::collections::HashMap;

use serde::Serialize;

use super::ring::{Elt, FiniteRing, TwoSidedIdeal};
use super::RingError;

pub const DEFAULT_VECTOR_GUARD: usize = 1 << 22;

/// Membership bitmap of a left ideal (or any subset of the ring).
pub type EltSet = Vec<bool>;

/// Left ideal Σ R·v_i.
pub fn left_ideal(r: &FiniteRing, v: &[Elt]) -> EltSet {
    let mut set = vec![false; r.order()];
    set[r.zero()] = true;
    for &c in v {
        set = add_left_multiples(r, &set, c);
    }
    set
}

fn add_left_multiples(r: &FiniteRing, set: &EltSet, c: Elt) -> EltSet {
    let mult = r.left_multiples(c);
    let mut out = vec![false; r.order()];
    for (x, &present) in set.iter().enumerate() {
        if present {
            for &m in &mult {
                out[r.add(x, m)] = true;
            }
        }
    }
    out
}

/// Witness a with a_1 v_1 + ... + a_n v_n = 1, if v is unimodular.
pub fn is_unimodular(r: &FiniteRing, v: &[Elt]) -> Option<Vec<Elt>> {
    let n = v.len();
    // reach[x] = a witness combination summing to x.
    let mut reach: Vec<Option<Vec<Elt>>> = vec![None; r.order()];
    reach[r.zero()] = Some(vec![r.zero(); n]);
    for (i, &c) in v.iter().enumerate() {
        let cur: Vec<(Elt, Vec<Elt>)> =
            reach.iter().enumerate().filter_map(|(x, w)| w.clone().map(|w| (x, w))).collect();
        for (x, w) in cur {
            for a in r.elements() {
                let y = r.add(x, r.mul(a, c));
                if reach[y].is_none() {
                    let mut w2 = w.clone();
                    w2[i] = a;
                    reach[y] = Some(w2);
                }
            }
        }
    }
    reach[r.one()].clone()
}

pub fn unimodular_fast(r: &FiniteRing, v: &[Elt]) -> bool {
    left_ideal(r, v)[r.one()]
}

/// Σ a_i v_i with coefficients on the left.
pub fn combine(r: &FiniteRing, a: &[Elt], v: &[Elt]) -> Elt {
    a.iter().zip(v).fold(r.zero(), |acc, (&x, &y)| r.add(acc, r.mul(x, y)))
}

/// All vectors in R^n in lexicographic index order.
pub fn all_vectors(r: &FiniteRing, n: usize, guard: usize) -> Result<Vec<Vec<Elt>>, RingError> {
    let total = r.order().checked_pow(n as u32).filter(|&t| t <= guard).ok_or(RingError::Guard {
        what: format!("|R|^{n} vectors"),
        limit: guard,
    })?;
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; n];
    for _ in 0..total {
        out.push(cur.clone());
        for i in (0..n).rev() {
            cur[i] += 1;
            if cur[i] < r.order() {
                break;
            }
            cur[i] = 0;
        }
    }
    Ok(out)
}

pub fn unimodular_vectors(r: &FiniteRing, n: usize, guard: usize) -> Result<Vec<Vec<Elt>>, RingError> {
    Ok(all_vectors(r, n, guard)?.into_iter().filter(|v| unimodular_fast(r, v)).collect())
}

/// Finds b with (c_i + b_i c_n)_{i<n} unimodular; with `within`, every b_i is drawn from that ideal.
pub fn find_shortening(r: &FiniteRing, v: &[Elt], within: Option<&TwoSidedIdeal>) -> Option<Vec<Elt>> {
    let n = v.len();
    assert!(n >= 2);
    let cn = v[n - 1];
    let allowed: Vec<Elt> = match within {
        Some(q) => q.elements.clone(),
        None => r.elements().collect(),
    };
    // Choices for b, deduplicated by b·c_n, preferring b = 0 (smallest index).
    let mut by_value: Vec<(Elt, Elt)> = Vec::new();
    let mut seen = vec![false; r.order()];
    for &b in &allowed {
        let bc = r.mul(b, cn);
        if !seen[bc] {
            seen[bc] = true;
            by_value.push((bc, b));
        }
    }
    // Dynamic programming over positions, keyed by the left ideal generated so far.
    let mut states: Vec<(EltSet, Vec<Elt>)> = vec![(left_ideal(r, &[]), Vec::new())];
    for &ci in v.iter().take(n - 1) {
        let mut next: Vec<(EltSet, Vec<Elt>)> = Vec::new();
        let mut index: HashMap<EltSet, ()> = HashMap::new();
        for (ideal, bs) in &states {
            if ideal[r.one()] {
                let mut bs2 = bs.clone();
                bs2.push(r.zero());
                if index.insert(ideal.clone(), ()).is_none() {
                    next.push((ideal.clone(), bs2));
                }
                continue;
            }
            for &(bc, b) in &by_value {
                let u = r.add(ci, bc);
                let j = add_left_multiples(r, ideal, u);
                if index.insert(j.clone(), ()).is_none() {
                    let mut bs2 = bs.clone();
                    bs2.push(b);
                    next.push((j, bs2));
                }
            }
        }
        states = next;
    }
    states.into_iter().find(|(ideal, _)| ideal[r.one()]).map(|(_, bs)| bs)
}

/// Applies a shortening witness.
pub fn shorten(r: &FiniteRing, v: &[Elt], b: &[Elt]) -> Vec<Elt> {
    let cn = *v.last().unwrap();
    v[..v.len() - 1].iter().zip(b).map(|(&c, &bi)| r.add(c, r.mul(bi, cn))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SrWitness {
    pub vector: Vec<Elt>,
    pub b: Vec<Elt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SrCertificate {
    pub ring: String,
    pub r: usize,
    /// The condition is checked for lengths r..=n_max only.
    pub n_max: usize,
    pub vectors_checked: usize,
    pub witnesses: Vec<SrWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub enum SrVerdict {
    Certified(SrCertificate),
    Counterexample { n: usize, vector: Vec<Elt> },
}

impl SrVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SrVerdict::Certified(_))
    }
}

pub fn certify_stable_rank(r: &FiniteRing, rr: usize, n_max: usize, guard: usize) -> Result<SrVerdict, RingError> {
    certify_inner(r, rr, n_max, guard, true)
}

/// Like [`certify_stable_rank`] but without storing per-vector witnesses.
pub fn check_stable_rank(r: &FiniteRing, rr: usize, n_max: usize, guard: usize) -> Result<SrVerdict, RingError> {
    certify_inner(r, rr, n_max, guard, false)
}

fn certify_inner(r: &FiniteRing, rr: usize, n_max: usize, guard: usize, keep: bool) -> Result<SrVerdict, RingError> {
    if rr < 2 {
        return Err(RingError::Invalid("stable rank index must be at least 2".into()));
    }
    let mut witnesses = Vec::new();
    let mut count = 0;
    for n in rr..=n_max {
        for v in all_vectors(r, n, guard)? {
            if !unimodular_fast(r, &v) {
                continue;
            }
            count += 1;
            match find_shortening(r, &v, None) {
                Some(b) => {
                    if keep {
                        witnesses.push(SrWitness { vector: v, b });
                    }
                }
                None => return Ok(SrVerdict::Counterexample { n, vector: v }),
            }
        }
    }
    Ok(SrVerdict::Certified(SrCertificate {
        ring: r.label().to_string(),
        r: rr,
        n_max,
        vectors_checked: count,
        witnesses,
    }))
}
