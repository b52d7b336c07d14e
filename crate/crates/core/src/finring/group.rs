//! Enumerated matrix groups over finite rings and the finite-level K_1.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use super::ring::{additive_closure, Elt, FiniteRing, TwoSidedIdeal};
use super::rmat::RMat;
use super::unimod::all_vectors;
use super::RingError;

pub const DEFAULT_GROUP_GUARD: usize = 1 << 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    GL,
    SL,
    EL,
    ElRelative,
    GlCongruence,
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub ring: Arc<FiniteRing>,
    pub n: usize,
    pub kind: GroupKind,
    pub generators: Vec<RMat>,
    pub elements: Vec<RMat>,
    index: HashMap<RMat, usize>,
}

impl MatrixGroup {
    fn from_elements(ring: &Arc<FiniteRing>, n: usize, kind: GroupKind, generators: Vec<RMat>, mut elements: Vec<RMat>) -> Self {
        elements.sort();
        let index = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MatrixGroup { ring: ring.clone(), n, kind, generators, elements, index }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &RMat) -> bool {
        self.index.contains_key(m)
    }

    pub fn position(&self, m: &RMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Closure under products and inverses, checked directly.
    pub fn verify_closed(&self) -> bool {
        let r = self.ring.as_ref();
        if !self.contains(&RMat::identity(r, self.n)) {
            return false;
        }
        self.elements.iter().all(|a| self.generators.iter().all(|g| self.contains(&g.mul(r, a))))
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.elements.iter().all(|m| other.contains(m))
    }

    /// Whether g H g^{-1} = H for every generator g of `ambient`.
    pub fn is_normal_in(&self, ambient: &MatrixGroup) -> bool {
        let r = self.ring.as_ref();
        ambient.generators.iter().all(|g| {
            let gi = power_inverse(r, g);
            self.generators.iter().all(|h| self.contains(&g.mul(r, h).mul(r, &gi)))
        })
    }
}

/// Inverse of an element of finite order, as its last nonidentity power.
pub fn power_inverse(r: &FiniteRing, g: &RMat) -> RMat {
    let id = RMat::identity(r, g.rows);
    let mut prev = id.clone();
    let mut cur = g.clone();
    while cur != id {
        prev = cur.clone();
        cur = cur.mul(r, g);
    }
    prev
}

/// The group generated by `gens`, by breadth-first closure.
pub fn closure(r: &FiniteRing, n: usize, gens: &[RMat], guard: usize) -> Result<Vec<RMat>, RingError> {
    let id = RMat::identity(r, n);
    let mut seen: HashSet<RMat> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let a = out[head].clone();
        head += 1;
        for g in gens {
            let b = g.mul(r, &a);
            if seen.insert(b.clone()) {
                if out.len() >= guard {
                    return Err(RingError::Guard { what: format!("matrix group of size {n}"), limit: guard });
                }
                out.push(b);
            }
        }
    }
    Ok(out)
}

pub fn elementary(r: &FiniteRing, n: usize, i: usize, j: usize, a: Elt) -> RMat {
    let mut m = RMat::identity(r, n);
    m.set(i, j, a);
    m
}

/// e_ij^a for i ≠ j and a in an additive generating set of `entries`.
fn elementary_generators(r: &FiniteRing, n: usize, entries: &[Elt]) -> Vec<RMat> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for &a in entries {
                    gens.push(elementary(r, n, i, j, a));
                }
            }
        }
    }
    gens
}

/// Elementary generators e_ij^a of EL_n(R), a over additive generators of R.
pub fn el_generators(r: &FiniteRing, n: usize) -> Vec<RMat> {
    elementary_generators(r, n, &r.additive_generators())
}

/// Greedy additive generators of a subgroup given by its elements.
fn additive_basis(r: &FiniteRing, elements: &[Elt]) -> Vec<Elt> {
    let mut gens = Vec::new();
    let mut span = BTreeSet::from([r.zero()]);
    for &a in elements {
        if !span.contains(&a) {
            gens.push(a);
            span = additive_closure(r, span.iter().copied().chain([a]));
        }
    }
    gens
}

/// Generators of GL_n: elementary matrices and diag(u, 1, ..., 1) for units u.
///
/// Every finite ring satisfies (SR_2), so this generates all of GL_n.
pub fn gl_generators(r: &FiniteRing, n: usize) -> Vec<RMat> {
    let mut gens = elementary_generators(r, n, &r.additive_generators());
    for u in r.units() {
        if u != r.one() {
            let mut m = RMat::identity(r, n);
            m.set(0, 0, u);
            gens.push(m);
        }
    }
    gens
}

/// Greedy generating set of a subgroup given by its elements.
fn greedy_generators(r: &FiniteRing, n: usize, elements: &[RMat], guard: usize) -> Result<Vec<RMat>, RingError> {
    let mut gens: Vec<RMat> = Vec::new();
    let mut span: HashSet<RMat> = HashSet::from([RMat::identity(r, n)]);
    for m in elements {
        if !span.contains(m) {
            gens.push(m.clone());
            span = closure(r, n, &gens, guard)?.into_iter().collect();
        }
    }
    Ok(gens)
}

pub fn generate_group(
    ring: &Arc<FiniteRing>,
    n: usize,
    kind: GroupKind,
    q: Option<&TwoSidedIdeal>,
    guard: usize,
) -> Result<MatrixGroup, RingError> {
    let r = ring.as_ref();
    if n == 0 {
        return Err(RingError::Invalid("matrix size must be positive".into()));
    }
    let need_q = || q.ok_or_else(|| RingError::Invalid(format!("{kind:?} needs an ideal")));
    match kind {
        GroupKind::EL => {
            let gens = elementary_generators(r, n, &r.additive_generators());
            let el = closure(r, n, &gens, guard)?;
            Ok(MatrixGroup::from_elements(ring, n, kind, gens, el))
        }
        GroupKind::GL => {
            let gens = gl_generators(r, n);
            let gl = closure(r, n, &gens, guard)?;
            Ok(MatrixGroup::from_elements(ring, n, kind, gens, gl))
        }
        GroupKind::SL => {
            if !r.is_commutative() {
                return Err(RingError::NotCommutative);
            }
            let gl = generate_group(ring, n, GroupKind::GL, None, guard)?;
            let sl: Vec<RMat> = gl.elements.into_iter().filter(|m| m.det(r) == r.one()).collect();
            let gens = greedy_generators(r, n, &sl, guard)?;
            Ok(MatrixGroup::from_elements(ring, n, kind, gens, sl))
        }
        GroupKind::GlCongruence => {
            let q = need_q()?;
            let gl = generate_group(ring, n, GroupKind::GL, None, guard)?;
            let id = RMat::identity(r, n);
            let k: Vec<RMat> = gl
                .elements
                .into_iter()
                .filter(|m| m.data.iter().zip(&id.data).all(|(&a, &b)| q.contains(r.sub(a as Elt, b as Elt))))
                .collect();
            let gens = greedy_generators(r, n, &k, guard)?;
            Ok(MatrixGroup::from_elements(ring, n, kind, gens, k))
        }
        GroupKind::ElRelative => {
            let q = need_q()?;
            let el_gens = elementary_generators(r, n, &r.additive_generators());
            let mut gens = elementary_generators(r, n, &additive_basis(r, &q.elements));
            // Normal closure: add conjugates by EL generators until stable.
            loop {
                let h: HashSet<RMat> = closure(r, n, &gens, guard)?.into_iter().collect();
                let mut extra = Vec::new();
                for g in &el_gens {
                    let gi = power_inverse(r, g);
                    for x in &gens {
                        let c = g.mul(r, x).mul(r, &gi);
                        if !h.contains(&c) && !extra.contains(&c) {
                            extra.push(c);
                        }
                    }
                }
                if extra.is_empty() {
                    let mut els: Vec<RMat> = h.into_iter().collect();
                    els.sort();
                    return Ok(MatrixGroup::from_elements(ring, n, kind, gens, els));
                }
                gens.extend(extra);
            }
        }
    }
}

/// All invertible n × n matrices, by testing bijectivity of every matrix on R^n.
pub fn brute_force_invertible(r: &FiniteRing, n: usize, guard: usize) -> Result<Vec<RMat>, RingError> {
    let entries = all_vectors(r, n * n, guard)?;
    let vecs = all_vectors(r, n, guard)?;
    let mut out = Vec::new();
    let mut image = HashSet::with_capacity(vecs.len());
    for e in entries {
        let m = RMat { rows: n, cols: n, data: e.iter().map(|&x| x as u16).collect() };
        image.clear();
        if vecs.iter().all(|v| image.insert(m.apply(r, v))) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Invariant factors d_1 | d_2 | ... (all > 1) of a finite abelian group from its multiplication table.
pub fn abelian_invariants(table: &[Vec<usize>], identity: usize) -> Vec<usize> {
    let order = table.len();
    let power = |x: usize, k: usize| (0..k).fold(identity, |acc, _| table[acc][x]);
    let mut primes = Vec::new();
    let mut m = order;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // exps_by_prime[p] = exponents of the cyclic p-parts, descending.
    let mut parts: Vec<(usize, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut counts = vec![0u32]; // log_p |G[p^k]|
        let mut k = 1u32;
        loop {
            let pk = p.pow(k);
            let c = (0..order).filter(|&x| power(x, pk) == identity).count();
            let lg = (c as f64).log(p as f64).round() as u32;
            if lg == *counts.last().unwrap() {
                break;
            }
            counts.push(lg);
            k += 1;
        }
        // #{i : e_i ≥ k} = counts[k] - counts[k-1].
        let ge: Vec<u32> = (1..counts.len()).map(|k| counts[k] - counts[k - 1]).collect();
        let cnt = ge[0] as usize;
        let mut exps = vec![0u32; cnt];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = ge.iter().filter(|&&g| g as usize > i).count() as u32;
        }
        parts.push((p, exps));
    }
    let len = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out = vec![1usize; len];
    for (p, exps) in &parts {
        // Largest exponent goes to the last factor.
        for (i, &e) in exps.iter().enumerate() {
            out[len - 1 - i] *= p.pow(e);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub subgroup: String,
    pub n: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct K1Report {
    pub ring: String,
    pub r: usize,
    pub gl_order: usize,
    pub el_order: usize,
    pub el_normal: bool,
    pub quotient_abelian: bool,
    /// Invariant factors of GL_r(R)/EL_r(R); empty for the trivial group.
    pub invariants: Vec<usize>,
    /// GL^K_{r+1} ∩ GL_r = GL^K_r, for K the whole group, 0, and (commutative R) the determinant-one part.
    pub level_checks: Vec<LevelCheck>,
}

/// Upper-left embedding GL_n → GL_{n+1}.
fn embed(r: &FiniteRing, m: &RMat) -> RMat {
    m.pad_identity(r, 1)
}

pub fn k1_finite(ring: &Arc<FiniteRing>, rr: usize, guard: usize) -> Result<K1Report, RingError> {
    let r = ring.as_ref();
    let gl = generate_group(ring, rr, GroupKind::GL, None, guard)?;
    let el = generate_group(ring, rr, GroupKind::EL, None, guard)?;
    let el_normal = el.is_normal_in(&gl);
    // Cosets g·EL.
    let mut coset = vec![usize::MAX; gl.order()];
    let mut reps = Vec::new();
    for (i, g) in gl.elements.iter().enumerate() {
        if coset[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(g.clone());
        for h in &el.elements {
            coset[gl.position(&g.mul(r, h)).unwrap()] = c;
        }
    }
    let k = reps.len();
    let table: Vec<Vec<usize>> = (0..k)
        .map(|a| (0..k).map(|b| coset[gl.position(&reps[a].mul(r, &reps[b])).unwrap()]).collect())
        .collect();
    let quotient_abelian = (0..k).all(|a| (0..k).all(|b| table[a][b] == table[b][a]));
    let identity = coset[gl.position(&RMat::identity(r, rr)).unwrap()];
    let invariants = if quotient_abelian { abelian_invariants(&table, identity) } else { Vec::new() };

    let mut level_checks = Vec::new();
    let big = rr + 1;
    if let (Ok(gl1), Ok(el1)) =
        (generate_group(ring, big, GroupKind::GL, None, guard), generate_group(ring, big, GroupKind::EL, None, guard))
    {
        let intersect = |upper: &MatrixGroup, lower: &MatrixGroup| {
            let from_upper = upper
                .elements
                .iter()
                .filter(|m| (0..big).all(|i| {
                    let e = if i == rr { r.one() } else { r.zero() };
                    m.get(i, rr) == e && m.get(rr, i) == e
                }))
                .count();
            from_upper == lower.order() && lower.elements.iter().all(|m| upper.contains(&embed(r, m)))
        };
        level_checks.push(LevelCheck { subgroup: "GL".into(), n: rr, holds: intersect(&gl1, &gl) });
        level_checks.push(LevelCheck { subgroup: "EL".into(), n: rr, holds: intersect(&el1, &el) });
        if r.is_commutative() {
            if let (Ok(sl), Ok(sl1)) = (
                generate_group(ring, rr, GroupKind::SL, None, guard),
                generate_group(ring, big, GroupKind::SL, None, guard),
            ) {
                level_checks.push(LevelCheck { subgroup: "SL".into(), n: rr, holds: intersect(&sl1, &sl) });
            }
        }
    }
    Ok(K1Report {
        ring: r.label().to_string(),
        r: rr,
        gl_order: gl.order(),
        el_order: el.order(),
        el_normal,
        quotient_abelian,
        invariants,
        level_checks,
    })
}
