//! Systems from FI-modules on OSim_n and from VIC-modules on OBases(R^{n,r}).

use std::collections::HashMap;
use std::sync::Arc;

use super::validate::{CayleyTable, EquivariantStructure};
use super::{CoeffError, CoefficientSystem, SystemShortExactSequence};
use crate::exactlin::{Field, Mat};
use crate::finring::group::gl_generators;
use crate::finring::unimod::check_stable_rank;
use crate::finring::{FiniteRing, RMat};
use crate::funmod::{fi_map, fi_shift_derive, vic_map, TruncatedFIModule, TruncatedVICModule, VicMorphism};
use crate::scomplex::{osim, GroupActionOnSS, OBases, SemisimplicialSet};

/// Largest group for which the full group law is checked cell by cell.
pub const DEFAULT_GROUP_GUARD: usize = 200;

#[derive(Clone, Debug)]
pub struct BuiltSystem<F: Field> {
    pub system: CoefficientSystem<F>,
    pub equivariance: EquivariantStructure<F>,
}

fn complement(n: usize, seq: &[usize]) -> Vec<usize> {
    (0..=n).filter(|v| !seq.contains(v)).collect()
}

/// 1-based positions of `from` inside `to` after applying `g`.
fn positions(from: &[usize], to: &[usize], g: impl Fn(usize) -> usize) -> Vec<usize> {
    from.iter().map(|&a| to.iter().position(|&b| b == g(a)).unwrap() + 1).collect()
}

struct FiCache<'a, F: Field> {
    m: &'a TruncatedFIModule<F>,
    maps: HashMap<(Vec<usize>, usize), Mat<F::E>>,
}

impl<F: Field> FiCache<'_, F> {
    fn get(&mut self, f: Vec<usize>, target: usize) -> Result<Mat<F::E>, CoeffError> {
        if let Some(m) = self.maps.get(&(f.clone(), target)) {
            return Ok(m.clone());
        }
        let m = fi_map(self.m, &f, target)?;
        self.maps.insert((f, target), m.clone());
        Ok(m)
    }
}

/// F_{M,n}(i_0..i_k) = M([n] ∖ {i_0..i_k}) on OSim_n, with its S_{n+1}-action.
pub fn fi_system<F: Field>(m: &TruncatedFIModule<F>, n: usize) -> Result<BuiltSystem<F>, CoeffError> {
    fi_system_on(m, n, Arc::new(osim(n, None)), DEFAULT_GROUP_GUARD)
}

/// As [`fi_system`] on a given copy of OSim_n; the group law is checked when (n+1)! ≤ `group_guard`.
pub fn fi_system_on<F: Field>(
    m: &TruncatedFIModule<F>,
    n: usize,
    base: Arc<SemisimplicialSet>,
    group_guard: usize,
) -> Result<BuiltSystem<F>, CoeffError> {
    if m.truncation < n + 1 {
        return Err(CoeffError::Truncation { needed: n + 1, have: m.truncation });
    }
    let field = m.field.clone();
    let mut cache = FiCache { m, maps: HashMap::new() };
    let all: Vec<usize> = (0..=n).collect();
    let mut dims = vec![vec![m.dims[n + 1]]];
    let mut faces = vec![vec![Vec::new()]];
    for k in 0..base.levels() {
        let seqs = base.sequences(k).ok_or(CoeffError::Invalid("OSim must be an ordering".into()))?;
        let mut dl = Vec::with_capacity(seqs.len());
        let mut fl = Vec::with_capacity(seqs.len());
        for seq in seqs {
            let s = complement(n, seq);
            dl.push(m.dims[s.len()]);
            let mut fs = Vec::with_capacity(seq.len());
            for i in 0..seq.len() {
                let mut t = seq.clone();
                t.remove(i);
                let s2 = complement(n, &t);
                fs.push(cache.get(positions(&s, &s2, |a| a), s2.len())?);
            }
            if k == 0 {
                fs = vec![cache.get(positions(&s, &all, |a| a), n + 1)?];
            }
            fl.push(fs);
        }
        dims.push(dl);
        faces.push(fl);
    }
    let system = CoefficientSystem::new(field.clone(), base.clone(), true, dims, faces)?;
    let gens: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut p: Vec<usize> = (0..=n).collect();
            p.swap(i, i + 1);
            p
        })
        .collect();
    let action = GroupActionOnSS::from_vertex_maps(&base, &gens)?;
    let mut phi = Vec::with_capacity(gens.len());
    for g in &gens {
        let mut per = vec![vec![cache.get(positions(&all, &all, |a| g[a]), n + 1)?]];
        for k in 0..base.levels() {
            let mut lvl = Vec::new();
            for seq in base.sequences(k).unwrap() {
                let s = complement(n, seq);
                let gs: Vec<usize> = seq.iter().map(|&v| g[v]).collect();
                let s2 = complement(n, &gs);
                lvl.push(cache.get(positions(&s, &s2, |a| g[a]), s2.len())?);
            }
            per.push(lvl);
        }
        phi.push(per);
    }
    let table = CayleyTable::enumerate(
        (0..=n).collect::<Vec<usize>>(),
        &gens,
        |g, h| h.iter().map(|&x| g[x]).collect(),
        group_guard,
    )
    .map(|t| t.0);
    Ok(BuiltSystem { system, equivariance: EquivariantStructure { action, phi, table } })
}

/// 0 → F_{M,n} → F_{ΣM,n} → F_{DM,n} → 0 on OSim_n.
pub fn fi_sequence_system<F: Field>(m: &TruncatedFIModule<F>, n: usize) -> Result<SystemShortExactSequence<F>, CoeffError> {
    if m.truncation < n + 2 {
        return Err(CoeffError::Truncation { needed: n + 2, have: m.truncation });
    }
    let sd = fi_shift_derive(m)?;
    let base = Arc::new(osim(n, None));
    let a = fi_system_on(m, n, base.clone(), 0)?.system;
    let b = fi_system_on(&sd.shift, n, base.clone(), 0)?.system;
    let c = fi_system_on(&sd.derived, n, base.clone(), 0)?.system;
    let mut inj = Vec::new();
    let mut surj = Vec::new();
    for l in 0..a.cell_levels() {
        let count = a.dims[l].len();
        inj.push((0..count).map(|_| sd.witnesses[n + 1 - l].inclusion.clone()).collect());
        surj.push((0..count).map(|_| sd.witnesses[n + 1 - l].projection.clone()).collect());
    }
    SystemShortExactSequence::new(a, b, c, inj, surj)
}

/// Basis of the complement C of a simplex, with the inverse frame giving coordinates.
struct Frame {
    basis: RMat,
    inverse: RMat,
}

fn coords(r: &FiniteRing, fr: &Frame, v: &[usize], c: usize) -> Vec<usize> {
    fr.inverse.apply(r, v)[..c].to_vec()
}

/// G_{M,n,r}(x_0..x_k; C) = M(C) on OBases(R^{n,r}), with its GL_{n+r}(R)-action.
///
/// The group law is checked cell by cell when |GL_{n+r}(R)| ≤ `group_guard`.
pub fn vic_system<F: Field>(
    m: &TruncatedVICModule<F>,
    ob: &OBases,
    group_guard: usize,
    guard: usize,
) -> Result<BuiltSystem<F>, CoeffError> {
    let ring = ob.bases.ring.clone();
    let r = ring.as_ref();
    let big_n = ob.rank();
    if !Arc::ptr_eq(&m.ring, &ring) && (m.ring.label() != ring.label() || m.ring.order() != ring.order()) {
        return Err(CoeffError::Invalid("module and complex are over different rings".into()));
    }
    if m.truncation < big_n {
        return Err(CoeffError::Truncation { needed: big_n, have: m.truncation });
    }
    if !check_stable_rank(r, ob.r, big_n, guard)?.is_certified() {
        return Err(CoeffError::Precondition(format!("stable rank condition SR_{} fails", ob.r)));
    }
    let x = &ob.ss;
    let empty = Frame { basis: RMat::identity(r, big_n), inverse: RMat::identity(r, big_n) };
    let mut frames: Vec<Vec<Frame>> = vec![vec![empty]];
    for k in 0..x.levels() {
        let mut lvl = Vec::with_capacity(x.count(k));
        for seq in x.sequences(k).unwrap() {
            let fr = ob.bases.frame(seq, ob.r).map_err(|e| CoeffError::Invalid(format!("no frame for {seq:?}: {e}")))?;
            let c = big_n - k - 1;
            lvl.push(Frame { basis: RMat::from_cols(big_n, &fr.complement_basis_cols(c)), inverse: fr.inverse });
        }
        frames.push(lvl);
    }
    let rank_of = |l: usize| big_n - l;
    let mut maps: HashMap<VicMorphism, Mat<F::E>> = HashMap::new();
    let mut dims = vec![vec![m.dims[big_n]]];
    let mut faces = vec![vec![Vec::new()]];
    for k in 0..x.levels() {
        let l = k + 1;
        let c = rank_of(l);
        let mut dl = Vec::with_capacity(x.count(k));
        let mut fl = Vec::with_capacity(x.count(k));
        for s in 0..x.count(k) {
            dl.push(m.dims[c]);
            let verts = ob.vertices_of(k, s);
            let mut fs = Vec::with_capacity(k + 1);
            for (i, v) in verts.iter().enumerate() {
                let t = if k == 0 { 0 } else { x.face(k, s, i) };
                let target = &frames[l - 1][t];
                let cols: Vec<Vec<usize>> = (0..c).map(|j| coords(r, target, &frames[l][s].basis.col(j), c + 1)).collect();
                let phi = VicMorphism {
                    f: RMat::from_cols(c + 1, &cols),
                    c_basis: RMat::from_cols(c + 1, &[coords(r, target, &v.x, c + 1)]),
                };
                if !maps.contains_key(&phi) {
                    let mat = vic_map(m, &phi)?;
                    maps.insert(phi.clone(), mat);
                }
                fs.push(maps[&phi].clone());
            }
            fl.push(fs);
        }
        dims.push(dl);
        faces.push(fl);
    }
    let base = Arc::new(x.clone());
    let system = CoefficientSystem::new(m.field.clone(), base.clone(), true, dims, faces)?;
    let gens = gl_generators(r, big_n);
    let action = ob.action(&gens)?;
    let mut rho_cache: HashMap<RMat, Mat<F::E>> = HashMap::new();
    let mut rho = |h: RMat| -> Mat<F::E> { rho_cache.entry(h).or_insert_with_key(|h| m.rho(h)).clone() };
    let mut phi = Vec::with_capacity(gens.len());
    for (gi, g) in gens.iter().enumerate() {
        let mut per = vec![vec![rho(g.clone())]];
        for k in 0..x.levels() {
            let l = k + 1;
            let c = rank_of(l);
            let mut lvl = Vec::with_capacity(x.count(k));
            for s in 0..x.count(k) {
                let t = action.perms[gi][k][s];
                let img = g.mul(r, &frames[l][s].basis);
                let cols: Vec<Vec<usize>> = (0..c).map(|j| coords(r, &frames[l][t], &img.col(j), c)).collect();
                lvl.push(rho(RMat::from_cols(c, &cols)));
            }
            per.push(lvl);
        }
        phi.push(per);
    }
    let table = CayleyTable::enumerate(RMat::identity(r, big_n), &gens, |a, b| a.mul(r, b), group_guard).map(|t| t.0);
    Ok(BuiltSystem { system, equivariance: EquivariantStructure { action, phi, table } })
}
