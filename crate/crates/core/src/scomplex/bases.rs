//! The complex of split partial bases of R^n and its truncated large ordering.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::complex::SimplicialComplex;
use super::ss::{large_ordering, GroupActionOnSS, SemisimplicialSet};
use super::ScError;
use crate::finring::group::power_inverse;
use crate::finring::reduce::{complements_of, covector_eval, partial_basis_frame, SplitFrame};
use crate::finring::unimod::{all_vectors, unimodular_fast};
use crate::finring::{Elt, FiniteRing, QuotientRing, RMat};

/// A splitting R^n = ker π ⊕ xR with π(x) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasesVertex {
    pub x: Vec<Elt>,
    pub pi: Vec<Elt>,
}

#[derive(Clone, Debug)]
pub struct BasesComplex {
    pub ring: Arc<FiniteRing>,
    pub n: usize,
    pub vertices: Vec<BasesVertex>,
    pub complex: SimplicialComplex,
    index: HashMap<BasesVertex, usize>,
}

/// (x_i; π_i) and (x_j; π_j) are joined when π_j(x_i) = 0 = π_i(x_j).
pub fn compatible(r: &FiniteRing, a: &BasesVertex, b: &BasesVertex) -> bool {
    covector_eval(r, &a.pi, &b.x) == r.zero() && covector_eval(r, &b.pi, &a.x) == r.zero()
}

/// Vertices in lexicographic order of (x, π); simplices up to dimension `dim_cap` (default n−1).
pub fn bases_complex(ring: &Arc<FiniteRing>, n: usize, dim_cap: Option<usize>, guard: usize) -> Result<BasesComplex, ScError> {
    let r = ring.as_ref();
    let mut vertices = Vec::new();
    if n > 0 {
        for x in all_vectors(r, n, guard)? {
            if !unimodular_fast(r, &x) {
                continue;
            }
            for c in complements_of(r, &x, guard)? {
                vertices.push(BasesVertex { x: x.clone(), pi: c.pi });
            }
        }
    }
    let cap = dim_cap.unwrap_or(n.saturating_sub(1));
    let complex = SimplicialComplex::flag_complex(vertices.len(), |i, j| compatible(r, &vertices[i], &vertices[j]), cap);
    let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    Ok(BasesComplex { ring: ring.clone(), n, vertices, complex, index })
}

impl BasesComplex {
    pub fn vertex_id(&self, v: &BasesVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// g·(x; π) = (g x; π g^{-1}).
    pub fn act(&self, g: &RMat, g_inv: &RMat, v: &BasesVertex) -> BasesVertex {
        let r = self.ring.as_ref();
        BasesVertex { x: g.apply(r, &v.x), pi: g_inv.covector_apply(r, &v.pi) }
    }

    pub fn vertex_map(&self, g: &RMat) -> Vec<usize> {
        let gi = power_inverse(&self.ring, g);
        self.vertices.iter().map(|v| self.vertex_id(&self.act(g, &gi, v)).expect("action preserves splittings")).collect()
    }

    /// Elements of C = ∩ ker π_i, the complement in the (set; C) form of a simplex.
    pub fn intersection_complement(&self, simplex: &[usize], guard: usize) -> Result<Vec<Vec<Elt>>, ScError> {
        let r = self.ring.as_ref();
        Ok(all_vectors(r, self.n, guard)?
            .into_iter()
            .filter(|v| simplex.iter().all(|&i| covector_eval(r, &self.vertices[i].pi, v) == r.zero()))
            .collect())
    }

    /// Frame G ∈ EL_n with G e_{n-t} = x_t and G(span(e_1..e_c)) = C.
    pub fn frame(&self, simplex: &[usize], rr: usize) -> Result<SplitFrame, ScError> {
        let xs: Vec<Vec<Elt>> = simplex.iter().map(|&i| self.vertices[i].x.clone()).collect();
        let pis: Vec<Vec<Elt>> = simplex.iter().map(|&i| self.vertices[i].pi.clone()).collect();
        Ok(partial_basis_frame(&self.ring, &xs, &pis, rr)?)
    }

    /// The map φ(y; D) = (y; D ∩ C) from the link of σ to Bases(C), with C identified with R^c through
    /// a frame; checked to be a simplicial isomorphism onto Bases(R^c).
    pub fn link_isomorphism(&self, simplex: &[usize], rr: usize, guard: usize) -> Result<LinkIsomorphism, ScError> {
        let r = self.ring.as_ref();
        let link = self.complex.link(simplex)?;
        let c = self.n - simplex.len();
        let frame = self.frame(simplex, rr)?;
        let target_cap = self.complex.cap.map(|k| k.saturating_sub(simplex.len()));
        let target = bases_complex(&self.ring, c, target_cap.or(Some(c.saturating_sub(1))), guard)?;
        let mut vertex_map = HashMap::new();
        for &v in &link.vertices {
            let bv = &self.vertices[v];
            let y = frame.inverse.apply(r, &bv.x);
            if y[c..].iter().any(|&e| e != r.zero()) {
                return Err(ScError::Invalid("link vertex outside the complement".into()));
            }
            let p = frame.matrix.covector_apply(r, &bv.pi);
            let img = BasesVertex { x: y[..c].to_vec(), pi: p[..c].to_vec() };
            let id = target.vertex_id(&img).ok_or_else(|| ScError::Invalid("image is not a splitting".into()))?;
            vertex_map.insert(v, id);
        }
        let mut bijective = vertex_map.len() == target.vertices.len()
            && vertex_map.values().collect::<std::collections::BTreeSet<_>>().len() == target.vertices.len();
        let levels = link.simplices.len().max(target.complex.simplices.len());
        for k in 0..levels {
            if link.count(k) != target.complex.count(k) {
                bijective = false;
                break;
            }
            for s in link.simplices.get(k).into_iter().flatten() {
                let img: Vec<usize> = s.iter().map(|v| vertex_map[v]).collect();
                if !target.complex.contains(&img) {
                    bijective = false;
                }
            }
        }
        Ok(LinkIsomorphism { vertex_map, target, is_isomorphism: bijective })
    }
}

#[derive(Clone, Debug)]
pub struct LinkIsomorphism {
    pub vertex_map: HashMap<usize, usize>,
    pub target: BasesComplex,
    pub is_isomorphism: bool,
}

/// The large ordering of Bases(R^{n+r}), truncated to levels 0..=n.
#[derive(Clone, Debug)]
pub struct OBases {
    pub n: usize,
    pub r: usize,
    pub bases: BasesComplex,
    pub ss: SemisimplicialSet,
}

pub fn obases(ring: &Arc<FiniteRing>, n: usize, r: usize, guard: usize) -> Result<OBases, ScError> {
    let bases = bases_complex(ring, n + r, Some(n), guard)?;
    let ss = large_ordering(&bases.complex, Some(n)).truncate(n);
    Ok(OBases { n, r, bases, ss })
}

impl OBases {
    pub fn rank(&self) -> usize {
        self.n + self.r
    }

    pub fn vertices_of(&self, k: usize, s: usize) -> Vec<&BasesVertex> {
        self.ss.sequence(k, s).unwrap().iter().map(|&v| &self.bases.vertices[v]).collect()
    }

    /// Action of the given matrices (as generators) on every level.
    pub fn action(&self, gens: &[RMat]) -> Result<GroupActionOnSS, ScError> {
        let maps: Vec<Vec<usize>> = gens.iter().map(|g| self.bases.vertex_map(g)).collect();
        GroupActionOnSS::from_vertex_maps(&self.ss, &maps)
    }

    /// Complement of a k-simplex is free of rank N−k−1: a frame exists and |C| = |R|^{N-k-1}.
    pub fn complement_is_free(&self, k: usize, s: usize, guard: usize) -> Result<bool, ScError> {
        let seq = self.ss.sequence(k, s).unwrap().to_vec();
        let frame = self.bases.frame(&seq, self.r)?;
        let c = self.bases.intersection_complement(&seq, guard)?;
        let expect = self.bases.ring.order().pow((self.rank() - k - 1) as u32);
        let basis_in_c = frame.complement_basis_cols(self.rank() - k - 1).iter().all(|b| {
            seq.iter().all(|&i| covector_eval(&self.bases.ring, &self.bases.vertices[i].pi, b) == self.bases.ring.zero())
        });
        Ok(c.len() == expect && basis_in_c)
    }

    /// Level maps induced by a ring projection R → R/q into the OBases of the quotient.
    pub fn project(&self, q: &QuotientRing, target: &OBases) -> Result<Vec<Vec<usize>>, ScError> {
        let vmap: Vec<usize> = self
            .bases
            .vertices
            .iter()
            .map(|v| {
                let img = BasesVertex {
                    x: v.x.iter().map(|&e| q.projection[e]).collect(),
                    pi: v.pi.iter().map(|&e| q.projection[e]).collect(),
                };
                target.bases.vertex_id(&img).ok_or_else(|| ScError::Invalid("projection is not a splitting".into()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        for k in 0..self.ss.levels() {
            let mut m = Vec::with_capacity(self.ss.count(k));
            for seq in self.ss.sequences(k).unwrap() {
                let img: Vec<usize> = seq.iter().map(|&v| vmap[v]).collect();
                m.push(target.ss.find(&img).ok_or_else(|| ScError::Invalid("projected simplex missing".into()))?);
            }
            out.push(m);
        }
        Ok(out)
    }
}
