//! Semisimplicial sets given by face lists, orderings, forward links, group actions and quotients.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::complex::SimplicialComplex;
use super::ScError;

/// Levels 0..=top of a semisimplicial set. Each k-simplex stores its faces d_0..d_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimplicialSet {
    faces: Vec<Vec<Vec<usize>>>,
    /// Vertex sequences, present when the set is an ordering of a complex.
    seqs: Option<Vec<Vec<Vec<usize>>>>,
    index: Option<Vec<HashMap<Vec<usize>, usize>>>,
    /// Levels above this were not generated.
    pub cap: Option<usize>,
}

impl SemisimplicialSet {
    /// Builds from explicit face lists, checking ranges and the semisimplicial identities.
    pub fn from_faces(faces: Vec<Vec<Vec<usize>>>, cap: Option<usize>) -> Result<Self, ScError> {
        let s = SemisimplicialSet { faces, seqs: None, index: None, cap };
        s.check_ranges()?;
        s.check_face_identities()?;
        Ok(s)
    }

    /// Ordering with the given vertex sequences; faces delete one entry.
    pub fn from_sequences(mut levels: Vec<Vec<Vec<usize>>>, cap: Option<usize>) -> Result<Self, ScError> {
        for l in &mut levels {
            l.sort();
            l.dedup();
        }
        while levels.last().is_some_and(|l| l.is_empty()) {
            levels.pop();
        }
        let index: Vec<HashMap<Vec<usize>, usize>> =
            levels.iter().map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut faces = Vec::with_capacity(levels.len());
        for (k, l) in levels.iter().enumerate() {
            let mut fk = Vec::with_capacity(l.len());
            for s in l {
                if s.len() != k + 1 {
                    return Err(ScError::Invalid(format!("sequence {s:?} at level {k}")));
                }
                if k == 0 {
                    fk.push(Vec::new());
                    continue;
                }
                let mut f = Vec::with_capacity(k + 1);
                for i in 0..=k {
                    let mut t = s.clone();
                    t.remove(i);
                    f.push(*index[k - 1].get(&t).ok_or_else(|| ScError::NotClosed(t.clone()))?);
                }
                fk.push(f);
            }
            faces.push(fk);
        }
        Ok(SemisimplicialSet { faces, seqs: Some(levels), index: Some(index), cap })
    }

    pub fn empty() -> Self {
        SemisimplicialSet { faces: Vec::new(), seqs: Some(Vec::new()), index: Some(Vec::new()), cap: None }
    }

    fn check_ranges(&self) -> Result<(), ScError> {
        for (k, l) in self.faces.iter().enumerate() {
            for (s, f) in l.iter().enumerate() {
                let want = if k == 0 { 0 } else { k + 1 };
                if f.len() != want {
                    return Err(ScError::Invalid(format!("simplex ({k}, {s}) has {} faces", f.len())));
                }
                if k > 0 && f.iter().any(|&x| x >= self.faces[k - 1].len()) {
                    return Err(ScError::Invalid(format!("simplex ({k}, {s}) has a face out of range")));
                }
            }
        }
        Ok(())
    }

    /// d_i d_j = d_{j-1} d_i for i < j, on every simplex.
    pub fn check_face_identities(&self) -> Result<(), ScError> {
        for k in 2..self.faces.len() {
            for (s, f) in self.faces[k].iter().enumerate() {
                for j in 1..=k {
                    for i in 0..j {
                        if self.faces[k - 1][f[j]][i] != self.faces[k - 1][f[i]][j - 1] {
                            return Err(ScError::FaceIdentity { level: k, simplex: s, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.faces.len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.faces.get(k).map_or(0, |l| l.len())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.faces.iter().map(|l| l.len()).collect()
    }

    pub fn face(&self, k: usize, s: usize, i: usize) -> usize {
        self.faces[k][s][i]
    }

    pub fn faces_of(&self, k: usize, s: usize) -> &[usize] {
        &self.faces[k][s]
    }

    pub fn is_ordering(&self) -> bool {
        self.seqs.is_some()
    }

    pub fn sequence(&self, k: usize, s: usize) -> Option<&[usize]> {
        self.seqs.as_ref().map(|q| q[k][s].as_slice())
    }

    pub fn sequences(&self, k: usize) -> Option<&[Vec<usize>]> {
        self.seqs.as_ref().and_then(|q| q.get(k).map(|l| l.as_slice()))
    }

    pub fn find(&self, seq: &[usize]) -> Option<usize> {
        if seq.is_empty() {
            return None;
        }
        self.index.as_ref()?.get(seq.len() - 1)?.get(seq).copied()
    }

    /// Vertex v_i of a simplex: the image under [0] → [k], 0 ↦ i.
    pub fn vertex(&self, k: usize, s: usize, i: usize) -> usize {
        // Delete every other position, keeping i.
        let mut cur = (k, s);
        let mut pos = i;
        while cur.0 > 0 {
            let drop = if pos == cur.0 { 0 } else { cur.0 };
            if drop < pos {
                pos -= 1;
            }
            cur = (cur.0 - 1, self.faces[cur.0][cur.1][drop]);
        }
        cur.1
    }

    /// Levels 0..=n only.
    pub fn truncate(&self, n: usize) -> SemisimplicialSet {
        let keep = (n + 1).min(self.faces.len());
        SemisimplicialSet {
            faces: self.faces[..keep].to_vec(),
            seqs: self.seqs.as_ref().map(|q| q[..keep].to_vec()),
            index: self.index.as_ref().map(|q| q[..keep].to_vec()),
            cap: Some(self.cap.map_or(n, |c| c.min(n))),
        }
    }

    pub fn reduced_euler_characteristic(&self) -> i64 {
        -1 + self.faces.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum::<i64>()
    }

    /// Simplices τ with σ·τ a simplex.
    pub fn forward_link(&self, sigma: &[usize]) -> Result<SemisimplicialSet, ScError> {
        let seqs = self.seqs.as_ref().ok_or(ScError::NotOrdering)?;
        if self.find(sigma).is_none() {
            return Err(ScError::Absent(sigma.to_vec()));
        }
        let k = sigma.len() - 1;
        let mut levels = Vec::new();
        for l in seqs.iter().skip(k + 1) {
            levels.push(l.iter().filter(|s| s.starts_with(sigma)).map(|s| s[k + 1..].to_vec()).collect::<Vec<_>>());
        }
        let cap = self.cap.map(|c| c.saturating_sub(k + 1));
        SemisimplicialSet::from_sequences(levels, cap)
    }

    pub fn to_file(&self) -> SsFile {
        SsFile {
            levels: self
                .faces
                .iter()
                .enumerate()
                .map(|(k, l)| {
                    l.iter()
                        .enumerate()
                        .map(|(s, f)| SimplexRecord { faces: f.clone(), vertices: self.sequence(k, s).map(|q| q.to_vec()) })
                        .collect()
                })
                .collect(),
            cap: self.cap,
        }
    }

    pub fn from_file(f: &SsFile) -> Result<Self, ScError> {
        if !f.levels.is_empty() && f.levels.iter().flatten().all(|r| r.vertices.is_some()) {
            let levels = f.levels.iter().map(|l| l.iter().map(|r| r.vertices.clone().unwrap()).collect()).collect();
            let s = Self::from_sequences(levels, f.cap)?;
            let given: Vec<Vec<Vec<usize>>> = f.levels.iter().map(|l| l.iter().map(|r| r.faces.clone()).collect()).collect();
            if given.iter().flatten().any(|x| !x.is_empty()) && given != s.faces {
                return Err(ScError::Invalid("face lists disagree with vertex sequences".into()));
            }
            return Ok(s);
        }
        Self::from_faces(f.levels.iter().map(|l| l.iter().map(|r| r.faces.clone()).collect()).collect(), f.cap)
    }
}

/// Exchange format: `{levels: [[{faces, vertices?}]], cap?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsFile {
    pub levels: Vec<Vec<SimplexRecord>>,
    #[serde(default)]
    pub cap: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplexRecord {
    #[serde(default)]
    pub faces: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<usize>>,
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations_of(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All orderings of all simplices, up to level `dim_cap`.
pub fn large_ordering(x: &SimplicialComplex, dim_cap: Option<usize>) -> SemisimplicialSet {
    let top = dim_cap.map_or(x.simplices.len(), |c| (c + 1).min(x.simplices.len()));
    let levels: Vec<Vec<Vec<usize>>> =
        x.simplices[..top].iter().map(|l| l.iter().flat_map(|s| permutations_of(s)).collect()).collect();
    let cap = match (x.cap, dim_cap) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b.filter(|&c| c + 1 < x.simplices.len())),
    };
    SemisimplicialSet::from_sequences(levels, cap).expect("orderings are closed under deletion")
}

/// Complex of injective words on n+1 letters.
pub fn osim(n: usize, dim_cap: Option<usize>) -> SemisimplicialSet {
    large_ordering(&SimplicialComplex::build_standard(super::complex::StandardKind::Simplex(n)), dim_cap)
}

/// A group action: for each generator and level, a permutation of the simplices.
#[derive(Clone, Debug)]
pub struct GroupActionOnSS {
    pub perms: Vec<Vec<Vec<usize>>>,
}

impl GroupActionOnSS {
    pub fn trivial(x: &SemisimplicialSet) -> Self {
        GroupActionOnSS { perms: vec![x.counts().iter().map(|&c| (0..c).collect()).collect()] }
    }

    /// Action on an ordering induced by vertex-label maps (indexed by label), one per generator.
    pub fn from_vertex_maps(x: &SemisimplicialSet, maps: &[Vec<usize>]) -> Result<Self, ScError> {
        let mut perms = Vec::with_capacity(maps.len());
        for m in maps {
            let mut per_level = Vec::with_capacity(x.levels());
            for k in 0..x.levels() {
                let seqs = x.sequences(k).ok_or(ScError::NotOrdering)?;
                let mut p = Vec::with_capacity(seqs.len());
                for s in seqs {
                    let img: Vec<usize> = s.iter().map(|&v| m[v]).collect();
                    p.push(x.find(&img).ok_or(ScError::Invalid(format!("image of {s:?} is not a simplex")))?);
                }
                per_level.push(p);
            }
            perms.push(per_level);
        }
        Ok(GroupActionOnSS { perms })
    }

    /// Each generator permutes every level and commutes with every face map.
    pub fn verify(&self, x: &SemisimplicialSet) -> Result<(), ScError> {
        for (g, per_level) in self.perms.iter().enumerate() {
            if per_level.len() != x.levels() {
                return Err(ScError::BadAction(format!("generator {g} has the wrong number of levels")));
            }
            for (k, p) in per_level.iter().enumerate() {
                let mut seen = vec![false; x.count(k)];
                if p.len() != x.count(k) {
                    return Err(ScError::BadAction(format!("generator {g} level {k} has the wrong size")));
                }
                for &t in p {
                    if t >= seen.len() || std::mem::replace(&mut seen[t], true) {
                        return Err(ScError::BadAction(format!("generator {g} is not a permutation on level {k}")));
                    }
                }
                if k == 0 {
                    continue;
                }
                for s in 0..x.count(k) {
                    for i in 0..=k {
                        if x.face(k, p[s], i) != per_level[k - 1][x.face(k, s, i)] {
                            return Err(ScError::BadAction(format!(
                                "generator {g} does not commute with d_{i} on simplex ({k}, {s})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Orbit id of each simplex, orbits numbered by least member.
    pub fn orbits(&self, x: &SemisimplicialSet) -> Vec<Vec<usize>> {
        (0..x.levels())
            .map(|k| {
                let n = x.count(k);
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(p: &mut [usize], a: usize) -> usize {
                    let mut r = a;
                    while p[r] != r {
                        r = p[r];
                    }
                    let mut c = a;
                    while p[c] != r {
                        let nx = p[c];
                        p[c] = r;
                        c = nx;
                    }
                    r
                }
                for g in &self.perms {
                    for s in 0..n {
                        let (a, b) = (find(&mut parent, s), find(&mut parent, g[k][s]));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
                let mut id = vec![usize::MAX; n];
                let mut next = 0;
                let mut out = vec![0; n];
                for s in 0..n {
                    let r = find(&mut parent, s);
                    if id[r] == usize::MAX {
                        id[r] = next;
                        next += 1;
                    }
                    out[s] = id[r];
                }
                out
            })
            .collect()
    }
}

/// X/G with orbit levels and induced faces, plus the projection X → X/G.
pub fn quotient_by_group(x: &SemisimplicialSet, a: &GroupActionOnSS) -> Result<(SemisimplicialSet, Vec<Vec<usize>>), ScError> {
    a.verify(x)?;
    let proj = a.orbits(x);
    let mut faces = Vec::with_capacity(x.levels());
    for k in 0..x.levels() {
        let norb = proj[k].iter().max().map_or(0, |&m| m + 1);
        let mut fk: Vec<Option<Vec<usize>>> = vec![None; norb];
        for s in 0..x.count(k) {
            let f: Vec<usize> = if k == 0 { Vec::new() } else { x.faces_of(k, s).iter().map(|&t| proj[k - 1][t]).collect() };
            match &fk[proj[k][s]] {
                None => fk[proj[k][s]] = Some(f),
                Some(g) if *g != f => return Err(ScError::BadAction("faces are not constant on an orbit".into())),
                _ => {}
            }
        }
        faces.push(fk.into_iter().map(|f| f.unwrap()).collect());
    }
    Ok((SemisimplicialSet::from_faces(faces, x.cap)?, proj))
}

/// Whether two semisimplicial sets are isomorphic via the given level maps.
pub fn is_isomorphism(x: &SemisimplicialSet, y: &SemisimplicialSet, maps: &[Vec<usize>]) -> bool {
    if x.counts() != y.counts() || maps.len() != x.levels() {
        return false;
    }
    for (k, m) in maps.iter().enumerate() {
        let mut seen = vec![false; y.count(k)];
        for &t in m {
            if t >= seen.len() || std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        if k > 0 {
            for s in 0..x.count(k) {
                for i in 0..=k {
                    if y.face(k, m[s], i) != maps[k - 1][x.face(k, s, i)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}
