//! Simplicial complexes stored as sorted vertex lists per dimension.

use std::collections::{BTreeSet, HashMap};

use super::ss::SemisimplicialSet;
use super::ScError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<usize>,
    /// simplices[k] = sorted list of sorted (k+1)-vertex lists.
    pub simplices: Vec<Vec<Vec<usize>>>,
    /// Simplices above this dimension were not generated.
    pub cap: Option<usize>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    Simplex(usize),
    Boundary(usize),
}

fn subsets_of_size(items: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), out);
}

impl SimplicialComplex {
    /// Builds from an explicit simplex list (all dimensions), checking face-closure.
    pub fn from_simplices(vertices: Vec<usize>, simplices: Vec<Vec<Vec<usize>>>, cap: Option<usize>) -> Result<Self, ScError> {
        let mut sx = simplices;
        for level in &mut sx {
            for s in level.iter_mut() {
                s.sort_unstable();
            }
            level.sort();
            level.dedup();
        }
        while sx.last().is_some_and(|l| l.is_empty()) {
            sx.pop();
        }
        let index = sx.iter().map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut vs = vertices;
        vs.sort_unstable();
        vs.dedup();
        let c = SimplicialComplex { vertices: vs, simplices: sx, cap, index };
        c.check_face_closure()?;
        Ok(c)
    }

    /// Face-closure of the given facets.
    pub fn from_facets(vertices: Vec<usize>, facets: &[Vec<usize>]) -> Self {
        let mut levels: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            for k in 1..=f.len() {
                let mut subs = Vec::new();
                subsets_of_size(&f, k, &mut subs);
                if levels.len() < k {
                    levels.resize(k, BTreeSet::new());
                }
                levels[k - 1].extend(subs);
            }
        }
        let mut vs: BTreeSet<usize> = vertices.into_iter().collect();
        if let Some(l0) = levels.first() {
            vs.extend(l0.iter().map(|v| v[0]));
        }
        let mut simplices: Vec<Vec<Vec<usize>>> = levels.into_iter().map(|l| l.into_iter().collect()).collect();
        let v0: Vec<Vec<usize>> = vs.iter().map(|&v| vec![v]).collect();
        if simplices.is_empty() {
            simplices.push(v0);
        } else {
            simplices[0] = v0;
        }
        Self::from_simplices(vs.into_iter().collect(), simplices, None).expect("face closure by construction")
    }

    /// Clique complex of a graph on `0..n`, up to dimension `cap`.
    pub fn flag_complex(n: usize, adjacent: impl Fn(usize, usize) -> bool, cap: usize) -> Self {
        let nbrs: Vec<Vec<usize>> = (0..n).map(|u| (u + 1..n).filter(|&v| adjacent(u, v)).collect()).collect();
        let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
        for k in 1..=cap {
            let mut next = Vec::new();
            for s in &levels[k - 1] {
                let last = *s.last().unwrap();
                for &v in &nbrs[last] {
                    if s[..s.len() - 1].iter().all(|&u| adjacent(u, v)) {
                        let mut t = s.clone();
                        t.push(v);
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        let full = levels.len() <= cap;
        Self::from_simplices((0..n).collect(), levels, if full { None } else { Some(cap) })
            .expect("clique complexes are face-closed")
    }

    pub fn build_standard(kind: StandardKind) -> Self {
        match kind {
            StandardKind::Simplex(n) => Self::from_facets((0..=n).collect(), &[(0..=n).collect()]),
            StandardKind::Boundary(n) => {
                let facets: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).filter(|&j| j != i).collect()).collect();
                if n == 0 {
                    return Self::from_simplices(Vec::new(), Vec::new(), None).unwrap();
                }
                Self::from_facets((0..=n).collect(), &facets)
            }
        }
    }

    pub fn dim(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, |l| l.len())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|l| l.len()).collect()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        let mut v = s.to_vec();
        v.sort_unstable();
        !v.is_empty() && self.index.get(v.len() - 1).is_some_and(|m| m.contains_key(&v))
    }

    pub fn position(&self, s: &[usize]) -> Option<usize> {
        let mut v = s.to_vec();
        v.sort_unstable();
        if v.is_empty() {
            return None;
        }
        self.index.get(v.len() - 1)?.get(&v).copied()
    }

    pub fn check_face_closure(&self) -> Result<(), ScError> {
        for (k, level) in self.simplices.iter().enumerate() {
            for s in level {
                if s.len() != k + 1 {
                    return Err(ScError::Invalid(format!("simplex {s:?} listed in dimension {k}")));
                }
                if k == 0 {
                    if self.vertices.binary_search(&s[0]).is_err() {
                        return Err(ScError::Invalid(format!("vertex {} missing from the vertex list", s[0])));
                    }
                    continue;
                }
                for i in 0..=k {
                    let mut f = s.clone();
                    f.remove(i);
                    if !self.index[k - 1].contains_key(&f) {
                        return Err(ScError::NotClosed(f));
                    }
                }
            }
        }
        if self.simplices.first().map_or(0, |l| l.len()) != self.vertices.len() {
            return Err(ScError::Invalid("vertex list and 0-simplices differ".into()));
        }
        Ok(())
    }

    /// Simplices disjoint from σ whose union with σ is a simplex.
    pub fn link(&self, sigma: &[usize]) -> Result<SimplicialComplex, ScError> {
        if !self.contains(sigma) {
            return Err(ScError::Absent(sigma.to_vec()));
        }
        let k = sigma.len() - 1;
        let mut levels: Vec<Vec<Vec<usize>>> = Vec::new();
        for level in self.simplices.iter().skip(k + 1) {
            let mut out = Vec::new();
            for s in level {
                if sigma.iter().all(|v| s.binary_search(v).is_ok()) {
                    let t: Vec<usize> = s.iter().copied().filter(|v| !sigma.contains(v)).collect();
                    out.push(t);
                }
            }
            levels.push(out);
        }
        while levels.last().is_some_and(|l| l.is_empty()) {
            levels.pop();
        }
        let vertices = levels.first().map_or(Vec::new(), |l| l.iter().map(|v| v[0]).collect());
        let cap = self.cap.map(|c| c.saturating_sub(k + 1));
        Self::from_simplices(vertices, levels, cap)
    }

    /// Small ordering by the vertex order: simplices are increasing sequences.
    pub fn to_semisimplicial(&self) -> SemisimplicialSet {
        SemisimplicialSet::from_sequences(self.simplices.clone(), self.cap)
            .expect("increasing sequences are closed under deletion")
    }

    pub fn reduced_euler_characteristic(&self) -> i64 {
        -1 + self.simplices.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum::<i64>()
    }
}
