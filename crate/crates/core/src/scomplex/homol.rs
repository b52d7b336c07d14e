//! Reduced simplicial homology and (forward) Cohen–Macaulay checks.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::complex::SimplicialComplex;
use super::ss::SemisimplicialSet;
use super::ScError;
use crate::exactlin::{invariant_factors, rank_over, Coeff, HomologyGroup, SparseMatrix};

/// ∂_k : C_k → C_{k-1} with d = Σ (−1)^i d_i; ∂_0 is the augmentation to C_{-1} = Z.
pub fn boundary_matrix(x: &SemisimplicialSet, k: usize) -> SparseMatrix {
    let cols = x.count(k);
    if k == 0 {
        let e: Vec<(usize, usize, i64)> = (0..cols).map(|s| (0, s, 1)).collect();
        return SparseMatrix::from_i64_entries(1, cols, &e).unwrap();
    }
    let rows = x.count(k - 1);
    let mut acc: std::collections::BTreeMap<(usize, usize), i64> = Default::default();
    for s in 0..cols {
        for (i, &f) in x.faces_of(k, s).iter().enumerate() {
            *acc.entry((f, s)).or_default() += if i % 2 == 0 { 1 } else { -1 };
        }
    }
    let e: Vec<(usize, usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).map(|((r, c), v)| (r, c, v)).collect();
    SparseMatrix::from_i64_entries(rows, cols, &e).unwrap()
}

/// Reduced homology RH_k for k = −1..=max_deg.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedHomology {
    pub groups: Vec<HomologyGroup>,
}

impl ReducedHomology {
    pub fn degree(&self, k: isize) -> &HomologyGroup {
        &self.groups[(k + 1) as usize]
    }

    pub fn max_degree(&self) -> isize {
        self.groups.len() as isize - 2
    }

    /// Betti numbers (free ranks) in degrees 0..=max.
    pub fn ranks(&self) -> Vec<usize> {
        self.groups[1..].iter().map(|g| g.free_rank).collect()
    }
}

enum RankData {
    Field(usize),
    Int(Vec<BigInt>),
}

impl RankData {
    fn rank(&self) -> usize {
        match self {
            RankData::Field(r) => *r,
            RankData::Int(f) => f.len(),
        }
    }

    fn torsion(&self) -> Vec<BigInt> {
        match self {
            RankData::Field(_) => Vec::new(),
            RankData::Int(f) => f.iter().filter(|x| !x.is_one()).cloned().collect(),
        }
    }
}

pub fn reduced_homology(x: &SemisimplicialSet, coeff: Coeff, max_deg: isize) -> Result<ReducedHomology, ScError> {
    if max_deg < -1 {
        return Ok(ReducedHomology { groups: Vec::new() });
    }
    let need = (max_deg + 1) as usize;
    if let Some(c) = x.cap {
        if need > c {
            return Err(ScError::BeyondCap { needed: need, cap: c });
        }
    }
    let mut data = Vec::with_capacity(need + 1);
    for k in 0..=need {
        let d = boundary_matrix(x, k);
        data.push(match coeff {
            Coeff::Field(f) => RankData::Field(rank_over(&d, f)?),
            Coeff::Integers => RankData::Int(invariant_factors(&d)?),
        });
    }
    let mut groups = vec![HomologyGroup { free_rank: 1 - data[0].rank(), torsion: data[0].torsion() }];
    for k in 0..need {
        groups.push(HomologyGroup {
            free_rank: x.count(k) - data[k].rank() - data[k + 1].rank(),
            torsion: data[k + 1].torsion(),
        });
    }
    Ok(ReducedHomology { groups })
}

/// First degree k ≤ m with RH_k ≠ 0, if any ("homologically m-connected" otherwise).
pub fn connectivity_failure(x: &SemisimplicialSet, m: isize, coeff: Coeff) -> Result<Option<(isize, HomologyGroup)>, ScError> {
    if m < -1 {
        return Ok(None);
    }
    let h = reduced_homology(x, coeff, m)?;
    Ok((-1..=m).find(|&k| !h.degree(k).is_zero()).map(|k| (k, h.degree(k).clone())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CmMode {
    Plain,
    Forward,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmFailure {
    /// Empty for the whole space.
    pub simplex: Vec<usize>,
    pub degree: isize,
    pub group: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub mode: CmMode,
    pub dimension: isize,
    pub holds: bool,
    pub simplices_checked: usize,
    pub failures: Vec<CmFailure>,
}

fn run_checks<T: Sync>(
    items: &[T],
    jobs: usize,
    check: impl Fn(&T) -> Result<Option<CmFailure>, ScError> + Sync,
) -> Result<Vec<CmFailure>, ScError> {
    let jobs = jobs.max(1).min(items.len().max(1));
    let chunk = items.len().div_ceil(jobs).max(1);
    let results: Vec<Result<Vec<CmFailure>, ScError>> = std::thread::scope(|sc| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let check = &check;
                sc.spawn(move || {
                    let mut out = Vec::new();
                    for it in part {
                        if let Some(f) = check(it)? {
                            out.push(f);
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn failure(simplex: Vec<usize>, f: Option<(isize, HomologyGroup)>) -> Option<CmFailure> {
    f.map(|(degree, g)| CmFailure { simplex, degree, group: g.to_string() })
}

/// X is (n−1)-connected and each link of a k-simplex is (n−k−2)-connected.
pub fn is_weakly_cm(x: &SimplicialComplex, n: isize, coeff: Coeff, jobs: usize) -> Result<CmReport, ScError> {
    let mut failures = Vec::new();
    if let Some(f) = failure(Vec::new(), connectivity_failure(&x.to_semisimplicial(), n - 1, coeff)?) {
        failures.push(f);
    }
    let mut sims = Vec::new();
    for (k, level) in x.simplices.iter().enumerate() {
        if n - k as isize - 2 >= -1 {
            sims.extend(level.iter().cloned());
        }
    }
    failures.extend(run_checks(&sims, jobs, |s| {
        let m = n - s.len() as isize - 1;
        let l = x.link(s)?;
        Ok(failure(s.clone(), connectivity_failure(&l.to_semisimplicial(), m, coeff)?))
    })?);
    Ok(CmReport { mode: CmMode::Plain, dimension: n, holds: failures.is_empty(), simplices_checked: sims.len(), failures })
}

/// Forward version on an ordering: forward links replace links.
pub fn is_weakly_forward_cm(x: &SemisimplicialSet, n: isize, coeff: Coeff, jobs: usize) -> Result<CmReport, ScError> {
    if !x.is_ordering() {
        return Err(ScError::NotOrdering);
    }
    let mut failures = Vec::new();
    if let Some(f) = failure(Vec::new(), connectivity_failure(x, n - 1, coeff)?) {
        failures.push(f);
    }
    let mut sims = Vec::new();
    for k in 0..x.levels() {
        if n - k as isize - 2 >= -1 {
            sims.extend(x.sequences(k).unwrap().iter().cloned());
        }
    }
    failures.extend(run_checks(&sims, jobs, |s| {
        let m = n - s.len() as isize - 1;
        let l = x.forward_link(s)?;
        Ok(failure(s.clone(), connectivity_failure(&l, m, coeff)?))
    })?);
    Ok(CmReport { mode: CmMode::Forward, dimension: n, holds: failures.is_empty(), simplices_checked: sims.len(), failures })
}
