//! Functoriality checks, equivariant structures and the group law on each chain level.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{CoeffError, CoefficientSystem};
use crate::exactlin::dense::{identity, mul};
use crate::exactlin::{Field, Mat, SparseMatrix};
use crate::scomplex::GroupActionOnSS;

/// Left multiplication by generators on an enumerated finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    pub order: usize,
    pub identity: usize,
    /// left[g][e] = index of gen_g · e.
    pub left: Vec<Vec<usize>>,
}

impl CayleyTable {
    /// Breadth-first enumeration from the identity; `None` when the group exceeds `guard`.
    pub fn enumerate<T: Clone + Eq + Hash>(
        identity: T,
        gens: &[T],
        mul: impl Fn(&T, &T) -> T,
        guard: usize,
    ) -> Option<(Self, Vec<T>)> {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut left: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
        let mut head = 0;
        while head < elems.len() {
            for (g, gen) in gens.iter().enumerate() {
                let p = mul(gen, &elems[head]);
                let id = match index.get(&p) {
                    Some(&i) => i,
                    None => {
                        if elems.len() >= guard {
                            return None;
                        }
                        index.insert(p.clone(), elems.len());
                        elems.push(p);
                        elems.len() - 1
                    }
                };
                left[g].push(id);
            }
            head += 1;
        }
        Some((CayleyTable { order: elems.len(), identity: 0, left }, elems))
    }
}

/// Per-generator isomorphisms Φ_g : F(σ) → F(gσ), indexed like the system's cells.
#[derive(Clone, Debug)]
pub struct EquivariantStructure<F: Field> {
    pub action: GroupActionOnSS,
    /// phi[g][L][s].
    pub phi: Vec<Vec<Vec<Mat<F::E>>>>,
    pub table: Option<CayleyTable>,
}

impl<F: Field> EquivariantStructure<F> {
    pub fn generators(&self) -> usize {
        self.phi.len()
    }

    /// Index of g·σ for a cell (L, s); the (−1)-simplex is fixed.
    pub fn target(&self, g: usize, l: usize, s: usize) -> usize {
        if l == 0 {
            0
        } else {
            self.action.perms[g][l - 1][s]
        }
    }

    /// Action of the word g_1 g_2 ⋯ g_m (g_m applied first) on a cell.
    pub fn word_action(&self, f: &F, word: &[usize], l: usize, s: usize, dim: usize) -> (usize, Mat<F::E>) {
        let mut cur = s;
        let mut m = identity(f, dim);
        for &g in word.iter().rev() {
            m = mul(f, &self.phi[g][l][cur], &m);
            cur = self.target(g, l, cur);
        }
        (cur, m)
    }

    pub fn to_file(&self, f: &F) -> PhiFile {
        let mut matrices = Vec::new();
        for (g, per) in self.phi.iter().enumerate() {
            for (l, lvl) in per.iter().enumerate() {
                for (s, m) in lvl.iter().enumerate() {
                    matrices.push(PhiRecord {
                        generator: g,
                        level: l as isize - 1,
                        index: s,
                        matrix: SparseMatrix::from_dense(f, m),
                    });
                }
            }
        }
        PhiFile { perms: self.action.perms.clone(), matrices }
    }

    pub fn from_file(f: &F, sys: &CoefficientSystem<F>, file: &PhiFile) -> Result<Self, CoeffError> {
        let gens = file.perms.len();
        let mut phi: Vec<Vec<Vec<Option<Mat<F::E>>>>> =
            (0..gens).map(|_| sys.dims.iter().map(|l| vec![None; l.len()]).collect()).collect();
        for r in &file.matrices {
            let l = usize::try_from(r.level + 1).map_err(|_| CoeffError::Invalid(format!("level {}", r.level)))?;
            let slot = phi.get_mut(r.generator).and_then(|p| p.get_mut(l)).and_then(|p| p.get_mut(r.index));
            match slot {
                Some(x @ None) => *x = Some(r.matrix.to_dense(f)?),
                _ => return Err(CoeffError::Invalid(format!("phi record ({}, {}, {}) is unknown or repeated", r.generator, r.level, r.index))),
            }
        }
        let phi = phi
            .into_iter()
            .map(|p| p.into_iter().map(|l| l.into_iter().collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CoeffError::Invalid("missing phi matrices".into()))?;
        Ok(EquivariantStructure { action: GroupActionOnSS { perms: file.perms.clone() }, phi, table: None })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiRecord {
    pub generator: usize,
    pub level: isize,
    pub index: usize,
    pub matrix: SparseMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiFile {
    pub perms: Vec<Vec<Vec<usize>>>,
    pub matrices: Vec<PhiRecord>,
}

/// Levels are simplex dimensions (−1 for the augmentation simplex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationFailure {
    /// F(d_i)F(d_j) ≠ F(d_{j−1})F(d_i) on a simplex.
    Square { level: isize, simplex: usize, i: usize, j: usize },
    Action(String),
    PhiShape { generator: usize, level: isize, simplex: usize },
    /// F(d_i) Φ_g ≠ Φ_g F(d_i).
    Naturality { generator: usize, level: isize, simplex: usize, face: usize },
    /// Two words for the same group element act differently on a simplex.
    GroupLaw { level: isize, simplex: usize, element: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub holds: bool,
    pub squares_checked: usize,
    pub group_law_checked: bool,
    pub failures: Vec<ValidationFailure>,
}

pub fn validate_system<F: Field>(sys: &CoefficientSystem<F>, eq: Option<&EquivariantStructure<F>>) -> ValidationReport {
    let f = &sys.field;
    let mut failures = Vec::new();
    let mut squares = 0;
    for l in 2..sys.cell_levels() {
        if l == 2 && !sys.augmented {
            continue;
        }
        let k = l - 1;
        for s in 0..sys.dims[l].len() {
            for j in 1..=k {
                for i in 0..j {
                    squares += 1;
                    let a = mul(f, &sys.faces[l - 1][sys.face_target(l, s, j)][i], &sys.faces[l][s][j]);
                    let b = mul(f, &sys.faces[l - 1][sys.face_target(l, s, i)][j - 1], &sys.faces[l][s][i]);
                    if a != b {
                        failures.push(ValidationFailure::Square { level: k as isize, simplex: s, i, j });
                    }
                }
            }
        }
    }
    let mut group_law_checked = false;
    if let Some(e) = eq {
        check_equivariance(sys, e, &mut failures);
        group_law_checked = e.table.is_some();
    }
    ValidationReport { holds: failures.is_empty(), squares_checked: squares, group_law_checked, failures }
}

fn check_equivariance<F: Field>(sys: &CoefficientSystem<F>, e: &EquivariantStructure<F>, failures: &mut Vec<ValidationFailure>) {
    let f = &sys.field;
    if let Err(err) = e.action.verify(&sys.base) {
        failures.push(ValidationFailure::Action(err.to_string()));
        return;
    }
    if e.action.perms.len() != e.phi.len() {
        failures.push(ValidationFailure::Action("generator counts differ".into()));
        return;
    }
    let mut shapes_ok = true;
    for (g, per) in e.phi.iter().enumerate() {
        if per.len() != sys.cell_levels() {
            failures.push(ValidationFailure::Action(format!("generator {g} has the wrong number of levels")));
            return;
        }
        for l in 0..sys.cell_levels() {
            for s in 0..sys.dims[l].len() {
                let t = e.target(g, l, s);
                let ok = per[l].get(s).is_some_and(|m| m.cols == sys.dims[l][s] && m.rows == sys.dims[l][t]);
                if !ok {
                    failures.push(ValidationFailure::PhiShape { generator: g, level: l as isize - 1, simplex: s });
                    shapes_ok = false;
                }
            }
        }
    }
    if !shapes_ok {
        return;
    }
    for g in 0..e.generators() {
        for l in 1..sys.cell_levels() {
            for s in 0..sys.dims[l].len() {
                let gs = e.target(g, l, s);
                for i in 0..sys.faces[l][s].len() {
                    let t = sys.face_target(l, s, i);
                    let lhs = mul(f, &sys.faces[l][gs][i], &e.phi[g][l][s]);
                    let rhs = mul(f, &e.phi[g][l - 1][t], &sys.faces[l][s][i]);
                    if lhs != rhs {
                        failures.push(ValidationFailure::Naturality { generator: g, level: l as isize - 1, simplex: s, face: i });
                    }
                }
            }
        }
    }
    let Some(table) = &e.table else { return };
    for l in 0..sys.cell_levels() {
        for s in 0..sys.dims[l].len() {
            // Φ_{x,σ} for every element x, built along a spanning tree of the Cayley graph.
            let mut at: Vec<Option<(usize, Mat<F::E>)>> = vec![None; table.order];
            at[table.identity] = Some((s, identity(f, sys.dims[l][s])));
            let mut queue = vec![table.identity];
            let mut head = 0;
            let mut bad = None;
            while head < queue.len() && bad.is_none() {
                let x = queue[head];
                head += 1;
                let (cur, m) = at[x].clone().unwrap();
                for g in 0..e.generators() {
                    let y = table.left[g][x];
                    let cand = (e.target(g, l, cur), mul(f, &e.phi[g][l][cur], &m));
                    match &at[y] {
                        None => {
                            at[y] = Some(cand);
                            queue.push(y);
                        }
                        Some(prev) if *prev != cand => {
                            bad = Some(y);
                            break;
                        }
                        _ => {}
                    }
                }
            }
            if let Some(y) = bad {
                failures.push(ValidationFailure::GroupLaw { level: l as isize - 1, simplex: s, element: y });
            }
        }
    }
}
