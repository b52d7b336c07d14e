//! FI-modules truncated at a level N, stored through adjacent transpositions and inclusions.

use serde::{Deserialize, Serialize};

use super::{FunError, PolyVerdict};
use crate::exactlin::dense::{self, column_space, identity, induced_on_quotients, kron, mul, quotient, rank};
use crate::exactlin::{Field, FieldId, Mat, SparseMatrix};

/// M(0̄) → ... → M(N̄) with S_n acting on M(n̄).
#[derive(Clone, Debug)]
pub struct TruncatedFIModule<F: Field> {
    pub field: F,
    pub truncation: usize,
    pub dims: Vec<usize>,
    /// `transpositions[n][i-1]` is s_i = (i i+1) on M(n̄), 1 ≤ i < n.
    pub transpositions: Vec<Vec<Mat<F::E>>>,
    /// `inclusions[n]`: M(n̄) → M(n+1̄), n < N.
    pub inclusions: Vec<Mat<F::E>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiKind {
    /// M(S) = k^S.
    FreeKS,
    /// S ↦ base(S)^{⊗d}; d = 0 gives the constant module k.
    TensorPower(Box<FiKind>, usize),
    Constant(usize),
}

fn kron_power<F: Field>(f: &F, a: &Mat<F::E>, d: usize) -> Mat<F::E> {
    let mut out = identity(f, 1);
    for _ in 0..d {
        out = kron(f, &out, a);
    }
    out
}

fn permutation_matrix<F: Field>(f: &F, n: usize, i: usize) -> Mat<F::E> {
    // Swaps basis vectors i and i+1 (0-based i).
    let mut m = identity(f, n);
    m.set(i, i, f.zero());
    m.set(i + 1, i + 1, f.zero());
    m.set(i, i + 1, f.one());
    m.set(i + 1, i, f.one());
    m
}

fn standard_inclusion<F: Field>(f: &F, rows: usize, cols: usize) -> Mat<F::E> {
    let mut m = dense::zeros(f, rows, cols);
    for i in 0..cols {
        m.set(i, i, f.one());
    }
    m
}

pub fn fi_build<F: Field>(kind: &FiKind, field: &F, n_max: usize) -> Result<TruncatedFIModule<F>, FunError> {
    let f = field;
    let m = match kind {
        FiKind::FreeKS => TruncatedFIModule {
            field: f.clone(),
            truncation: n_max,
            dims: (0..=n_max).collect(),
            transpositions: (0..=n_max).map(|n| (1..n).map(|i| permutation_matrix(f, n, i - 1)).collect()).collect(),
            inclusions: (0..n_max).map(|n| standard_inclusion(f, n + 1, n)).collect(),
        },
        FiKind::Constant(d) => TruncatedFIModule {
            field: f.clone(),
            truncation: n_max,
            dims: vec![*d; n_max + 1],
            transpositions: (0..=n_max).map(|n| (1..n).map(|_| identity(f, *d)).collect()).collect(),
            inclusions: (0..n_max).map(|_| identity(f, *d)).collect(),
        },
        FiKind::TensorPower(base, d) => {
            let b = fi_build(base, f, n_max)?;
            TruncatedFIModule {
                field: f.clone(),
                truncation: n_max,
                dims: b.dims.iter().map(|&x| x.pow(*d as u32)).collect(),
                transpositions: b
                    .transpositions
                    .iter()
                    .map(|lvl| lvl.iter().map(|s| kron_power(f, s, *d)).collect())
                    .collect(),
                inclusions: b.inclusions.iter().map(|i| kron_power(f, i, *d)).collect(),
            }
        }
    };
    m.verify()?;
    Ok(m)
}

impl<F: Field> TruncatedFIModule<F> {
    pub fn from_parts(
        field: F,
        dims: Vec<usize>,
        transpositions: Vec<Vec<Mat<F::E>>>,
        inclusions: Vec<Mat<F::E>>,
    ) -> Result<Self, FunError> {
        if dims.is_empty() {
            return Err(FunError::Invalid("no levels".into()));
        }
        let m = TruncatedFIModule { field, truncation: dims.len() - 1, dims, transpositions, inclusions };
        m.verify()?;
        Ok(m)
    }

    pub fn s(&self, n: usize, i: usize) -> &Mat<F::E> {
        &self.transpositions[n][i - 1]
    }

    /// Checks shapes, Coxeter relations, naturality of the inclusions, and that the pointwise
    /// stabilizer of n̄ ⊂ m̄ fixes the image of M(n̄).
    pub fn verify(&self) -> Result<(), FunError> {
        let f = &self.field;
        let big_n = self.truncation;
        if self.dims.len() != big_n + 1 || self.transpositions.len() != big_n + 1 || self.inclusions.len() != big_n {
            return Err(FunError::Invalid("level counts do not match the truncation".into()));
        }
        for n in 0..=big_n {
            let d = self.dims[n];
            if self.transpositions[n].len() != n.saturating_sub(1) {
                return Err(FunError::Invalid(format!("level {n} needs {} transpositions", n.saturating_sub(1))));
            }
            for s in &self.transpositions[n] {
                if s.rows != d || s.cols != d {
                    return Err(FunError::Invalid(format!("transposition at level {n} has the wrong shape")));
                }
            }
            if n < big_n {
                let i = &self.inclusions[n];
                if i.rows != self.dims[n + 1] || i.cols != d {
                    return Err(FunError::Invalid(format!("inclusion at level {n} has the wrong shape")));
                }
            }
            let id = identity(f, d);
            for i in 1..n {
                let s = self.s(n, i);
                if mul(f, s, s) != id {
                    return Err(FunError::Axiom(format!("s_{i}^2 ≠ 1 at level {n}")));
                }
                if i + 1 < n {
                    let st = mul(f, s, self.s(n, i + 1));
                    if mul(f, &st, &mul(f, &st, &st)) != id {
                        return Err(FunError::Axiom(format!("(s_{i} s_{})^3 ≠ 1 at level {n}", i + 1)));
                    }
                }
                for j in i + 2..n {
                    if mul(f, s, self.s(n, j)) != mul(f, self.s(n, j), s) {
                        return Err(FunError::Axiom(format!("s_{i} and s_{j} do not commute at level {n}")));
                    }
                }
            }
            if n < big_n {
                for i in 1..n {
                    let a = mul(f, &self.inclusions[n], self.s(n, i));
                    let b = mul(f, self.s(n + 1, i), &self.inclusions[n]);
                    if a != b {
                        return Err(FunError::Axiom(format!("inclusion at level {n} is not S_{n}-equivariant (s_{i})")));
                    }
                }
            }
        }
        for n in 0..big_n {
            let mut j = identity(f, self.dims[n]);
            for m in n + 1..=big_n {
                j = mul(f, &self.inclusions[m - 1], &j);
                for i in n + 1..m {
                    if mul(f, self.s(m, i), &j) != j {
                        return Err(FunError::Axiom(format!("s_{i} moves the image of level {n} in level {m}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite of standard inclusions M(n̄) → M(m̄).
    pub fn inclusion(&self, n: usize, m: usize) -> Mat<F::E> {
        let mut j = identity(&self.field, self.dims[n]);
        for k in n..m {
            j = mul(&self.field, &self.inclusions[k], &j);
        }
        j
    }

    /// τ_* for a permutation τ of m̄ in one-line notation (1-based values).
    pub fn permutation_map(&self, tau: &[usize]) -> Mat<F::E> {
        let f = &self.field;
        let m = tau.len();
        let mut w: Vec<usize> = tau.to_vec();
        let mut out = identity(f, self.dims[m]);
        // Bubble sort: w ∘ s_b at each swap, so τ = s_{b_k} ∘ ... ∘ s_{b_1}.
        for pass in 0..m {
            for b in 0..m.saturating_sub(1 + pass) {
                if w[b] > w[b + 1] {
                    w.swap(b, b + 1);
                    out = mul(f, self.s(m, b + 1), &out);
                }
            }
        }
        out
    }

    pub fn to_file(&self) -> FiModuleFile {
        let f = &self.field;
        FiModuleFile {
            field: f.id(),
            truncation: self.truncation,
            dims: self.dims.clone(),
            transpositions: self
                .transpositions
                .iter()
                .map(|l| l.iter().map(|m| SparseMatrix::from_dense(f, m)).collect())
                .collect(),
            inclusions: self.inclusions.iter().map(|m| SparseMatrix::from_dense(f, m)).collect(),
        }
    }

    pub fn from_file(field: F, file: &FiModuleFile) -> Result<Self, FunError> {
        if file.field != field.id() {
            return Err(FunError::Invalid(format!("module is over {}, not {}", file.field, field.id())));
        }
        let ts = file
            .transpositions
            .iter()
            .map(|l| l.iter().map(|m| m.to_dense(&field)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let is = file.inclusions.iter().map(|m| m.to_dense(&field)).collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(field, file.dims.clone(), ts, is)
    }
}

/// Exchange form of a truncated FI-module.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiModuleFile {
    pub field: FieldId,
    pub truncation: usize,
    pub dims: Vec<usize>,
    pub transpositions: Vec<Vec<SparseMatrix>>,
    pub inclusions: Vec<SparseMatrix>,
}

fn check_injection(f: &[usize], m: usize) -> Result<(), FunError> {
    let mut seen = vec![false; m + 1];
    for &v in f {
        if v == 0 || v > m {
            return Err(FunError::Invalid(format!("value {v} outside 1..={m}")));
        }
        if seen[v] {
            return Err(FunError::NotInjective);
        }
        seen[v] = true;
    }
    Ok(())
}

/// f_* for an injection f: n̄ → m̄ given by its values f(1..n).
pub fn fi_map<F: Field>(module: &TruncatedFIModule<F>, f: &[usize], m: usize) -> Result<Mat<F::E>, FunError> {
    check_injection(f, m)?;
    let unused: Vec<usize> = (1..=m).filter(|v| !f.contains(v)).collect();
    fi_map_via(module, f, m, &unused)
}

/// f_* computed through the extension τ of f that lists `tail` after f(1..n).
pub fn fi_map_via<F: Field>(
    module: &TruncatedFIModule<F>,
    f: &[usize],
    m: usize,
    tail: &[usize],
) -> Result<Mat<F::E>, FunError> {
    check_injection(f, m)?;
    if m > module.truncation {
        return Err(FunError::Truncation { needed: m, have: module.truncation });
    }
    let mut tau = f.to_vec();
    tau.extend_from_slice(tail);
    check_injection(&tau, m)?;
    if tau.len() != m {
        return Err(FunError::Invalid("tail does not complete the injection to a bijection".into()));
    }
    Ok(mul(&module.field, &module.permutation_map(&tau), &module.inclusion(f.len(), m)))
}

/// ΣM, DM and the maps M(n̄) → ΣM(n̄) → DM(n̄) per level.
#[derive(Clone, Debug)]
pub struct FiShiftDerive<F: Field> {
    pub shift: TruncatedFIModule<F>,
    pub derived: TruncatedFIModule<F>,
    pub witnesses: Vec<LevelSequence<F::E>>,
}

#[derive(Clone, Debug)]
pub struct LevelSequence<E> {
    pub inclusion: Mat<E>,
    pub projection: Mat<E>,
    /// 0 → M(n̄) → ΣM(n̄) → DM(n̄) → 0 is exact.
    pub exact: bool,
}

/// The new point * is placed last: n̄ ⊔ {*} = n+1̄ with * = n+1.
pub fn fi_shift_derive<F: Field>(module: &TruncatedFIModule<F>) -> Result<FiShiftDerive<F>, FunError> {
    let big_n = module.truncation;
    if big_n < 1 {
        return Err(FunError::Truncation { needed: 1, have: big_n });
    }
    let f = &module.field;
    let top = big_n - 1;
    // ΣM(n̄) = M(n+1̄); the inclusion n̄⊔* → n+1̄⊔* sends * = n+1 to n+2.
    let shift_incl: Vec<Mat<F::E>> =
        (0..top).map(|n| mul(f, module.s(n + 2, n + 1), &module.inclusions[n + 1])).collect();
    let shift = TruncatedFIModule {
        field: f.clone(),
        truncation: top,
        dims: module.dims[1..].to_vec(),
        transpositions: (0..=top).map(|n| module.transpositions[n + 1][..n.saturating_sub(1)].to_vec()).collect(),
        inclusions: shift_incl.clone(),
    };
    let quots: Vec<_> = (0..=top).map(|n| quotient(f, &column_space(f, &module.inclusions[n]))).collect();
    let derived = TruncatedFIModule {
        field: f.clone(),
        truncation: top,
        dims: quots.iter().map(|q| q.dim).collect(),
        transpositions: (0..=top)
            .map(|n| (1..n).map(|i| induced_on_quotients(f, module.s(n + 1, i), &quots[n], &quots[n])).collect())
            .collect(),
        inclusions: (0..top).map(|n| induced_on_quotients(f, &shift_incl[n], &quots[n], &quots[n + 1])).collect(),
    };
    shift.verify()?;
    derived.verify()?;
    let witnesses = (0..=top)
        .map(|n| LevelSequence {
            inclusion: module.inclusions[n].clone(),
            projection: quots[n].proj.clone(),
            exact: rank(f, &module.inclusions[n]) == module.dims[n],
        })
        .collect();
    Ok(FiShiftDerive { shift, derived, witnesses })
}

/// Degree d starting at m, checked on levels ≤ N.
pub fn fi_poly_check<F: Field>(module: &TruncatedFIModule<F>, d: isize, m: isize) -> Result<PolyVerdict, FunError> {
    let mut trace = Vec::new();
    let failure = fi_poly_rec(module, d, m, &mut trace)?;
    Ok(PolyVerdict { holds: failure.is_none(), degree: d, start: m, verified_up_to: module.truncation, trace, failure })
}

fn fi_poly_rec<F: Field>(
    module: &TruncatedFIModule<F>,
    d: isize,
    m: isize,
    trace: &mut Vec<String>,
) -> Result<Option<String>, FunError> {
    let big_n = module.truncation;
    let lo = m.max(0) as usize;
    if d < -1 {
        return Err(FunError::Invalid(format!("degree {d} < -1")));
    }
    if d == -1 {
        trace.push(format!("degree -1 from {m}: levels {lo}..={big_n} vanish"));
        for n in lo..=big_n {
            if module.dims[n] != 0 {
                return Ok(Some(format!("M({n}) has dimension {} (degree -1 from {m})", module.dims[n])));
            }
        }
        return Ok(None);
    }
    trace.push(format!("degree {d} from {m}: inclusions injective on levels {lo}..{big_n}"));
    for n in lo..big_n {
        if rank(&module.field, &module.inclusions[n]) != module.dims[n] {
            return Ok(Some(format!("M({n}) → M({}) is not injective (degree {d} from {m})", n + 1)));
        }
    }
    if big_n == 0 {
        trace.push("derived module is empty below the truncation".into());
        return Ok(None);
    }
    let sd = fi_shift_derive(module)?;
    fi_poly_rec(&sd.derived, d - 1, m - 1, trace)
}
