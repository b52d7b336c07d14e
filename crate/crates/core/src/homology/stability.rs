//! Tables of H_k(G_n; M_n) for k ≤ 1 along increasing sequences of groups and modules.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::group::{coinvariant_quotient, Representation};
use super::present::{h1_map, Presentation, PresentationComplex};
use super::HomError;
use crate::coeffsys::chain::parallel_map;
use crate::exactlin::dense::{induced_on_quotients, rank};
use crate::exactlin::{Field, Mat};
use crate::finring::group::{el_generators, gl_generators, DEFAULT_GROUP_GUARD};
use crate::finring::{generate_group, GroupKind, RMat};
use crate::funmod::{TruncatedFIModule, TruncatedVICModule};

/// A presentation of G_n with the matrices of its generators.
#[derive(Clone, Debug)]
pub struct GlPresentation {
    pub presentation: Presentation,
    pub generators: Vec<RMat>,
}

pub enum StabilityFamily<'a, F: Field> {
    /// S_n acting on M(n̄).
    Symmetric(&'a TruncatedFIModule<F>),
    /// G_n ⊂ GL_n(R) acting on M(R^n); H_1 needs a presentation for every n in range.
    GeneralLinear { module: &'a TruncatedVICModule<F>, kind: GroupKind, presentations: &'a BTreeMap<usize, GlPresentation> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityRow {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub dim: usize,
    /// Rank of H_k(G_n; M_n) → H_k(G_{n+1}; M_{n+1}); absent when not computed.
    pub map_rank: Option<usize>,
    pub map_iso: Option<bool>,
    pub map_surj: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityTable {
    pub rows: Vec<StabilityRow>,
}

impl StabilityTable {
    /// Least n such that every recorded map from n on is an isomorphism.
    pub fn iso_onset(&self) -> Option<usize> {
        let last = self.rows.iter().rposition(|r| r.map_iso.is_some())?;
        let mut onset = None;
        for r in self.rows[..=last].iter().rev() {
            if r.map_iso == Some(true) {
                onset = Some(r.n);
            } else {
                break;
            }
        }
        onset
    }

    /// Least n such that dims are constant from n to the end of the table.
    pub fn dim_onset(&self) -> Option<usize> {
        let last = self.rows.last()?;
        let mut onset = last.n;
        for r in self.rows.iter().rev() {
            if r.dim != last.dim {
                break;
            }
            onset = r.n;
        }
        Some(onset)
    }
}

/// G_n with its generator action on M_n, the stabilization module map M_n → M_{n+1}, and
/// images of the generators of G_n as words in the generators of G_{n+1}.
struct Level<F: Field> {
    rep: Representation<F>,
    presentation: Option<Presentation>,
}

fn symmetric_level<F: Field>(m: &TruncatedFIModule<F>, n: usize) -> Result<Level<F>, HomError> {
    let rep = Representation::new(m.field.clone(), m.dims[n], m.transpositions[n].clone())?;
    Ok(Level { rep, presentation: Some(Presentation::coxeter(n)) })
}

fn gl_level<F: Field>(
    module: &TruncatedVICModule<F>,
    kind: GroupKind,
    presentations: &BTreeMap<usize, GlPresentation>,
    n: usize,
    k: usize,
) -> Result<Level<F>, HomError> {
    let r = module.ring.as_ref();
    if n == 0 {
        return Err(HomError::Invalid("GL_0 is not supported; start at n = 1".into()));
    }
    let (gens, presentation) = if k == 1 {
        let p = presentations
            .get(&n)
            .ok_or_else(|| HomError::MissingPresentation(format!("no presentation of {kind:?}_{n} was supplied")))?;
        (p.generators.clone(), Some(p.presentation.clone()))
    } else {
        let g = match kind {
            GroupKind::GL => gl_generators(r, n),
            GroupKind::EL => el_generators(r, n),
            GroupKind::SL => generate_group(&module.ring, n, kind, None, DEFAULT_GROUP_GUARD)?.generators,
            _ => return Err(HomError::Invalid(format!("{kind:?} needs an ideal"))),
        };
        (g, None)
    };
    let mats = gens.iter().map(|g| module.rho(g)).collect();
    Ok(Level { rep: Representation::new(module.field.clone(), module.dims[n], mats)?, presentation })
}

struct Cell<F: Field> {
    dim: usize,
    h0: Option<crate::exactlin::Quotient<F::E>>,
    h1: Option<PresentationComplex<F>>,
}

fn cell<F: Field>(level: &Level<F>, k: usize) -> Result<Cell<F>, HomError> {
    if k == 0 {
        let q = coinvariant_quotient(&level.rep);
        return Ok(Cell { dim: q.dim, h0: Some(q), h1: None });
    }
    let p = level.presentation.as_ref().ok_or_else(|| HomError::MissingPresentation("H_1 needs a presentation".into()))?;
    let c = PresentationComplex::new(p, &level.rep)?;
    Ok(Cell { dim: c.h1().dim, h0: None, h1: Some(c) })
}

/// Dims of H_k(G_n; M_n) for n in range, with the maps to n + 1 where they are computable:
/// on coinvariants always, on H_1 for the symmetric family through the Coxeter inclusions.
pub fn twisted_stability_table<F: Field>(
    family: &StabilityFamily<'_, F>,
    k: usize,
    n_range: RangeInclusive<usize>,
    jobs: usize,
) -> Result<StabilityTable, HomError> {
    if k > 1 {
        return Err(HomError::Invalid("only k ≤ 1 is supported".into()));
    }
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let truncation = match family {
        StabilityFamily::Symmetric(m) => m.truncation,
        StabilityFamily::GeneralLinear { module, .. } => module.truncation,
    };
    if hi > truncation {
        return Err(HomError::Invalid(format!("range ends at {hi} beyond truncation {truncation}")));
    }
    let label = match family {
        StabilityFamily::Symmetric(_) => "symmetric".to_string(),
        StabilityFamily::GeneralLinear { module, kind, .. } => format!("{kind:?}({})", module.ring.label()),
    };
    let top = (hi + 1).min(truncation);
    let ns: Vec<usize> = (lo..=top).collect();
    let levels = parallel_map(&ns, jobs, |&n| -> Result<(Level<F>, Cell<F>), HomError> {
        let level = match family {
            StabilityFamily::Symmetric(m) => symmetric_level(m, n)?,
            StabilityFamily::GeneralLinear { module, kind, presentations } => gl_level(module, *kind, presentations, n, k)?,
        };
        let c = cell(&level, k)?;
        Ok((level, c))
    });
    let levels: Vec<(Level<F>, Cell<F>)> = levels.into_iter().collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        if n > hi {
            break;
        }
        let (_, c) = &levels[i];
        let map = match levels.get(i + 1) {
            Some((next, c2)) => stabilization_map(family, n, c, next, c2)?,
            None => None,
        };
        let (map_rank, map_iso, map_surj) = match map {
            Some(r) => (Some(r), Some(r == c.dim && r == levels[i + 1].1.dim), Some(r == levels[i + 1].1.dim)),
            None => (None, None, None),
        };
        rows.push(StabilityRow { family: label.clone(), n, k, dim: c.dim, map_rank, map_iso, map_surj });
    }
    Ok(StabilityTable { rows })
}

fn module_map<F: Field>(family: &StabilityFamily<'_, F>, n: usize) -> Mat<F::E> {
    match family {
        StabilityFamily::Symmetric(m) => m.inclusions[n].clone(),
        StabilityFamily::GeneralLinear { module, .. } => module.inclusion_mats[n].clone(),
    }
}

fn stabilization_map<F: Field>(
    family: &StabilityFamily<'_, F>,
    n: usize,
    c: &Cell<F>,
    next: &Level<F>,
    c2: &Cell<F>,
) -> Result<Option<usize>, HomError> {
    let j = module_map(family, n);
    let f = &next.rep.field;
    if let (Some(qa), Some(qb)) = (&c.h0, &c2.h0) {
        return Ok(Some(rank(f, &induced_on_quotients(f, &j, qa, qb))));
    }
    match (family, &c.h1, &c2.h1) {
        (StabilityFamily::Symmetric(_), Some(a), Some(b)) => {
            let images: Vec<Vec<i32>> = (1..n as i32).map(|t| vec![t]).collect();
            Ok(Some(rank(f, &h1_map(a, b, &images, &j)?)))
        }
        _ => Ok(None),
    }
}
