//! Polynomial coefficient systems on orderings and the vanishing check.
//!
//! At recursion depth j the system lives on the forward link of a concatenation
//! P = τ_1 ⋯ τ_j, with value F(σ) / Σ_w Im(F(w·σ) → F(σ)) where w runs over the last
//! vertices of the τ_i.

use serde::Serialize;

use super::chain::homology_with_coefficients_jobs;
use super::{CoeffError, CoefficientSystem};
use crate::exactlin::dense::{column_space, preimage, sum_spaces, zero_space, Subspace};
use crate::exactlin::{Coeff, Field, Mat};
use crate::scomplex::{is_weakly_cm, is_weakly_forward_cm, SimplicialComplex};

#[derive(Clone, Debug, Serialize)]
pub struct SystemPolyVerdict {
    pub holds: bool,
    pub degree: isize,
    pub dimension: isize,
    /// Quotient systems examined at each recursion depth.
    pub nodes_per_depth: Vec<usize>,
    pub trace: Vec<String>,
    pub failure: Option<String>,
}

struct Ctx<'a, F: Field> {
    sys: &'a CoefficientSystem<F>,
    to_empty: Vec<Vec<Mat<F::E>>>,
    /// children[L][s]: cells at level L+1 whose last face is (L, s).
    children: Vec<Vec<Vec<usize>>>,
    nodes: Vec<usize>,
}

impl<F: Field> Ctx<'_, F> {
    /// Cells t with prefix (l, s) and at most `extra` further vertices, as (level, index).
    fn extensions(&self, l: usize, s: usize, extra: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut frontier = vec![(l, s)];
        for _ in 0..extra {
            let mut next = Vec::new();
            for &(l, s) in &frontier {
                if let Some(ch) = self.children.get(l).map(|c| &c[s]) {
                    next.extend(ch.iter().map(|&t| (l + 1, t)));
                }
            }
            out.extend(next.iter().copied());
            frontier = next;
        }
        out
    }

    fn label(&self, l: usize, s: usize) -> String {
        match l.checked_sub(1).and_then(|k| self.sys.base.sequence(k, s)) {
            Some(q) => format!("{q:?}"),
            None if l == 0 => "()".into(),
            None => format!("({}, {s})", l - 1),
        }
    }
}

/// Sum of the images of F(w·σ) → F(σ) for σ = t minus its first `plen` vertices.
fn quotient_data<F: Field>(ctx: &Ctx<'_, F>, t: (usize, usize), plen: usize, w: &[usize]) -> (usize, usize, Subspace<F::E>) {
    let sys = ctx.sys;
    let f = &sys.field;
    let all: Vec<usize> = (0..plen).collect();
    let (ls, ss, _) = sys.delete_positions(t.0, t.1, &all);
    let mut sub = zero_space(f, sys.dims[ls][ss]);
    for &p in w {
        let others: Vec<usize> = (0..plen).filter(|&q| q != p).collect();
        let (lw, sw, _) = sys.delete_positions(t.0, t.1, &others);
        // w·σ → σ drops the first vertex.
        debug_assert_eq!(sys.face_target(lw, sw, 0), ss);
        sub = sum_spaces(f, &sub, &column_space(f, &sys.faces[lw][sw][0]));
    }
    (ls, ss, sub)
}

#[allow(clippy::too_many_arguments)]
fn check_node<F: Field>(
    ctx: &mut Ctx<'_, F>,
    prefix: Option<(usize, usize)>,
    plen: usize,
    w: &[usize],
    d: isize,
    e: isize,
    depth: usize,
    trace: &mut Vec<String>,
) -> Result<(), String> {
    let sys = ctx.sys;
    let f = &sys.field;
    if ctx.nodes.len() <= depth {
        ctx.nodes.resize(depth + 1, 0);
    }
    ctx.nodes[depth] += 1;
    let at = match prefix {
        Some((l, s)) => format!("forward link of {}", ctx.label(l, s)),
        None => "base".to_string(),
    };
    // σ ranges over the cells of the forward link of dimension ≤ e, ∅ first.
    let cells: Vec<(usize, usize)> = if e < -1 {
        Vec::new()
    } else {
        match prefix {
            Some(p) => std::iter::once(p).chain(ctx.extensions(p.0, p.1, (e + 1) as usize)).collect(),
            None => {
                let mut v = vec![(0, 0)];
                for l in 1..sys.cell_levels().min((e + 2) as usize) {
                    v.extend((0..sys.dims[l].len()).map(|s| (l, s)));
                }
                v
            }
        }
    };
    let empty_sub = match prefix {
        Some(p) => quotient_data(ctx, p, plen, w).2,
        None => zero_space(f, sys.empty_dim()),
    };
    for &t in &cells {
        let (ls, ss, sub) = match prefix {
            Some(_) => quotient_data(ctx, t, plen, w),
            None => (t.0, t.1, zero_space(f, sys.dims[t.0][t.1])),
        };
        let dim = sys.dims[ls][ss];
        if d == -1 {
            if dim != sub.dim() {
                return Err(format!("{at}: value on {} is nonzero (dim {})", ctx.label(ls, ss), dim - sub.dim()));
            }
            continue;
        }
        if ls == 0 {
            continue;
        }
        let pre = preimage(f, &ctx.to_empty[ls][ss], &empty_sub);
        if pre.dim() != sub.dim() {
            return Err(format!("{at}: map from {} to the (−1)-simplex is not injective", ctx.label(ls, ss)));
        }
    }
    if d == -1 {
        return Ok(());
    }
    if depth == 0 {
        trace.push(format!("{at}: injective up to dimension {e}"));
    }
    // Recurse into every τ of dimension ℓ ≤ e in this forward link.
    let taus: Vec<(usize, usize)> = cells.iter().copied().filter(|&t| Some(t) != prefix && t.0 > 0).collect();
    for t in taus {
        let tau_len = t.0 - plen;
        let ell = tau_len as isize - 1;
        let mut w2 = w.to_vec();
        w2.push(plen + tau_len - 1);
        check_node(ctx, Some(t), plen + tau_len, &w2, d - 1, e - ell, depth + 1, trace)?;
    }
    Ok(())
}

/// Whether an augmented system on an ordering is polynomial of degree d up to dimension e.
pub fn is_polynomial_system<F: Field>(sys: &CoefficientSystem<F>, d: isize, e: isize) -> Result<SystemPolyVerdict, CoeffError> {
    if !sys.augmented {
        return Err(CoeffError::Invalid("polynomiality needs an augmented system".into()));
    }
    if !sys.base.is_ordering() {
        return Err(CoeffError::Invalid("polynomiality needs an ordering".into()));
    }
    if d < -1 {
        return Err(CoeffError::Invalid(format!("degree {d} < -1")));
    }
    let mut children: Vec<Vec<Vec<usize>>> = sys.dims.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    for l in 2..sys.cell_levels() {
        for s in 0..sys.dims[l].len() {
            let parent = sys.face_target(l, s, l - 1);
            children[l - 1][parent].push(s);
        }
    }
    // Vertices extend the empty prefix.
    if sys.cell_levels() > 1 {
        children[0][0] = (0..sys.dims[1].len()).collect();
    }
    let mut ctx = Ctx { sys, to_empty: sys.to_empty(), children, nodes: Vec::new() };
    let mut trace = Vec::new();
    let res = check_node(&mut ctx, None, 0, &[], d, e, 0, &mut trace);
    Ok(SystemPolyVerdict {
        holds: res.is_ok(),
        degree: d,
        dimension: e,
        nodes_per_depth: ctx.nodes,
        trace,
        failure: res.err(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub n: isize,
    pub degree: isize,
    pub polynomial: bool,
    /// Dimension at which the Cohen–Macaulay precondition was verified.
    pub cm_dimension: isize,
    pub cm_forward: bool,
    /// dims of RH_k for k = −1..=N.
    pub homology: Vec<usize>,
    pub holds: bool,
}

/// Verifies the preconditions, then computes RH_k(X; F) for −1 ≤ k ≤ N and asserts vanishing.
///
/// With `complex` given, X must be its large ordering and CM is checked on the complex;
/// otherwise forward CM of the ordering itself is checked.
pub fn vanishing_check<F: Field>(
    sys: &CoefficientSystem<F>,
    n: isize,
    d: isize,
    complex: Option<&SimplicialComplex>,
    jobs: usize,
) -> Result<VanishingReport, CoeffError> {
    let poly = is_polynomial_system(sys, d, n)?;
    if !poly.holds {
        return Err(CoeffError::Precondition(format!(
            "not polynomial of degree {d} up to dimension {n}: {}",
            poly.failure.unwrap_or_default()
        )));
    }
    // Degree −1 means F vanishes on the N-skeleton; no connectivity input is needed.
    let cm_dim = if d >= 0 { n + d + 1 } else { -1 };
    if d >= 0 {
        let coeff = Coeff::Field(sys.field.id());
        let cm = match complex {
            Some(x) => is_weakly_cm(x, cm_dim, coeff, jobs)?,
            None => is_weakly_forward_cm(&sys.base, cm_dim, coeff, jobs)?,
        };
        if !cm.holds {
            return Err(CoeffError::Precondition(format!("not weakly Cohen–Macaulay of dimension {cm_dim}")));
        }
    }
    let h = homology_with_coefficients_jobs(sys, -1, n, jobs)?;
    Ok(VanishingReport {
        n,
        degree: d,
        polynomial: true,
        cm_dimension: cm_dim,
        cm_forward: complex.is_none(),
        holds: h.vanishes(),
        homology: h.dims,
    })
}
