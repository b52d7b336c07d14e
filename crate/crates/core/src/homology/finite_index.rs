//! H_0 and H_1 of an abelian group and a finite-index subgroup with unipotent rational
//! coefficients, and the map induced by inclusion.

use num_rational::BigRational;
use serde::Serialize;

use super::bar::bar_homology;
use super::group::{coinvariant_quotient, FiniteGroupRep, Representation};
use super::present::{h1_map, Presentation, PresentationComplex};
use super::HomError;
use crate::exactlin::dense::{identity, induced_on_quotients, inverse, is_identity, mul, pow, rank};
use crate::exactlin::{Mat, Q};
use crate::funmod::is_unipotent;

/// An abelian group with a representation on Q^d.
#[derive(Clone, Debug)]
pub enum AbelianGroup {
    /// Z acting through the image of its generator.
    Integers(Mat<BigRational>),
    /// Z² acting through two commuting matrices.
    IntegersSquared(Mat<BigRational>, Mat<BigRational>),
    Finite(FiniteGroupRep<Q>),
}

/// A finite-index subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lattice {
    /// mZ ⊂ Z.
    Multiples(u64),
    /// The span of two vectors of Z², given as (a, b) and (c, d).
    Sublattice([i64; 2], [i64; 2]),
    /// The subgroup generated by these elements of a finite group.
    Subgroup(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteIndexReport {
    pub index: u64,
    /// (subgroup, group).
    pub h0: (usize, usize),
    pub h1: (usize, usize),
    pub h0_surjective: bool,
    pub h1_surjective: bool,
    /// For finite groups: every element acts as the identity.
    pub acts_trivially: Option<bool>,
    pub holds: bool,
}

/// A^e for signed e.
fn signed_pow(f: &Q, a: &Mat<BigRational>, e: i64) -> Result<Mat<BigRational>, HomError> {
    let base = if e < 0 { inverse(f, a).ok_or_else(|| HomError::Invalid("generator is not invertible".into()))? } else { a.clone() };
    Ok(pow(f, &base, e.unsigned_abs()))
}

/// Letters for x^e with x the generator `g` (1-based).
fn power_word(g: i32, e: i64) -> Vec<i32> {
    let l = if e < 0 { -g } else { g };
    vec![l; e.unsigned_abs() as usize]
}

fn h0_map(f: &Q, sub: &Representation<Q>, whole: &Representation<Q>) -> (usize, usize, bool) {
    let (qa, qb) = (coinvariant_quotient(sub), coinvariant_quotient(whole));
    let m = induced_on_quotients(f, &identity(f, whole.dim), &qa, &qb);
    (qa.dim, qb.dim, rank(f, &m) == qb.dim)
}

fn presented(
    f: &Q,
    p: &Presentation,
    whole: Representation<Q>,
    sub: Representation<Q>,
    images: &[Vec<i32>],
) -> Result<((usize, usize, bool), (usize, usize, bool)), HomError> {
    let h0 = h0_map(f, &sub, &whole);
    let big = PresentationComplex::new(p, &whole)?;
    let small = PresentationComplex::new(p, &sub)?;
    let m = h1_map(&small, &big, images, &identity(f, whole.dim))?;
    let (a, b) = (small.h1().dim, big.h1().dim);
    Ok((h0, (a, b, rank(f, &m) == b)))
}

/// Compares H_k(G'; V) with H_k(G; V), k ≤ 1, after checking V is unipotent.
pub fn finite_index_comparison(g: &AbelianGroup, sub: &Lattice) -> Result<FiniteIndexReport, HomError> {
    let f = Q;
    let unipotent = |m: &Mat<BigRational>| if is_unipotent(&f, m) { Ok(()) } else { Err(HomError::NotUnipotent) };
    let (index, h0, h1, acts_trivially) = match (g, sub) {
        (AbelianGroup::Integers(a), Lattice::Multiples(m)) => {
            unipotent(a)?;
            if *m == 0 {
                return Err(HomError::Invalid("0Z has infinite index".into()));
            }
            let whole = Representation::new(f.clone(), a.rows, vec![a.clone()])?;
            let sub = Representation::new(f.clone(), a.rows, vec![signed_pow(&f, a, *m as i64)?])?;
            let (h0, h1) = presented(&f, &Presentation::integers(), whole, sub, &[power_word(1, *m as i64)])?;
            (*m, h0, h1, None)
        }
        (AbelianGroup::IntegersSquared(a, b), Lattice::Sublattice(v, w)) => {
            unipotent(a)?;
            unipotent(b)?;
            if mul(&f, a, b) != mul(&f, b, a) {
                return Err(HomError::Invalid("the two generators do not commute".into()));
            }
            let det = v[0] * w[1] - v[1] * w[0];
            if det == 0 {
                return Err(HomError::Invalid("sublattice has infinite index".into()));
            }
            let image = |u: &[i64; 2]| -> Result<Mat<BigRational>, HomError> {
                Ok(mul(&f, &signed_pow(&f, a, u[0])?, &signed_pow(&f, b, u[1])?))
            };
            let whole = Representation::new(f.clone(), a.rows, vec![a.clone(), b.clone()])?;
            let sub = Representation::new(f.clone(), a.rows, vec![image(v)?, image(w)?])?;
            let words: Vec<Vec<i32>> = [v, w]
                .iter()
                .map(|u| {
                    let mut x = power_word(1, u[0]);
                    x.extend(power_word(2, u[1]));
                    x
                })
                .collect();
            let (h0, h1) = presented(&f, &Presentation::integers_squared(), whole, sub, &words)?;
            (det.unsigned_abs(), h0, h1, None)
        }
        (AbelianGroup::Finite(rep), Lattice::Subgroup(gens)) => {
            if !rep.group.is_abelian() {
                return Err(HomError::Invalid("the group is not abelian".into()));
            }
            for m in &rep.module.gens {
                unipotent(m)?;
            }
            let trivial = rep.elements.iter().all(|m| is_identity(&f, m));
            let elements = rep.group.closure(gens);
            let (grp, els) = rep.group.subgroup(&elements, gens)?;
            let mats = els.iter().map(|&x| rep.elements[x].clone()).collect();
            let small = FiniteGroupRep::from_elements(grp, f.clone(), rep.dim(), mats)?;
            let (a0, b0, s0) = h0_map(&f, &small.module, &rep.module);
            let ha = bar_homology(&small, 1, usize::MAX)?;
            let hb = bar_homology(rep, 1, usize::MAX)?;
            let index = (rep.group.order() / els.len()) as u64;
            // Both H_1 vanish in characteristic 0, so the map is onto exactly when the target is zero.
            ((index), (a0, b0, s0), (ha[1], hb[1], hb[1] == 0), Some(trivial))
        }
        _ => return Err(HomError::Invalid("subgroup does not match the group".into())),
    };
    let holds = h0.0 == h0.1 && h1.0 == h1.1 && h0.2 && h1.2 && acts_trivially != Some(false);
    Ok(FiniteIndexReport {
        index,
        h0: (h0.0, h0.1),
        h1: (h1.0, h1.1),
        h0_surjective: h0.2,
        h1_surjective: h1.2,
        acts_trivially,
        holds,
    })
}
