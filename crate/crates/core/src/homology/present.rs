//! Group presentations and H_1 through Fox calculus.
//!
//! Chains are M ← M^S ← M^R with ∂_1(m e_s) = (s⁻¹ − 1)m and ∂_2 given by Fox derivatives
//! evaluated under the involution g ↦ g⁻¹, which turns the left module into a right one.

use serde::{Deserialize, Serialize};

use super::group::Representation;
use super::sq::SubQuotient;
use super::HomError;
use crate::exactlin::dense::{add, column_space, identity, inverse, is_identity, is_zero_mat, kernel_space, mul, sub, zeros};
use crate::exactlin::{Field, Mat};

/// Generators x_1..x_n; a letter ±i stands for x_i^{±1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<i32>>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i32>>) -> Result<Self, HomError> {
        for r in &relators {
            if r.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > generators) {
                return Err(HomError::Invalid(format!("relator {r:?} uses an unknown generator")));
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// S_n on the adjacent transpositions s_1..s_{n−1}.
    pub fn coxeter(n: usize) -> Self {
        let m = n.saturating_sub(1) as i32;
        let mut rel = Vec::new();
        for i in 1..=m {
            rel.push(vec![i, i]);
        }
        for i in 1..m {
            rel.push(vec![i, i + 1, i, i + 1, i, i + 1]);
        }
        for i in 1..=m {
            for j in i + 2..=m {
                rel.push(vec![i, j, i, j]);
            }
        }
        Presentation { generators: m as usize, relators: rel }
    }

    /// Z = ⟨a | ⟩.
    pub fn integers() -> Self {
        Presentation { generators: 1, relators: Vec::new() }
    }

    /// Z² = ⟨a, b | a b a⁻¹ b⁻¹⟩.
    pub fn integers_squared() -> Self {
        Presentation { generators: 2, relators: vec![vec![1, 2, -1, -2]] }
    }
}

fn letter<F: Field>(gens: &[Mat<F::E>], invs: &[Mat<F::E>], l: i32) -> (Mat<F::E>, Mat<F::E>) {
    let i = l.unsigned_abs() as usize - 1;
    if l > 0 {
        (gens[i].clone(), invs[i].clone())
    } else {
        (invs[i].clone(), gens[i].clone())
    }
}

fn inverses<F: Field>(rep: &Representation<F>) -> Result<Vec<Mat<F::E>>, HomError> {
    rep.gens
        .iter()
        .map(|g| inverse(&rep.field, g).ok_or_else(|| HomError::Invalid("generator is not invertible".into())))
        .collect()
}

/// ρ(w).
pub fn evaluate<F: Field>(rep: &Representation<F>, word: &[i32]) -> Result<Mat<F::E>, HomError> {
    let invs = inverses(rep)?;
    let f = &rep.field;
    let mut m = identity(f, rep.dim);
    for &l in word {
        m = mul(f, &m, &letter::<F>(&rep.gens, &invs, l).0);
    }
    Ok(m)
}

/// ρ applied to the conjugate Fox derivatives of `word`, one matrix per generator.
fn fox_conjugate<F: Field>(rep: &Representation<F>, invs: &[Mat<F::E>], word: &[i32]) -> Vec<Mat<F::E>> {
    let f = &rep.field;
    let mut out = vec![zeros(f, rep.dim, rep.dim); rep.gens.len()];
    // ρ(x_1 ⋯ x_i)⁻¹
    let mut prefix_inv = identity(f, rep.dim);
    for &l in word {
        let i = l.unsigned_abs() as usize - 1;
        let (_, li) = letter::<F>(&rep.gens, invs, l);
        if l > 0 {
            out[i] = add(f, &out[i], &prefix_inv);
            prefix_inv = mul(f, &li, &prefix_inv);
        } else {
            prefix_inv = mul(f, &li, &prefix_inv);
            out[i] = sub(f, &out[i], &prefix_inv);
        }
    }
    out
}

/// The truncated chain complex M ← M^S ← M^R of a presentation.
#[derive(Clone, Debug)]
pub struct PresentationComplex<F: Field> {
    pub field: F,
    pub dim: usize,
    pub d1: Mat<F::E>,
    pub d2: Mat<F::E>,
    invs: Vec<Mat<F::E>>,
    rep: Representation<F>,
}

fn place<F: Field>(f: &F, target: &mut Mat<F::E>, r0: usize, c0: usize, block: &Mat<F::E>) {
    for i in 0..block.rows {
        for j in 0..block.cols {
            let v = block.get(i, j);
            if !f.is_zero(v) {
                target.set(r0 + i, c0 + j, v.clone());
            }
        }
    }
}

impl<F: Field> PresentationComplex<F> {
    pub fn new(p: &Presentation, rep: &Representation<F>) -> Result<Self, HomError> {
        if rep.gens.len() != p.generators {
            return Err(HomError::Invalid(format!("{} generator matrices for {} generators", rep.gens.len(), p.generators)));
        }
        let f = &rep.field;
        for r in &p.relators {
            if !is_identity(f, &evaluate(rep, r)?) {
                return Err(HomError::Relation(format!("relator {r:?} does not act trivially")));
            }
        }
        let invs = inverses(rep)?;
        let (d, s) = (rep.dim, p.generators);
        let id = identity(f, d);
        let mut d1 = zeros(f, d, d * s);
        for (i, gi) in invs.iter().enumerate() {
            place(f, &mut d1, 0, i * d, &sub(f, gi, &id));
        }
        let mut d2 = zeros(f, d * s, d * p.relators.len());
        for (j, r) in p.relators.iter().enumerate() {
            for (i, m) in fox_conjugate(rep, &invs, r).iter().enumerate() {
                place(f, &mut d2, i * d, j * d, m);
            }
        }
        if !is_zero_mat(f, &mul(f, &d1, &d2)) {
            return Err(HomError::Internal("∂_1 ∂_2 ≠ 0".into()));
        }
        Ok(PresentationComplex { field: f.clone(), dim: d, d1, d2, invs, rep: rep.clone() })
    }

    pub fn h0(&self) -> SubQuotient<F::E> {
        let f = &self.field;
        SubQuotient::new(f, &crate::exactlin::dense::whole_space(f, self.dim), &column_space(f, &self.d1)).expect("H_0")
    }

    pub fn h1(&self) -> SubQuotient<F::E> {
        let f = &self.field;
        SubQuotient::new(f, &kernel_space(f, &self.d1), &column_space(f, &self.d2)).expect("∂_1 ∂_2 = 0")
    }

    /// Degree-1 chain map for a homomorphism sending generator t of the source to the word
    /// `images[t]` here, composed with the module map `j` from the source module.
    pub fn fox_chain_map(&self, images: &[Vec<i32>], j: &Mat<F::E>) -> Result<Mat<F::E>, HomError> {
        let f = &self.field;
        let d = self.dim;
        if j.rows != d {
            return Err(HomError::Invalid("module map has the wrong target".into()));
        }
        let mut out = zeros(f, d * self.rep.gens.len(), j.cols * images.len());
        for (t, w) in images.iter().enumerate() {
            if w.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > self.rep.gens.len()) {
                return Err(HomError::Invalid(format!("image word {w:?} uses an unknown generator")));
            }
            for (s, m) in fox_conjugate(&self.rep, &self.invs, w).iter().enumerate() {
                place(f, &mut out, s * d, t * j.cols, &mul(f, m, j));
            }
        }
        Ok(out)
    }
}

pub fn h1_presentation<F: Field>(p: &Presentation, rep: &Representation<F>) -> Result<usize, HomError> {
    Ok(PresentationComplex::new(p, rep)?.h1().dim)
}

/// Matrix of H_1(G'; M') → H_1(G; M) for the homomorphism given by generator images and an
/// equivariant module map j : M' → M.
pub fn h1_map<F: Field>(
    source: &PresentationComplex<F>,
    target: &PresentationComplex<F>,
    images: &[Vec<i32>],
    j: &Mat<F::E>,
) -> Result<Mat<F::E>, HomError> {
    let f = &target.field;
    for (t, w) in images.iter().enumerate() {
        let lhs = mul(f, &evaluate(&target.rep, w)?, j);
        let rhs = mul(f, j, &source.rep.gens[t]);
        if lhs != rhs {
            return Err(HomError::Invalid(format!("module map is not equivariant for generator {t}")));
        }
    }
    let f1 = target.fox_chain_map(images, j)?;
    source
        .h1()
        .induced(f, &f1, &target.h1())
        .ok_or_else(|| HomError::Internal("Fox chain map does not preserve cycles and boundaries".into()))
}
