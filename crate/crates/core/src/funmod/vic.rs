//! VIC(R)-modules over a finite ring R, truncated at rank N.
//!
//! A module is evaluated on any g ∈ GL_n(R) through its recipe; a morphism (f, C) is
//! g_* ∘ J with g = [f | C] and J the composite of standard inclusions.

use std::sync::Arc;

use super::{FunError, PolyVerdict};
use crate::exactlin::dense::{self, column_space, identity, induced_on_quotients, kron, mul, quotient, rank};
use crate::exactlin::{Field, Mat, Quotient};
use crate::finring::group::{closure, gl_generators, power_inverse};
use crate::finring::rmat::is_invertible;
use crate::finring::{Elt, FiniteRing, RMat};

/// Element-count limit for the exhaustive homomorphism check at construction.
pub const DEFAULT_VERIFY_GUARD: usize = 2000;

#[derive(Clone, Debug)]
pub enum VicKind<F: Field> {
    /// M(A) = A ⊗_R V with λ: R → End(V) given on every ring element.
    RepInduced { dim_v: usize, lambda: Vec<Mat<F::E>> },
    /// M(A) = Hom_R(A, R) in F_p-coordinates; R must be an F_p-algebra.
    Dual,
    TensorPower(Box<VicKind<F>>, usize),
    Constant(usize),
}

#[derive(Clone, Debug)]
enum Node<F: Field> {
    Rep { dim_v: usize, lambda: Vec<Mat<F::E>> },
    Dual { dim_r: usize, right_mult: Vec<Mat<F::E>> },
    Tensor(Arc<Node<F>>, usize),
    Constant(usize),
    Shift(Arc<Node<F>>),
    /// quots[n] = ΣM(R^n) / im(M(R^n)).
    Derive(Arc<Node<F>>, Vec<Quotient<F::E>>),
}

fn node_dim<F: Field>(node: &Node<F>, n: usize) -> usize {
    match node {
        Node::Rep { dim_v, .. } => n * dim_v,
        Node::Dual { dim_r, .. } => n * dim_r,
        Node::Tensor(b, d) => node_dim(b, n).pow(*d as u32),
        Node::Constant(d) => *d,
        Node::Shift(b) => node_dim(b, n + 1),
        Node::Derive(_, q) => q[n].dim,
    }
}

/// g_* on M(R^n); g must be invertible.
fn node_rho<F: Field>(node: &Node<F>, r: &FiniteRing, f: &F, g: &RMat) -> Mat<F::E> {
    let n = g.rows;
    match node {
        Node::Rep { dim_v, lambda } => {
            let dv = *dim_v;
            let mut m = dense::zeros(f, n * dv, n * dv);
            for i in 0..n {
                for j in 0..n {
                    let l = &lambda[g.get(i, j)];
                    for a in 0..dv {
                        for b in 0..dv {
                            m.set(i * dv + a, j * dv + b, l.get(a, b).clone());
                        }
                    }
                }
            }
            m
        }
        Node::Dual { dim_r, right_mult } => {
            // φ ↦ φ g^{-1}: (φ h)_j = Σ_i φ_i h_ij.
            let dr = *dim_r;
            let h = power_inverse(r, g);
            let mut m = dense::zeros(f, n * dr, n * dr);
            for i in 0..n {
                for j in 0..n {
                    let rm = &right_mult[h.get(i, j)];
                    for a in 0..dr {
                        for b in 0..dr {
                            m.set(j * dr + a, i * dr + b, rm.get(a, b).clone());
                        }
                    }
                }
            }
            m
        }
        Node::Tensor(b, d) => kron_power(f, &node_rho(b, r, f, g), *d),
        Node::Constant(d) => identity(f, *d),
        Node::Shift(b) => node_rho(b, r, f, &g.pad_identity(r, 1)),
        Node::Derive(b, q) => induced_on_quotients(f, &node_rho(b, r, f, &g.pad_identity(r, 1)), &q[n], &q[n]),
    }
}

/// J_n = (ι_n, 0 ⊕ R)_*: M(R^n) → M(R^{n+1}).
fn node_incl<F: Field>(node: &Node<F>, r: &FiniteRing, f: &F, n: usize) -> Mat<F::E> {
    match node {
        Node::Rep { .. } | Node::Dual { .. } => {
            let (rows, cols) = (node_dim(node, n + 1), node_dim(node, n));
            let mut m = dense::zeros(f, rows, cols);
            for i in 0..cols {
                m.set(i, i, f.one());
            }
            m
        }
        Node::Tensor(b, d) => kron_power(f, &node_incl(b, r, f, n), *d),
        Node::Constant(d) => identity(f, *d),
        Node::Shift(b) => shift_inclusion(b, r, f, n),
        Node::Derive(b, q) => induced_on_quotients(f, &shift_inclusion(b, r, f, n), &q[n], &q[n + 1]),
    }
}

/// R^n ⊕ R → R^{n+1} ⊕ R keeps the new summand last: swap of coordinates n, n+1 after J_{n+1}.
fn shift_inclusion<F: Field>(base: &Node<F>, r: &FiniteRing, f: &F, n: usize) -> Mat<F::E> {
    let mut p = RMat::identity(r, n + 2);
    p.set(n, n, r.zero());
    p.set(n + 1, n + 1, r.zero());
    p.set(n, n + 1, r.one());
    p.set(n + 1, n, r.one());
    mul(f, &node_rho(base, r, f, &p), &node_incl(base, r, f, n + 1))
}

fn kron_power<F: Field>(f: &F, a: &Mat<F::E>, d: usize) -> Mat<F::E> {
    let mut out = identity(f, 1);
    for _ in 0..d {
        out = kron(f, &out, a);
    }
    out
}

#[derive(Clone, Debug)]
pub struct TruncatedVICModule<F: Field> {
    pub ring: Arc<FiniteRing>,
    pub field: F,
    pub truncation: usize,
    pub dims: Vec<usize>,
    /// `generators[n]`: elementary matrices e_ij^a (a over additive generators) and diag(u, 1, ...).
    pub generators: Vec<Vec<RMat>>,
    pub generator_mats: Vec<Vec<Mat<F::E>>>,
    /// J_n for n < N.
    pub inclusion_mats: Vec<Mat<F::E>>,
    node: Arc<Node<F>>,
}

/// F_p-coordinates of ring elements over a greedy additive basis.
fn ring_coordinates<F: Field>(r: &FiniteRing, f: &F) -> Result<(usize, Vec<Vec<F::E>>), FunError> {
    let p = f.id().characteristic();
    let basis = r.additive_generators();
    let k = basis.len();
    if p == 0 || r.characteristic() as u64 != p || (p as usize).checked_pow(k as u32) != Some(r.order()) {
        return Err(FunError::Characteristic { ring: r.characteristic(), field: p });
    }
    let mut coords: Vec<Option<Vec<F::E>>> = vec![None; r.order()];
    let mut digits = vec![0usize; k];
    loop {
        let mut e = r.zero();
        for (d, &b) in digits.iter().zip(&basis) {
            for _ in 0..*d {
                e = r.add(e, b);
            }
        }
        coords[e] = Some(digits.iter().map(|&d| f.from_i64(d as i64)).collect());
        let mut i = 0;
        while i < k {
            digits[i] += 1;
            if digits[i] < p as usize {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    let coords: Option<Vec<Vec<F::E>>> = coords.into_iter().collect();
    let coords = coords.ok_or_else(|| FunError::Invalid("additive generators are not an F_p-basis".into()))?;
    Ok((k, coords))
}

/// λ(a) = multiplication by a mod p on V = F_p, for R = Z/m with p | m (or any ring whose
/// additive group is generated by 1).
pub fn scalar_rep<F: Field>(r: &FiniteRing, f: &F) -> Result<VicKind<F>, FunError> {
    let p = f.id().characteristic();
    if p == 0 || r.characteristic() as u64 % p != 0 {
        return Err(FunError::Characteristic { ring: r.characteristic(), field: p });
    }
    let mut lambda: Vec<Option<Mat<F::E>>> = vec![None; r.order()];
    let mut e = r.zero();
    for k in 0..r.characteristic() {
        lambda[e] = Some(Mat::filled(1, 1, f.from_i64(k as i64)));
        e = r.add(e, r.one());
    }
    let lambda: Option<Vec<_>> = lambda.into_iter().collect();
    let lambda = lambda.ok_or_else(|| FunError::Invalid("ring is not generated additively by 1".into()))?;
    Ok(VicKind::RepInduced { dim_v: 1, lambda })
}

/// V = R in F_p-coordinates with λ(a) = left multiplication by a.
pub fn regular_rep<F: Field>(r: &FiniteRing, f: &F) -> Result<VicKind<F>, FunError> {
    let (k, coords) = ring_coordinates(r, f)?;
    let basis = r.additive_generators();
    let lambda = r
        .elements()
        .map(|a| {
            let cols: Vec<Vec<F::E>> = basis.iter().map(|&b| coords[r.mul(a, b)].clone()).collect();
            Mat::from_rows(k, cols).transpose()
        })
        .collect();
    Ok(VicKind::RepInduced { dim_v: k, lambda })
}

fn check_lambda<F: Field>(r: &FiniteRing, f: &F, dim_v: usize, lambda: &[Mat<F::E>]) -> Result<(), FunError> {
    if lambda.len() != r.order() || lambda.iter().any(|l| l.rows != dim_v || l.cols != dim_v) {
        return Err(FunError::NotHomomorphism("need one dim_v × dim_v matrix per ring element".into()));
    }
    if lambda[r.one()] != identity(f, dim_v) {
        return Err(FunError::NotHomomorphism("λ(1) ≠ 1".into()));
    }
    for a in r.elements() {
        for b in r.elements() {
            if lambda[r.add(a, b)] != dense::add(f, &lambda[a], &lambda[b]) {
                return Err(FunError::NotHomomorphism(format!("λ({a} + {b}) ≠ λ({a}) + λ({b})")));
            }
            if lambda[r.mul(a, b)] != mul(f, &lambda[a], &lambda[b]) {
                return Err(FunError::NotHomomorphism(format!("λ({a}·{b}) ≠ λ({a})λ({b})")));
            }
        }
    }
    Ok(())
}

fn make_node<F: Field>(kind: &VicKind<F>, r: &FiniteRing, f: &F) -> Result<Node<F>, FunError> {
    Ok(match kind {
        VicKind::RepInduced { dim_v, lambda } => {
            check_lambda(r, f, *dim_v, lambda)?;
            Node::Rep { dim_v: *dim_v, lambda: lambda.clone() }
        }
        VicKind::Dual => {
            let (k, coords) = ring_coordinates(r, f)?;
            let basis = r.additive_generators();
            let right_mult = r
                .elements()
                .map(|a| {
                    let cols: Vec<Vec<F::E>> = basis.iter().map(|&b| coords[r.mul(b, a)].clone()).collect();
                    Mat::from_rows(k, cols).transpose()
                })
                .collect();
            Node::Dual { dim_r: k, right_mult }
        }
        VicKind::TensorPower(b, d) => Node::Tensor(Arc::new(make_node(b, r, f)?), *d),
        VicKind::Constant(d) => Node::Constant(*d),
    })
}

pub fn vic_build<F: Field>(
    kind: &VicKind<F>,
    ring: &Arc<FiniteRing>,
    field: &F,
    n_max: usize,
) -> Result<TruncatedVICModule<F>, FunError> {
    let node = make_node(kind, ring, field)?;
    TruncatedVICModule::from_node(ring.clone(), field.clone(), Arc::new(node), n_max)
}

impl<F: Field> TruncatedVICModule<F> {
    fn from_node(ring: Arc<FiniteRing>, field: F, node: Arc<Node<F>>, n_max: usize) -> Result<Self, FunError> {
        let r = ring.as_ref();
        let generators: Vec<Vec<RMat>> = (0..=n_max).map(|n| if n == 0 { Vec::new() } else { gl_generators(r, n) }).collect();
        let generator_mats = generators.iter().map(|gs| gs.iter().map(|g| node_rho(&node, r, &field, g)).collect()).collect();
        let inclusion_mats = (0..n_max).map(|n| node_incl(&node, r, &field, n)).collect();
        let dims = (0..=n_max).map(|n| node_dim(&node, n)).collect();
        let m = TruncatedVICModule { ring, field, truncation: n_max, dims, generators, generator_mats, inclusion_mats, node };
        m.verify(DEFAULT_VERIFY_GUARD)?;
        Ok(m)
    }

    /// g_* on M(R^n) for invertible g ∈ GL_n(R).
    pub fn rho(&self, g: &RMat) -> Mat<F::E> {
        node_rho(&self.node, &self.ring, &self.field, g)
    }

    /// Composite J_{m-1} ∘ ... ∘ J_n.
    pub fn inclusion(&self, n: usize, m: usize) -> Mat<F::E> {
        let mut j = identity(&self.field, self.dims[n]);
        for k in n..m {
            j = mul(&self.field, &self.inclusion_mats[k], &j);
        }
        j
    }

    /// Checks the homomorphism property (exhaustively when |GL_n(R)| ≤ `guard`, otherwise on
    /// products of generator pairs), J_n-equivariance, and triviality of the stabilizer of
    /// (ι, 0 ⊕ R^{m-n}) on the image of M(R^n).
    pub fn verify(&self, guard: usize) -> Result<(), FunError> {
        let r = self.ring.as_ref();
        let f = &self.field;
        for n in 1..=self.truncation {
            let gens = &self.generators[n];
            let mats = &self.generator_mats[n];
            match closure(r, n, gens, guard) {
                Ok(elements) => {
                    for g in &elements {
                        let rg = self.rho(g);
                        for (s, ms) in gens.iter().zip(mats) {
                            if self.rho(&g.mul(r, s)) != mul(f, &rg, ms) {
                                return Err(FunError::Axiom(format!("action on rank {n} is not multiplicative")));
                            }
                        }
                    }
                }
                Err(_) => {
                    for (s, ms) in gens.iter().zip(mats) {
                        for (t, mt) in gens.iter().zip(mats) {
                            if self.rho(&s.mul(r, t)) != mul(f, ms, mt) {
                                return Err(FunError::Axiom(format!("action on rank {n} is not multiplicative")));
                            }
                        }
                    }
                }
            }
        }
        for n in 0..self.truncation {
            let j = &self.inclusion_mats[n];
            for (g, mg) in self.generators[n].iter().zip(&self.generator_mats[n]) {
                if mul(f, j, mg) != mul(f, &self.rho(&g.pad_identity(r, 1)), j) {
                    return Err(FunError::Axiom(format!("J_{n} is not GL_{n}-equivariant")));
                }
            }
            for m in n + 1..=self.truncation {
                let jm = self.inclusion(n, m);
                for h in gl_generators(r, m - n) {
                    if mul(f, &self.rho(&block_identity_then(r, n, &h)), &jm) != jm {
                        return Err(FunError::Axiom(format!("stabilizer moves the image of rank {n} in rank {m}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        fn go<F: Field>(n: &Node<F>) -> String {
            match n {
                Node::Rep { dim_v, .. } => format!("A⊗V(dim {dim_v})"),
                Node::Dual { .. } => "Hom(A,R)".into(),
                Node::Tensor(b, d) => format!("({})^⊗{d}", go(b)),
                Node::Constant(d) => format!("const({d})"),
                Node::Shift(b) => format!("Σ{}", go(b)),
                Node::Derive(b, _) => format!("D{}", go(b)),
            }
        }
        go(&self.node)
    }
}

/// I_n ⊕ h.
fn block_identity_then(r: &FiniteRing, n: usize, h: &RMat) -> RMat {
    let k = h.rows;
    let mut g = RMat::identity(r, n + k);
    for i in 0..k {
        for j in 0..k {
            g.set(n + i, n + j, h.get(i, j));
        }
    }
    g
}

/// A complemented injection R^a → R^b: f is b × a and the columns of `c_basis` span C.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VicMorphism {
    pub f: RMat,
    pub c_basis: RMat,
}

impl VicMorphism {
    pub fn source_rank(&self) -> usize {
        self.f.cols
    }

    pub fn target_rank(&self) -> usize {
        self.f.rows
    }

    /// The block [f | C].
    pub fn block(&self) -> RMat {
        let b = self.f.rows;
        let mut cols: Vec<Vec<Elt>> = (0..self.f.cols).map(|j| self.f.col(j)).collect();
        cols.extend((0..self.c_basis.cols).map(|j| self.c_basis.col(j)));
        RMat::from_cols(b, &cols)
    }

    /// (ι_a, 0 ⊕ R^{b-a}).
    pub fn standard(r: &FiniteRing, a: usize, b: usize) -> Self {
        let id = RMat::identity(r, b);
        let cols: Vec<Vec<Elt>> = (0..b).map(|j| id.col(j)).collect();
        VicMorphism { f: RMat::from_cols(b, &cols[..a]), c_basis: RMat::from_cols(b, &cols[a..]) }
    }

    /// `self` followed by `next`: (f_2 f_1, C_2 ⊕ f_2(C_1)).
    pub fn then(&self, r: &FiniteRing, next: &VicMorphism) -> VicMorphism {
        let f = next.f.mul(r, &self.f);
        let fc1 = next.f.mul(r, &self.c_basis);
        let b = next.f.rows;
        let mut cols: Vec<Vec<Elt>> = (0..next.c_basis.cols).map(|j| next.c_basis.col(j)).collect();
        cols.extend((0..fc1.cols).map(|j| fc1.col(j)));
        VicMorphism { f, c_basis: RMat::from_cols(b, &cols) }
    }
}

/// (f, C)_* = [f | C]_* ∘ J_{b-1} ∘ ... ∘ J_a.
pub fn vic_map<F: Field>(module: &TruncatedVICModule<F>, phi: &VicMorphism) -> Result<Mat<F::E>, FunError> {
    let (a, b) = (phi.source_rank(), phi.target_rank());
    if phi.c_basis.rows != b || phi.c_basis.cols + a != b {
        return Err(FunError::Invalid("complement basis has the wrong shape".into()));
    }
    if b > module.truncation {
        return Err(FunError::Truncation { needed: b, have: module.truncation });
    }
    let g = phi.block();
    if !is_invertible(&module.ring, &g, 1 << 22)? {
        return Err(FunError::NotComplementary);
    }
    Ok(mul(&module.field, &module.rho(&g), &module.inclusion(a, b)))
}

/// ΣM(A) = M(A ⊕ R) and DM(A) = ΣM(A) / im M(A), truncated at N − 1.
pub fn vic_shift_derive<F: Field>(
    module: &TruncatedVICModule<F>,
) -> Result<(TruncatedVICModule<F>, TruncatedVICModule<F>), FunError> {
    let big_n = module.truncation;
    if big_n < 1 {
        return Err(FunError::Truncation { needed: 1, have: big_n });
    }
    let f = &module.field;
    let shift = Arc::new(Node::Shift(module.node.clone()));
    let quots = (0..big_n).map(|n| quotient(f, &column_space(f, &module.inclusion_mats[n]))).collect();
    let derive = Arc::new(Node::Derive(module.node.clone(), quots));
    let s = TruncatedVICModule::from_node(module.ring.clone(), f.clone(), shift, big_n - 1)?;
    let d = TruncatedVICModule::from_node(module.ring.clone(), f.clone(), derive, big_n - 1)?;
    Ok((s, d))
}

/// Degree d starting at m, checked on ranks ≤ N.
pub fn vic_poly_check<F: Field>(module: &TruncatedVICModule<F>, d: isize, m: isize) -> Result<PolyVerdict, FunError> {
    let mut trace = Vec::new();
    let failure = vic_poly_rec(module, d, m, &mut trace)?;
    Ok(PolyVerdict { holds: failure.is_none(), degree: d, start: m, verified_up_to: module.truncation, trace, failure })
}

fn vic_poly_rec<F: Field>(
    module: &TruncatedVICModule<F>,
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
        trace.push(format!("degree -1 from {m}: ranks {lo}..={big_n} vanish"));
        for n in lo..=big_n {
            if module.dims[n] != 0 {
                return Ok(Some(format!("M(R^{n}) has dimension {} (degree -1 from {m})", module.dims[n])));
            }
        }
        return Ok(None);
    }
    trace.push(format!("degree {d} from {m}: J_n injective for ranks {lo}..{big_n}"));
    for n in lo..big_n {
        if rank(&module.field, &module.inclusion_mats[n]) != module.dims[n] {
            return Ok(Some(format!("J_{n} is not injective (degree {d} from {m})")));
        }
    }
    if big_n == 0 {
        trace.push("derived module is empty below the truncation".into());
        return Ok(None);
    }
    let (_, dm) = vic_shift_derive(module)?;
    vic_poly_rec(&dm, d - 1, m - 1, trace)
}
