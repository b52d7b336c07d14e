//! Enumerated finite groups, their representations, coinvariants and invariants.

use std::collections::HashMap;
use std::hash::Hash;

use super::HomError;
use crate::coeffsys::CayleyTable;
use crate::exactlin::dense::{
    column_space, identity, inverse, kernel_space, mul, quotient, sub, sum_spaces, vstack, zero_space, Quotient,
};
use crate::exactlin::{Field, Mat};

/// A finite group by its full multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    /// mul[a][b] = a·b.
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub generators: Vec<usize>,
}

impl FiniteGroup {
    /// Enumerates ⟨gens⟩; fails when the order exceeds `guard`.
    pub fn enumerate<T: Clone + Eq + Hash>(
        identity: T,
        gens: &[T],
        op: impl Fn(&T, &T) -> T,
        guard: usize,
    ) -> Result<(Self, Vec<T>), HomError> {
        let (table, elems) =
            CayleyTable::enumerate(identity, gens, &op, guard).ok_or(HomError::Guard(format!("group order exceeds {guard}")))?;
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mul: Vec<Vec<usize>> = elems.iter().map(|a| elems.iter().map(|b| index[&op(a, b)]).collect()).collect();
        let generators = (0..gens.len()).map(|g| table.left[g][table.identity]).collect();
        Ok((Self::from_mul(mul, generators)?, elems))
    }

    /// Checks identity, inverses and associativity.
    pub fn from_mul(mul: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self, HomError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(HomError::Invalid("multiplication table is not square".into()));
        }
        if (0..n).any(|a| mul[0][a] != a || mul[a][0] != a) {
            return Err(HomError::Invalid("element 0 is not the identity".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mul[a][b] == 0).ok_or(HomError::Invalid(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                if (0..n).any(|c| mul[ab][c] != mul[a][mul[b][c]]) {
                    return Err(HomError::Invalid("multiplication is not associative".into()));
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(HomError::Invalid("generator out of range".into()));
        }
        Ok(FiniteGroup { mul, inv, generators })
    }

    /// Full table from left multiplication by generators; also returns, for each element x ≠ 1,
    /// a pair (p, g) with x = gen_g · p and p earlier in breadth-first order.
    pub fn from_cayley(table: &CayleyTable) -> (Self, Vec<(usize, usize)>) {
        let n = table.order;
        assert_eq!(table.identity, 0, "Cayley tables start at the identity");
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        let mut order = vec![0];
        parent[0] = (0, usize::MAX);
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for (g, row) in table.left.iter().enumerate() {
                let x = row[p];
                if parent[x].0 == usize::MAX {
                    parent[x] = (p, g);
                    order.push(x);
                }
            }
        }
        let mut mul = vec![Vec::new(); n];
        mul[0] = (0..n).collect();
        for &x in &order[1..] {
            let (p, g) = parent[x];
            mul[x] = mul[p].iter().map(|&y| table.left[g][y]).collect();
        }
        let mut inv = vec![0; n];
        for x in 0..n {
            inv[x] = mul[x].iter().position(|&y| y == 0).expect("finite group");
        }
        let generators = table.left.iter().map(|row| row[0]).collect();
        (FiniteGroup { mul, inv, generators }, parent)
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn trivial() -> Self {
        FiniteGroup { mul: vec![vec![0]], inv: vec![0], generators: Vec::new() }
    }

    /// S_n on {0..n−1} generated by adjacent transpositions; elements are permutation vectors.
    pub fn symmetric(n: usize, guard: usize) -> Result<(Self, Vec<Vec<usize>>), HomError> {
        let gens: Vec<Vec<usize>> = (0..n.saturating_sub(1))
            .map(|i| {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(i, i + 1);
                p
            })
            .collect();
        Self::enumerate((0..n).collect(), &gens, |a, b| b.iter().map(|&x| a[x]).collect(), guard)
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens = if n > 1 { vec![1] } else { Vec::new() };
        Self::from_mul(mul, gens).expect("cyclic table")
    }

    /// Direct product, elements (a, b) ↦ a·|H| + b.
    pub fn product(&self, h: &FiniteGroup) -> Self {
        let (m, n) = (self.order(), h.order());
        let mul = (0..m * n)
            .map(|x| (0..m * n).map(|y| self.mul[x / n][y / n] * n + h.mul[x % n][y % n]).collect())
            .collect();
        let mut gens: Vec<usize> = self.generators.iter().map(|&g| g * n).collect();
        gens.extend(&h.generators);
        FiniteGroup { inv: (0..m * n).map(|x| self.inv[x / n] * n + h.inv[x % n]).collect(), mul, generators: gens }
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Elements of ⟨gens⟩, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul[g][x];
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The subgroup on a set of elements closed under products, with generators `gens`
    /// (given as elements of `self`). Returns the subgroup and its element list inside `self`.
    pub fn subgroup(&self, elements: &[usize], gens: &[usize]) -> Result<(Self, Vec<usize>), HomError> {
        let mut els: Vec<usize> = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.first() != Some(&0) {
            return Err(HomError::Invalid("subgroup must contain the identity".into()));
        }
        let pos: HashMap<usize, usize> = els.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut mul = Vec::with_capacity(els.len());
        for &a in &els {
            let row: Option<Vec<usize>> = els.iter().map(|&b| pos.get(&self.mul[a][b]).copied()).collect();
            mul.push(row.ok_or(HomError::Invalid("elements are not closed under products".into()))?);
        }
        let g: Option<Vec<usize>> = gens.iter().map(|x| pos.get(x).copied()).collect();
        let g = g.ok_or(HomError::Invalid("generator outside the subgroup".into()))?;
        let inv = els.iter().map(|&a| pos[&self.inv[a]]).collect();
        Ok((FiniteGroup { mul, inv, generators: g }, els))
    }

    /// A generating set of a subgroup, chosen greedily in element order.
    pub fn generators_of(&self, elements: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for &x in elements {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }
}

/// A group given by generator matrices acting on the left of k^dim.
#[derive(Clone, Debug)]
pub struct Representation<F: Field> {
    pub field: F,
    pub dim: usize,
    pub gens: Vec<Mat<F::E>>,
}

impl<F: Field> Representation<F> {
    pub fn new(field: F, dim: usize, gens: Vec<Mat<F::E>>) -> Result<Self, HomError> {
        for (i, g) in gens.iter().enumerate() {
            if g.rows != dim || g.cols != dim {
                return Err(HomError::Invalid(format!("generator {i} is {}×{}, expected {dim}×{dim}", g.rows, g.cols)));
            }
            if inverse(&field, g).is_none() {
                return Err(HomError::Invalid(format!("generator {i} is not invertible")));
            }
        }
        Ok(Representation { field, dim, gens })
    }

    pub fn trivial(field: F, dim: usize, generators: usize) -> Self {
        let id = identity(&field, dim);
        Representation { field, dim, gens: vec![id; generators] }
    }
}

/// A representation of an enumerated finite group, with the matrix of every element.
#[derive(Clone, Debug)]
pub struct FiniteGroupRep<F: Field> {
    pub group: FiniteGroup,
    pub module: Representation<F>,
    pub elements: Vec<Mat<F::E>>,
}

impl<F: Field> FiniteGroupRep<F> {
    /// Extends generator matrices to the whole group and checks every relation of the
    /// Cayley graph, i.e. that ρ is a homomorphism.
    pub fn new(group: FiniteGroup, module: Representation<F>) -> Result<Self, HomError> {
        if module.gens.len() != group.generators.len() {
            return Err(HomError::Invalid("one matrix per generator is required".into()));
        }
        let f = &module.field;
        let n = group.order();
        let mut elements: Vec<Option<Mat<F::E>>> = vec![None; n];
        elements[0] = Some(identity(f, module.dim));
        let mut queue = vec![0];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (gi, &g) in group.generators.iter().enumerate() {
                let y = group.mul[g][x];
                let m = mul(f, &module.gens[gi], elements[x].as_ref().unwrap());
                match &elements[y] {
                    None => {
                        elements[y] = Some(m);
                        queue.push(y);
                    }
                    Some(prev) if *prev != m => {
                        return Err(HomError::Relation(format!("generator matrices violate a relation at element {y}")));
                    }
                    _ => {}
                }
            }
        }
        let elements: Option<Vec<_>> = elements.into_iter().collect();
        let elements = elements.ok_or(HomError::Invalid("generators do not generate the group".into()))?;
        Ok(FiniteGroupRep { group, module, elements })
    }

    /// From matrices of all elements; checks ρ(ab) = ρ(a)ρ(b) on generator edges.
    pub fn from_elements(group: FiniteGroup, field: F, dim: usize, elements: Vec<Mat<F::E>>) -> Result<Self, HomError> {
        let gens = group.generators.iter().map(|&g| elements[g].clone()).collect();
        let rep = Self::new(group, Representation::new(field, dim, gens)?)?;
        if rep.elements != elements {
            return Err(HomError::Relation("element matrices do not form a homomorphism".into()));
        }
        Ok(rep)
    }

    pub fn trivial_module(group: FiniteGroup, field: F, dim: usize) -> Self {
        let module = Representation::trivial(field, dim, group.generators.len());
        Self::new(group, module).expect("trivial action")
    }

    /// Permutation module k^n of a permutation group on {0..n−1}.
    pub fn permutation_module(group: FiniteGroup, perms: &[Vec<usize>], field: F) -> Result<Self, HomError> {
        let n = perms.first().map_or(0, |p| p.len());
        let gens = group
            .generators
            .iter()
            .map(|&g| {
                let mut m = crate::exactlin::dense::zeros(&field, n, n);
                for (i, &j) in perms[g].iter().enumerate() {
                    m.set(j, i, field.one());
                }
                m
            })
            .collect();
        Self::new(group, Representation::new(field, n, gens)?)
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }
}

/// Span of (g − 1)v over the generators.
pub fn augmentation_span<F: Field>(rep: &Representation<F>) -> crate::exactlin::Subspace<F::E> {
    let f = &rep.field;
    let id = identity(f, rep.dim);
    let mut s = zero_space(f, rep.dim);
    for g in &rep.gens {
        s = sum_spaces(f, &s, &column_space(f, &sub(f, g, &id)));
    }
    s
}

/// M / span{g·v − v}: its dimension and a projection onto the quotient.
pub fn coinvariants<F: Field>(rep: &Representation<F>) -> (usize, Mat<F::E>) {
    let q = coinvariant_quotient(rep);
    (q.dim, q.proj)
}

pub fn coinvariant_quotient<F: Field>(rep: &Representation<F>) -> Quotient<F::E> {
    quotient(&rep.field, &augmentation_span(rep))
}

/// Common fixed space of the generators.
pub fn invariants<F: Field>(rep: &Representation<F>) -> usize {
    let f = &rep.field;
    if rep.gens.is_empty() {
        return rep.dim;
    }
    let id = identity(f, rep.dim);
    let mut stacked = sub(f, &rep.gens[0], &id);
    for g in &rep.gens[1..] {
        stacked = vstack::<F>(&stacked, &sub(f, g, &id));
    }
    kernel_space(f, &stacked).dim()
}
