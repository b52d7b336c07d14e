//! Finite rings given by operation tables, with ideals and quotients.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::RingError;
use crate::exactlin::field::is_prime;

pub const DEFAULT_RING_GUARD: usize = 256;

pub type Elt = usize;

/// A finite ring with identity. Elements are indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    order: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: Elt,
    one: Elt,
    label: String,
}

/// On-disk form: `{order, add, mul, one, label}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingFile {
    pub order: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub one: usize,
    #[serde(default)]
    pub label: String,
}

/// Constructors accepted by [`make_ring`].
#[derive(Clone, Debug)]
pub enum RingSpec {
    Zmod(usize),
    PrimeField(usize),
    Product(Box<RingSpec>, Box<RingSpec>),
    /// Group ring F_p[G] for a group given by its multiplication table (identity at index 0).
    GroupRing { p: usize, table: Vec<Vec<usize>>, name: String },
}

impl RingSpec {
    pub fn cyclic_group_ring(p: usize, m: usize) -> RingSpec {
        let table = (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect();
        RingSpec::GroupRing { p, table, name: format!("C_{m}") }
    }
}

pub fn make_ring(spec: &RingSpec) -> Result<FiniteRing, RingError> {
    make_ring_guarded(spec, DEFAULT_RING_GUARD)
}

pub fn make_ring_guarded(spec: &RingSpec, guard: usize) -> Result<FiniteRing, RingError> {
    let r = match spec {
        RingSpec::Zmod(m) => {
            if *m < 2 {
                return Err(RingError::Invalid(format!("Z/{m} needs m >= 2")));
            }
            check_guard(*m, guard)?;
            zmod_tables(*m, format!("Z/{m}"))
        }
        RingSpec::PrimeField(p) => {
            if !is_prime(*p as u64) {
                return Err(RingError::Invalid(format!("{p} is not prime")));
            }
            check_guard(*p, guard)?;
            zmod_tables(*p, format!("F_{p}"))
        }
        RingSpec::Product(a, b) => {
            let ra = make_ring_guarded(a, guard)?;
            let rb = make_ring_guarded(b, guard)?;
            check_guard(ra.order * rb.order, guard)?;
            product_tables(&ra, &rb)
        }
        RingSpec::GroupRing { p, table, name } => {
            if !is_prime(*p as u64) {
                return Err(RingError::Invalid(format!("{p} is not prime")));
            }
            check_group_table(table)?;
            let g = table.len();
            let order = (*p).checked_pow(g as u32).filter(|&o| o <= guard).ok_or(RingError::Guard {
                what: "ring order".into(),
                limit: guard,
            })?;
            group_ring_tables(*p, table, order, format!("F_{p}[{name}]"))
        }
    };
    r.verify_axioms()?;
    Ok(r)
}

fn check_guard(order: usize, guard: usize) -> Result<(), RingError> {
    if order > guard {
        return Err(RingError::Guard { what: "ring order".into(), limit: guard });
    }
    Ok(())
}

fn check_group_table(t: &[Vec<usize>]) -> Result<(), RingError> {
    let g = t.len();
    let bad = |s: &str| Err(RingError::Invalid(format!("group table: {s}")));
    if g == 0 {
        return bad("empty");
    }
    for row in t {
        if row.len() != g || row.iter().any(|&x| x >= g) {
            return bad("not square or out of range");
        }
        let set: BTreeSet<_> = row.iter().collect();
        if set.len() != g {
            return bad("row is not a permutation");
        }
    }
    for i in 0..g {
        if t[0][i] != i || t[i][0] != i {
            return bad("index 0 must be the identity");
        }
        for j in 0..g {
            for k in 0..g {
                if t[t[i][j]][k] != t[i][t[j][k]] {
                    return bad("not associative");
                }
            }
        }
    }
    Ok(())
}

fn zmod_tables(m: usize, label: String) -> FiniteRing {
    let mut add = vec![0u16; m * m];
    let mut mul = vec![0u16; m * m];
    for a in 0..m {
        for b in 0..m {
            add[a * m + b] = ((a + b) % m) as u16;
            mul[a * m + b] = ((a * b) % m) as u16;
        }
    }
    FiniteRing::from_raw(m, add, mul, 0, 1 % m, label)
}

fn product_tables(a: &FiniteRing, b: &FiniteRing) -> FiniteRing {
    let n = a.order * b.order;
    let idx = |x: usize, y: usize| x * b.order + y;
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for u in 0..n {
        let (ua, ub) = (u / b.order, u % b.order);
        for v in 0..n {
            let (va, vb) = (v / b.order, v % b.order);
            add[u * n + v] = idx(a.add(ua, va), b.add(ub, vb)) as u16;
            mul[u * n + v] = idx(a.mul(ua, va), b.mul(ub, vb)) as u16;
        }
    }
    FiniteRing::from_raw(n, add, mul, idx(a.zero, b.zero), idx(a.one, b.one), format!("{}x{}", a.label, b.label))
}

/// Element index = Σ c_g p^g over coefficient vectors c ∈ F_p^G.
fn group_ring_tables(p: usize, table: &[Vec<usize>], order: usize, label: String) -> FiniteRing {
    let g = table.len();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; g];
        for slot in d.iter_mut() {
            *slot = x % p;
            x /= p;
        }
        d
    };
    let encode = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
    let all: Vec<Vec<usize>> = (0..order).map(digits).collect();
    let mut add = vec![0u16; order * order];
    let mut mul = vec![0u16; order * order];
    for u in 0..order {
        for v in 0..order {
            let s: Vec<usize> = (0..g).map(|i| (all[u][i] + all[v][i]) % p).collect();
            add[u * order + v] = encode(&s) as u16;
            let mut pr = vec![0usize; g];
            for i in 0..g {
                if all[u][i] == 0 {
                    continue;
                }
                for j in 0..g {
                    let k = table[i][j];
                    pr[k] = (pr[k] + all[u][i] * all[v][j]) % p;
                }
            }
            mul[u * order + v] = encode(&pr) as u16;
        }
    }
    FiniteRing::from_raw(order, add, mul, 0, 1, label)
}

impl FiniteRing {
    fn from_raw(order: usize, add: Vec<u16>, mul: Vec<u16>, zero: Elt, one: Elt, label: String) -> Self {
        let mut neg = vec![0u16; order];
        for a in 0..order {
            for b in 0..order {
                if add[a * order + b] as usize == zero {
                    neg[a] = b as u16;
                }
            }
        }
        FiniteRing { order, add, mul, neg, zero, one, label }
    }

    /// Builds from explicit tables and verifies every ring axiom.
    pub fn from_file(file: &RingFile, guard: usize) -> Result<Self, RingError> {
        let n = file.order;
        check_guard(n, guard)?;
        let flat = |t: &Vec<Vec<usize>>, name: &str| -> Result<Vec<u16>, RingError> {
            if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
                return Err(RingError::Invalid(format!("{name} table has wrong shape or entries")));
            }
            Ok(t.iter().flatten().map(|&x| x as u16).collect())
        };
        let add = flat(&file.add, "add")?;
        let mul = flat(&file.mul, "mul")?;
        if file.one >= n {
            return Err(RingError::Invalid("one out of range".into()));
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| add[z * n + a] as usize == a && add[a * n + z] as usize == a))
            .ok_or_else(|| RingError::Invalid("no additive identity".into()))?;
        let r = FiniteRing::from_raw(n, add, mul, zero, file.one, file.label.clone());
        r.verify_axioms()?;
        Ok(r)
    }

    pub fn to_file(&self) -> RingFile {
        let n = self.order;
        RingFile {
            order: n,
            add: (0..n).map(|a| (0..n).map(|b| self.add(a, b)).collect()).collect(),
            mul: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
            one: self.one,
            label: self.label.clone(),
        }
    }

    /// Checks associativity, commutativity of +, distributivity, identities and negatives.
    pub fn verify_axioms(&self) -> Result<(), RingError> {
        let n = self.order;
        let fail = |s: String| Err(RingError::Axiom(s));
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                return fail(format!("{a} + 0 != {a}"));
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return fail(format!("{a} * 1 != {a}"));
            }
            if self.add(a, self.neg(a)) != self.zero {
                return fail(format!("{a} has no negative"));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return fail(format!("{a} + {b} != {b} + {a}"));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail(format!("addition not associative at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail(format!("multiplication not associative at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail(format!("left distributivity fails at ({a},{b},{c})"));
                    }
                    if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return fail(format!("right distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn zero(&self) -> Elt {
        self.zero
    }
    pub fn one(&self) -> Elt {
        self.one
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add[a * self.order + b] as Elt
    }
    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a * self.order + b] as Elt
    }
    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg[a] as Elt
    }
    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    pub fn elements(&self) -> std::ops::Range<Elt> {
        0..self.order
    }

    /// Integer multiple n·1.
    pub fn from_int(&self, n: i64) -> Elt {
        let base = if n < 0 { self.neg(self.one) } else { self.one };
        let mut acc = self.zero;
        for _ in 0..n.unsigned_abs() {
            acc = self.add(acc, base);
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Additive order of 1.
    pub fn characteristic(&self) -> usize {
        let mut acc = self.one;
        let mut k = 1;
        while acc != self.zero {
            acc = self.add(acc, self.one);
            k += 1;
        }
        k
    }

    pub fn is_unit(&self, a: Elt) -> bool {
        self.inverse(a).is_some()
    }

    /// Two-sided inverse if it exists.
    pub fn inverse(&self, a: Elt) -> Option<Elt> {
        (0..self.order).find(|&b| self.mul(a, b) == self.one && self.mul(b, a) == self.one)
    }

    pub fn units(&self) -> Vec<Elt> {
        (0..self.order).filter(|&a| self.is_unit(a)).collect()
    }

    /// Greedy additive generating set in index order.
    pub fn additive_generators(&self) -> Vec<Elt> {
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([self.zero]);
        for a in 0..self.order {
            if span.contains(&a) {
                continue;
            }
            gens.push(a);
            span = additive_closure(self, span.iter().copied().chain([a]));
        }
        gens
    }

    /// Left ideal R·a.
    pub fn left_multiples(&self, a: Elt) -> Vec<Elt> {
        let set: BTreeSet<Elt> = (0..self.order).map(|r| self.mul(r, a)).collect();
        set.into_iter().collect()
    }
}

/// Closure of a set under addition (it then is an additive subgroup, since the ring is finite).
pub fn additive_closure(r: &FiniteRing, start: impl IntoIterator<Item = Elt>) -> BTreeSet<Elt> {
    let mut set: BTreeSet<Elt> = start.into_iter().collect();
    set.insert(r.zero());
    let gens: Vec<Elt> = set.iter().copied().collect();
    let mut queue: VecDeque<Elt> = set.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &g in &gens {
            let y = r.add(x, g);
            if set.insert(y) {
                queue.push_back(y);
            }
        }
    }
    set
}

/// A two-sided ideal, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedIdeal {
    pub ring: Arc<FiniteRing>,
    pub elements: Vec<Elt>,
    member: Vec<bool>,
}

impl TwoSidedIdeal {
    /// Smallest two-sided ideal containing `gens`.
    pub fn generated(ring: &Arc<FiniteRing>, gens: &[Elt]) -> Self {
        let r = ring.as_ref();
        let mut seeds: BTreeSet<Elt> = BTreeSet::new();
        for &g in gens {
            for a in r.elements() {
                for b in r.elements() {
                    seeds.insert(r.mul(r.mul(a, g), b));
                }
            }
        }
        let set = additive_closure(r, seeds);
        let mut member = vec![false; r.order()];
        for &x in &set {
            member[x] = true;
        }
        TwoSidedIdeal { ring: ring.clone(), elements: set.into_iter().collect(), member }
    }

    pub fn zero(ring: &Arc<FiniteRing>) -> Self {
        Self::generated(ring, &[])
    }

    #[inline]
    pub fn contains(&self, a: Elt) -> bool {
        self.member[a]
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.ring.order()
    }

    /// Closure under + and two-sided multiplication.
    pub fn verify(&self) -> bool {
        let r = self.ring.as_ref();
        self.elements.iter().all(|&x| {
            self.elements.iter().all(|&y| self.contains(r.add(x, y)))
                && r.elements().all(|a| self.contains(r.mul(a, x)) && self.contains(r.mul(x, a)))
        })
    }
}

/// Every two-sided ideal of a ring, found by closing each element list greedily.
pub fn all_ideals(ring: &Arc<FiniteRing>) -> Vec<TwoSidedIdeal> {
    let mut seen: BTreeSet<Vec<Elt>> = BTreeSet::new();
    let mut frontier = vec![TwoSidedIdeal::zero(ring)];
    let mut out = Vec::new();
    while let Some(i) = frontier.pop() {
        if !seen.insert(i.elements.clone()) {
            continue;
        }
        for a in ring.elements() {
            if !i.contains(a) {
                let mut gens = i.elements.clone();
                gens.push(a);
                let j = TwoSidedIdeal::generated(ring, &gens);
                if !seen.contains(&j.elements) {
                    frontier.push(j);
                }
            }
        }
        out.push(i);
    }
    out.sort_by(|a, b| a.elements.len().cmp(&b.elements.len()).then(a.elements.cmp(&b.elements)));
    out
}

/// Quotient ring R/q with its projection.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub ideal: TwoSidedIdeal,
    pub ring: Arc<FiniteRing>,
    /// projection[a] = class of a in the quotient ring.
    pub projection: Vec<Elt>,
    /// Least representative of each class.
    pub representatives: Vec<Elt>,
}

/// Ideal generated by `gens` and the quotient ring, with classes ordered by least representative.
pub fn ideal_quotient(ring: &Arc<FiniteRing>, gens: &[Elt]) -> QuotientRing {
    let ideal = TwoSidedIdeal::generated(ring, gens);
    quotient_by(ring, &ideal)
}

pub fn quotient_by(ring: &Arc<FiniteRing>, ideal: &TwoSidedIdeal) -> QuotientRing {
    let r = ring.as_ref();
    let mut projection = vec![usize::MAX; r.order()];
    let mut reps = Vec::new();
    for a in r.elements() {
        if projection[a] != usize::MAX {
            continue;
        }
        let cls = reps.len();
        reps.push(a);
        for &q in &ideal.elements {
            projection[r.add(a, q)] = cls;
        }
    }
    let k = reps.len();
    let mut add = vec![0u16; k * k];
    let mut mul = vec![0u16; k * k];
    for i in 0..k {
        for j in 0..k {
            add[i * k + j] = projection[r.add(reps[i], reps[j])] as u16;
            mul[i * k + j] = projection[r.mul(reps[i], reps[j])] as u16;
        }
    }
    let label = format!("{}/({})", r.label(), ideal.elements.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    let q = FiniteRing::from_raw(k, add, mul, projection[r.zero()], projection[r.one()], label);
    QuotientRing { ideal: ideal.clone(), ring: Arc::new(q), projection, representatives: reps }
}

/// A ring isomorphism a → b as an element map, found by backtracking.
pub fn find_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Option<Vec<Elt>> {
    if a.order() != b.order() {
        return None;
    }
    let n = a.order();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.zero()] = b.zero();
    used[b.zero()] = true;
    if a.one() != a.zero() {
        if used[b.one()] {
            return None;
        }
        map[a.one()] = b.one();
        used[b.one()] = true;
    }
    fn consistent(a: &FiniteRing, b: &FiniteRing, map: &[usize]) -> bool {
        let n = a.order();
        for x in 0..n {
            if map[x] == usize::MAX {
                continue;
            }
            for y in 0..n {
                if map[y] == usize::MAX {
                    continue;
                }
                for (ra, rb) in [(a.add(x, y), b.add(map[x], map[y])), (a.mul(x, y), b.mul(map[x], map[y]))] {
                    if map[ra] != usize::MAX && map[ra] != rb {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(a: &FiniteRing, b: &FiniteRing, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let Some(x) = (0..a.order()).find(|&x| map[x] == usize::MAX) else {
            return consistent(a, b, map);
        };
        for y in 0..b.order() {
            if used[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if consistent(a, b, map) && go(a, b, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    if go(a, b, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}
