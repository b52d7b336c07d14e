//! Group actions on equivariant systems: stabilizers, transitivity, edge elements, and the
//! stabilizer systems H_q(G_σ; F(σ)) on X/G.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::bar::{bar_boundary, bar_cost, bar_dim, inverse_action};
use super::group::FiniteGroup;
use super::sq::{sparse_span, SubQuotient};
use super::HomError;
use crate::coeffsys::build::fi_system_on;
use crate::coeffsys::{vic_system, BuiltSystem, CayleyTable, CoefficientSystem, EquivariantStructure};
use crate::exactlin::dense::{column_space, identity, kernel_space, mul, rank, same_space, span, sub, whole_space, zeros};
use crate::exactlin::{Field, Mat};
use crate::finring::group::gl_generators;
use crate::finring::RMat;
use crate::funmod::{TruncatedFIModule, TruncatedVICModule};
use crate::scomplex::{osim, quotient_by_group, BasesVertex, OBases};

/// Largest group whose cell-by-cell group law is checked when building machine instances.
pub const MACHINE_GROUP_GUARD: usize = 5040;

/// An enumerated group acting on a system through an equivariant structure.
pub struct GroupOnSystem<'a, F: Field> {
    pub system: &'a CoefficientSystem<F>,
    pub equivariance: &'a EquivariantStructure<F>,
    pub group: FiniteGroup,
    /// Generator word of each element, leftmost letter applied last.
    words: Vec<Vec<usize>>,
    /// perms[x][L][s] = x·(L, s).
    perms: Vec<Vec<Vec<usize>>>,
}

impl<'a, F: Field> GroupOnSystem<'a, F> {
    pub fn new(system: &'a CoefficientSystem<F>, equivariance: &'a EquivariantStructure<F>) -> Result<Self, HomError> {
        let table = equivariance
            .table
            .as_ref()
            .ok_or_else(|| HomError::Guard("the group was not enumerated".into()))?;
        let (group, parent) = FiniteGroup::from_cayley(table);
        let n = group.order();
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        for x in 0..n {
            let mut chain = Vec::new();
            let mut y = x;
            while depth[y] == usize::MAX {
                chain.push(y);
                y = parent[y].0;
            }
            for &c in chain.iter().rev() {
                depth[c] = depth[parent[c].0] + 1;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| depth[x]);
        let levels = system.cell_levels();
        let mut words = vec![Vec::new(); n];
        let mut perms: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        perms[0] = (0..levels).map(|l| (0..system.dims[l].len()).collect()).collect();
        for &x in &order[1..] {
            let (p, g) = parent[x];
            let mut w = vec![g];
            w.extend_from_slice(&words[p]);
            words[x] = w;
            perms[x] = (0..levels)
                .map(|l| perms[p][l].iter().map(|&s| equivariance.target(g, l, s)).collect())
                .collect();
        }
        Ok(GroupOnSystem { system, equivariance, group, words, perms })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn act(&self, x: usize, l: usize, s: usize) -> usize {
        self.perms[x][l][s]
    }

    /// Φ_x : F(σ) → F(xσ) for the cell (L, s).
    pub fn phi(&self, x: usize, l: usize, s: usize) -> Mat<F::E> {
        let f = &self.system.field;
        self.equivariance.word_action(f, &self.words[x], l, s, self.system.dims[l][s]).1
    }

    /// Elements fixing the cell (L, s), sorted.
    pub fn stabilizer(&self, l: usize, s: usize) -> Vec<usize> {
        (0..self.order()).filter(|&x| self.perms[x][l][s] == s).collect()
    }

    /// Orbit ids per cell level.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![0]];
        out.extend(self.equivariance.action.orbits(&self.system.base));
        out
    }
}

/// A designated simplex σ_k with the subgroup that should be its stabilizer and the map
/// M_{n−k−1} → M_n whose image F(σ_k) should be inside F(∅).
#[derive(Clone, Debug)]
pub struct Designation<E> {
    pub k: isize,
    pub simplex: usize,
    /// Generators of the designated subgroup, as group elements.
    pub subgroup: Vec<usize>,
    pub value: Mat<E>,
}

pub struct MachineInstance<F: Field> {
    pub built: BuiltSystem<F>,
    pub designations: Vec<Designation<F::E>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerCheck {
    pub k: isize,
    pub simplex: usize,
    pub stabilizer_order: usize,
    pub designated_order: usize,
    pub equal: bool,
    pub value_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub edge: usize,
    /// Least element exchanging the two vertices, commuting with the edge stabilizer and
    /// fixing the image of F(e) in F(∅).
    pub lambda: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MachineReport {
    /// Orbits on the k-simplices, k = 0, 1, ….
    pub orbit_counts: Vec<usize>,
    pub transitive: bool,
    pub stabilizers: Vec<StabilizerCheck>,
    pub stabilizers_ok: bool,
    pub edges: Vec<EdgeCheck>,
    pub edges_ok: bool,
    pub holds: bool,
}

/// Transitivity on the first `levels` simplex levels, the designated stabilizers, and the
/// edge condition on every edge.
pub fn machine_conditions_check<F: Field>(
    ctx: &GroupOnSystem<'_, F>,
    designations: &[Designation<F::E>],
    levels: usize,
) -> Result<MachineReport, HomError> {
    let sys = ctx.system;
    let f = &sys.field;
    let top = levels.min(sys.cell_levels() - 1);
    let orbits = ctx.orbits();
    let orbit_counts: Vec<usize> =
        (1..=top).map(|l| orbits[l].iter().max().map_or(0, |&m| m + 1)).collect();
    let transitive = orbit_counts.iter().all(|&c| c == 1);

    let to_empty = sys.to_empty();
    let mut stabilizers = Vec::new();
    for d in designations {
        let l = usize::try_from(d.k + 1).map_err(|_| HomError::Invalid(format!("level {}", d.k)))?;
        if l >= sys.cell_levels() || d.simplex >= sys.dims[l].len() {
            return Err(HomError::Invalid(format!("no simplex ({}, {})", d.k, d.simplex)));
        }
        let stab = ctx.stabilizer(l, d.simplex);
        let designated = ctx.group.closure(&d.subgroup);
        let t = &to_empty[l][d.simplex];
        let value_matches = d.value.rows == t.rows
            && rank(f, t) == t.cols
            && rank(f, &d.value) == d.value.cols
            && same_space(f, &column_space(f, t), &column_space(f, &d.value));
        stabilizers.push(StabilizerCheck {
            k: d.k,
            simplex: d.simplex,
            stabilizer_order: stab.len(),
            designated_order: designated.len(),
            equal: stab == designated,
            value_matches,
        });
    }
    let stabilizers_ok = stabilizers.iter().all(|s| s.equal && s.value_matches);

    let mut edges = Vec::new();
    if sys.cell_levels() > 2 && sys.augmented {
        let empty: Vec<Mat<F::E>> = (0..ctx.order()).map(|x| ctx.phi(x, 0, 0)).collect();
        for e in 0..sys.dims[2].len() {
            let (v, w) = (sys.face_target(2, e, 1), sys.face_target(2, e, 0));
            let stab = ctx.stabilizer(2, e);
            let t = &to_empty[2][e];
            let lambda = (0..ctx.order()).find(|&x| {
                ctx.act(x, 1, v) == w
                    && stab.iter().all(|&h| ctx.group.mul[x][h] == ctx.group.mul[h][x])
                    && mul(f, &empty[x], t) == *t
            });
            edges.push(EdgeCheck { edge: e, lambda });
        }
    }
    let edges_ok = edges.iter().all(|e| e.lambda.is_some());
    Ok(MachineReport {
        holds: transitive && stabilizers_ok && edges_ok,
        orbit_counts,
        transitive,
        stabilizers,
        stabilizers_ok,
        edges,
        edges_ok,
    })
}

/// S_{n+1} on OSim_n with F_{M,n}; σ_k = (n−k, …, n) with stabilizer S_{n−k} on the
/// remaining points.
pub fn osim_instance<F: Field>(m: &TruncatedFIModule<F>, n: usize) -> Result<MachineInstance<F>, HomError> {
    let base = Arc::new(osim(n, None));
    let built = fi_system_on(m, n, base.clone(), MACHINE_GROUP_GUARD)?;
    let table = built.equivariance.table.as_ref().ok_or_else(|| HomError::Guard("symmetric group too large".into()))?;
    let gens: Vec<usize> = table.left.iter().map(|row| row[0]).collect();
    let mut designations = Vec::new();
    for k in -1..=n as isize {
        let c = (n as isize - k) as usize;
        let simplex = if k < 0 {
            0
        } else {
            let seq: Vec<usize> = (c..=n).collect();
            base.find(&seq).expect("consecutive run is a simplex")
        };
        let subgroup = gens[..c.saturating_sub(1)].to_vec();
        designations.push(Designation { k, simplex, subgroup, value: m.inclusion(c, n + 1) });
    }
    Ok(MachineInstance { built, designations })
}

/// GL_N(R) on OBases(R^{n,r}) with G_{M,n,r}, N = n + r; σ_k = (v_{N−k}, …, v_N) with
/// v_j = (e_j, e_j^*), stabilized by GL_{N−k−1}(R) in the top-left block.
pub fn obases_instance<F: Field>(
    module: &TruncatedVICModule<F>,
    ob: &OBases,
    group_guard: usize,
    guard: usize,
) -> Result<MachineInstance<F>, HomError> {
    let built = vic_system(module, ob, group_guard, guard)?;
    let ring = ob.bases.ring.clone();
    let r = ring.as_ref();
    let big_n = ob.rank();
    let (_, elems) = CayleyTable::enumerate(RMat::identity(r, big_n), &gl_generators(r, big_n), |a, b| a.mul(r, b), group_guard)
        .ok_or_else(|| HomError::Guard(format!("GL_{big_n} exceeds {group_guard}")))?;
    let index: HashMap<&RMat, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let unit = |j: usize| -> Vec<usize> { (0..big_n).map(|i| if i == j { r.one() } else { r.zero() }).collect() };
    let mut designations = Vec::new();
    for k in -1..ob.ss.levels() as isize {
        let c = (big_n as isize - k - 1) as usize;
        let simplex = if k < 0 {
            0
        } else {
            let seq: Option<Vec<usize>> =
                (c..big_n).map(|j| ob.bases.vertex_id(&BasesVertex { x: unit(j), pi: unit(j) })).collect();
            let seq = seq.ok_or_else(|| HomError::Internal("standard vertex missing".into()))?;
            ob.ss.find(&seq).ok_or_else(|| HomError::Internal("standard simplex missing".into()))?
        };
        let subgroup = if c == 0 {
            Vec::new()
        } else {
            gl_generators(r, c).iter().map(|g| index[&g.pad_identity(r, big_n - c)]).collect()
        };
        designations.push(Designation { k, simplex, subgroup, value: module.inclusion(c, big_n) });
    }
    Ok(MachineInstance { built, designations })
}

/// H_q(G_σ; F(σ)) at one cell.
struct Local<F: Field> {
    /// Stabilizer elements, sorted, inside the big group.
    elements: Vec<usize>,
    dim: usize,
    hq: SubQuotient<F::E>,
}

fn local<F: Field>(ctx: &GroupOnSystem<'_, F>, q: usize, l: usize, s: usize, guard_bytes: usize) -> Result<Local<F>, HomError> {
    let f = &ctx.system.field;
    let elements = ctx.stabilizer(l, s);
    let dim = ctx.system.dims[l][s];
    let gens = ctx.group.generators_of(&elements);
    let (grp, _) = ctx.group.subgroup(&elements, &gens)?;
    let mats: Vec<Mat<F::E>> = elements.iter().map(|&x| ctx.phi(x, l, s)).collect();
    let hq = if q == 0 {
        let id = identity(f, dim);
        let vecs: Vec<Vec<F::E>> =
            grp.generators.iter().flat_map(|&g| sub(f, &mats[g], &id).col_vecs()).collect();
        SubQuotient::new(f, &whole_space(f, dim), &span(f, dim, &vecs))?
    } else {
        let cost = bar_cost(dim, grp.order(), 1).unwrap_or(usize::MAX);
        if cost > guard_bytes {
            return Err(HomError::Guard(format!("stabilizer bar complex needs about {cost} bytes")));
        }
        let act = inverse_action(f, &grp, &mats);
        let c1 = bar_dim(dim, grp.order(), 1).unwrap();
        let d1 = bar_boundary(f, &grp, &act, dim, 1);
        let mut dense = zeros(f, dim, c1);
        for (c, col) in d1.iter().enumerate() {
            for (r, v) in col {
                dense.set(*r, c, v.clone());
            }
        }
        let z = kernel_space(f, &dense);
        let b = if grp.order() > 1 { sparse_span(f, c1, bar_boundary(f, &grp, &act, dim, 2)) } else { span(f, 0, &[]) };
        SubQuotient::new(f, &z, &b)?
    };
    Ok(Local { elements, dim, hq })
}

/// Matrix on H_q induced by a module map a : F(σ) → F(τ) and conjugation h ↦ g h g⁻¹.
fn transport<F: Field>(
    ctx: &GroupOnSystem<'_, F>,
    q: usize,
    from: &Local<F>,
    to: &Local<F>,
    a: &Mat<F::E>,
    g: usize,
) -> Result<Mat<F::E>, HomError> {
    let f = &ctx.system.field;
    let t = if q == 0 {
        a.clone()
    } else {
        let (m, n) = (from.elements.len(), to.elements.len());
        let mut t = zeros(f, to.dim * (n.max(1) - 1), from.dim * (m.max(1) - 1));
        let gi = ctx.group.inv[g];
        for (hi, &h) in from.elements.iter().enumerate().skip(1) {
            let c = ctx.group.mul[ctx.group.mul[g][h]][gi];
            let ci = to
                .elements
                .binary_search(&c)
                .map_err(|_| HomError::Internal("conjugate leaves the target stabilizer".into()))?;
            for i in 0..from.dim {
                for r in 0..to.dim {
                    let v = a.get(r, i);
                    if !f.is_zero(v) {
                        t.set((ci - 1) * to.dim + r, (hi - 1) * from.dim + i, v.clone());
                    }
                }
            }
        }
        t
    };
    from.hq.induced(f, &t, &to.hq).ok_or_else(|| HomError::Internal("conjugation is not a chain map".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub level: isize,
    pub orbit: usize,
    /// Least and greatest member of the orbit.
    pub lifts: (usize, usize),
    pub dims: (usize, usize),
    /// Transport between the two lifts is an isomorphism.
    pub iso: bool,
    /// Conjugation by stabilizer elements acts as the identity.
    pub inner_trivial: bool,
}

pub struct StabilizerSystem<F: Field> {
    pub system: CoefficientSystem<F>,
    /// Least member of each orbit, per cell level.
    pub reps: Vec<Vec<usize>>,
    /// Chain-level representatives of the basis classes at each orbit, as columns.
    pub classes: Vec<Vec<Mat<F::E>>>,
    pub lifts: Vec<LiftCheck>,
    pub consistent: bool,
}

/// The system σ ↦ H_q(G_σ̃; F(σ̃)) on X/G, q ≤ 1, with lift-independence checks.
pub fn stabilizer_system<F: Field>(ctx: &GroupOnSystem<'_, F>, q: usize, guard_bytes: usize) -> Result<StabilizerSystem<F>, HomError> {
    if q > 1 {
        return Err(HomError::Invalid("stabilizer systems are built for q ≤ 1".into()));
    }
    let sys = ctx.system;
    let f = &sys.field;
    let (quot, _) = quotient_by_group(&sys.base, &ctx.equivariance.action)?;
    let orbits = ctx.orbits();
    let levels = sys.cell_levels();
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(levels);
    let mut members: Vec<Vec<Vec<usize>>> = Vec::with_capacity(levels);
    for l in 0..levels {
        let count = if l == 0 { usize::from(sys.augmented) } else { orbits[l].iter().max().map_or(0, |&m| m + 1) };
        let mut mem = vec![Vec::new(); count];
        for s in 0..sys.dims[l].len() {
            mem[orbits[l][s]].push(s);
        }
        reps.push(mem.iter().map(|m| m[0]).collect());
        members.push(mem);
    }
    let mut locals: Vec<Vec<Local<F>>> = Vec::with_capacity(levels);
    for l in 0..levels {
        let lv: Result<Vec<_>, _> = reps[l].iter().map(|&s| local(ctx, q, l, s, guard_bytes)).collect();
        locals.push(lv?);
    }
    let mut dims = Vec::with_capacity(levels);
    let mut faces = Vec::with_capacity(levels);
    for l in 0..levels {
        dims.push(locals[l].iter().map(|x| x.hq.dim).collect::<Vec<_>>());
        let mut fl = Vec::with_capacity(reps[l].len());
        for (o, &s) in reps[l].iter().enumerate() {
            let nfaces = if l == 0 { 0 } else if l == 1 { usize::from(sys.augmented) } else { l };
            let mut fs = Vec::with_capacity(nfaces);
            for i in 0..nfaces {
                let t = sys.face_target(l, s, i);
                let tau = reps[l - 1][orbits[l - 1][t]];
                let g = (0..ctx.order()).find(|&x| ctx.act(x, l - 1, t) == tau).expect("same orbit");
                let a = mul(f, &ctx.phi(g, l - 1, t), &sys.faces[l][s][i]);
                fs.push(transport(ctx, q, &locals[l][o], &locals[l - 1][orbits[l - 1][tau]], &a, g)?);
            }
            fl.push(fs);
        }
        faces.push(fl);
    }
    let mut lifts = Vec::new();
    for l in 0..levels {
        for (o, mem) in members[l].iter().enumerate() {
            let here = &locals[l][o];
            let inner_trivial = {
                let gens = ctx.group.generators_of(&here.elements);
                let mut ok = true;
                for h in gens {
                    let m = transport(ctx, q, here, here, &ctx.phi(h, l, mem[0]), h)?;
                    ok &= m == identity(f, here.hq.dim);
                }
                ok
            };
            if mem.len() < 2 {
                if !inner_trivial {
                    lifts.push(LiftCheck {
                        level: l as isize - 1,
                        orbit: o,
                        lifts: (mem[0], mem[0]),
                        dims: (here.hq.dim, here.hq.dim),
                        iso: true,
                        inner_trivial,
                    });
                }
                continue;
            }
            let other = *mem.last().unwrap();
            let there = local(ctx, q, l, other, guard_bytes)?;
            let g = (0..ctx.order()).find(|&x| ctx.act(x, l, mem[0]) == other).expect("same orbit");
            let m = transport(ctx, q, here, &there, &ctx.phi(g, l, mem[0]), g)?;
            let iso = here.hq.dim == there.hq.dim && rank(f, &m) == here.hq.dim;
            lifts.push(LiftCheck {
                level: l as isize - 1,
                orbit: o,
                lifts: (mem[0], other),
                dims: (here.hq.dim, there.hq.dim),
                iso,
                inner_trivial,
            });
        }
    }
    let consistent = lifts.iter().all(|c| c.iso && c.inner_trivial);
    let classes = locals.iter().map(|lv| lv.iter().map(|x| x.hq.reps.clone()).collect()).collect();
    let system = CoefficientSystem::new(f.clone(), Arc::new(quot), sys.augmented, dims, faces)?;
    Ok(StabilizerSystem { system, reps, classes, lifts, consistent })
}
