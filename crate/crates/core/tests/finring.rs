use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use stabkit::finring::group::{brute_force_invertible, DEFAULT_GROUP_GUARD};
use stabkit::finring::reduce::{basis_vector, complements_of, verify_split};
use stabkit::finring::unimod::{find_shortening, unimodular_vectors};
use stabkit::finring::*;

fn zmod(m: usize) -> Arc<FiniteRing> {
    Arc::new(make_ring(&RingSpec::Zmod(m)).unwrap())
}

fn field(p: usize) -> Arc<FiniteRing> {
    Arc::new(make_ring(&RingSpec::PrimeField(p)).unwrap())
}

/// Vectors reachable from v by single elementary moves, with BFS distances.
fn move_distances(r: &FiniteRing, v: &[Elt]) -> HashMap<Vec<Elt>, usize> {
    let n = v.len();
    let mut dist = HashMap::from([(v.to_vec(), 0)]);
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for a in r.elements() {
                    let mut u = w.clone();
                    u[j] = r.add(u[j], r.mul(a, w[i]));
                    if !dist.contains_key(&u) {
                        dist.insert(u.clone(), d + 1);
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    dist
}

#[test]
fn group_ring_matches_polynomials_mod_t2_minus_1() {
    let r = make_ring(&RingSpec::cyclic_group_ring(2, 2)).unwrap();
    assert_eq!(r.order(), 4);
    // a + b t, index a + 2b; (a + bt)(c + dt) = (ac + bd) + (ad + bc) t.
    for x in 0..4 {
        for y in 0..4 {
            let (a, b, c, d) = (x % 2, x / 2, y % 2, y / 2);
            let prod = (a * c + b * d) % 2 + 2 * ((a * d + b * c) % 2);
            let sum = (a + c) % 2 + 2 * ((b + d) % 2);
            assert_eq!(r.mul(x, y), prod);
            assert_eq!(r.add(x, y), sum);
        }
    }
    // 1 + t is nilpotent, so the ring is local.
    assert_eq!(r.mul(3, 3), 0);
    assert_eq!(r.units(), vec![1, 2]);
}

#[test]
fn bad_tables_are_rejected() {
    let mut f = make_ring(&RingSpec::Zmod(4)).unwrap().to_file();
    f.mul[2][3] = 1;
    assert!(matches!(FiniteRing::from_file(&f, 256), Err(RingError::Axiom(_))));
    assert!(make_ring(&RingSpec::PrimeField(4)).is_err());
    assert!(make_ring(&RingSpec::Zmod(1)).is_err());
    assert!(matches!(make_ring(&RingSpec::Zmod(300)), Err(RingError::Guard { .. })));
}

#[test]
fn ideal_quotients() {
    let z4 = zmod(4);
    let q = ideal_quotient(&z4, &[2]);
    assert_eq!(q.ideal.elements, vec![0, 2]);
    assert!(find_isomorphism(&q.ring, &make_ring(&RingSpec::Zmod(2)).unwrap()).is_some());

    let z6 = zmod(6);
    let q = ideal_quotient(&z6, &[2]);
    assert_eq!(q.ideal.elements, vec![0, 2, 4]);
    assert_eq!(q.ring.order(), 2);

    let q = ideal_quotient(&z6, &[0]);
    assert_eq!(q.ring.order(), 6);
    assert!(find_isomorphism(&q.ring, &z6).is_some());

    // Projection is a surjective homomorphism with kernel the ideal.
    for m in [4, 6, 8, 12] {
        let r = zmod(m);
        for ideal in all_ideals(&r) {
            assert!(ideal.verify());
            let q = quotient_by(&r, &ideal);
            for a in r.elements() {
                assert_eq!(q.projection[a] == q.ring.zero(), ideal.contains(a));
                for b in r.elements() {
                    assert_eq!(q.projection[r.add(a, b)], q.ring.add(q.projection[a], q.projection[b]));
                    assert_eq!(q.projection[r.mul(a, b)], q.ring.mul(q.projection[a], q.projection[b]));
                }
            }
        }
    }
}

use stabkit::finring::ring::find_isomorphism;

#[test]
fn ideals_of_z12_are_the_divisor_ideals() {
    let r = zmod(12);
    let sizes: Vec<usize> = all_ideals(&r).iter().map(|i| i.elements.len()).collect();
    assert_eq!(sizes, vec![1, 2, 3, 4, 6, 12]);
}

#[test]
fn unimodularity() {
    let z6 = zmod(6);
    let w = is_unimodular(&z6, &[2, 3]).unwrap();
    assert_eq!(z6.add(z6.mul(w[0], 2), z6.mul(w[1], 3)), 1);
    // Exhaustive oracle: some pair of coefficients hits 1.
    for v in [[2, 3], [2, 4], [3, 3], [5, 0], [0, 0]] {
        let oracle = (0..6).any(|a| (0..6).any(|b| (a * v[0] + b * v[1]) % 6 == 1));
        assert_eq!(is_unimodular(&z6, &v).is_some(), oracle, "{v:?}");
    }
    let z4 = zmod(4);
    assert!(is_unimodular(&z4, &[2, 2]).is_none());
    assert_eq!(is_unimodular(&z4, &[0, 0, 1]).map(|w| w[2]), Some(1));
}

#[test]
fn stable_rank_certificates() {
    let r = field(2);
    assert!(certify_stable_rank(&r, 2, 4, DEFAULT_VECTOR_GUARD).unwrap().is_certified());
    for m in [4, 6] {
        let r = zmod(m);
        match certify_stable_rank(&r, 2, 3, DEFAULT_VECTOR_GUARD).unwrap() {
            SrVerdict::Certified(c) => {
                let expected = unimodular_vectors(&r, 2, 1 << 20).unwrap().len()
                    + unimodular_vectors(&r, 3, 1 << 20).unwrap().len();
                assert_eq!(c.vectors_checked, expected);
                for w in &c.witnesses {
                    let short = stabkit::finring::unimod::shorten(&r, &w.vector, &w.b);
                    assert!(is_unimodular(&r, &short).is_some());
                }
            }
            SrVerdict::Counterexample { .. } => panic!("Z/{m} should certify"),
        }
    }
    // Z/6 has 36 pairs of which 24 are unimodular: (Z/6)^× ... counted via CRT: (4-1)(9-1) = 24.
    assert_eq!(unimodular_vectors(&zmod(6), 2, 1 << 20).unwrap().len(), 24);
    assert!(certify_stable_rank(&field(2), 1, 3, 1 << 20).is_err());
}

#[test]
fn quotients_recertify() {
    for m in [4, 6, 8, 12] {
        let r = zmod(m);
        assert!(certify_stable_rank(&r, 2, 3, DEFAULT_VECTOR_GUARD).unwrap().is_certified());
        for ideal in all_ideals(&r) {
            if ideal.is_whole() {
                continue;
            }
            let q = quotient_by(&r, &ideal);
            if q.ring.order() == 1 {
                continue;
            }
            assert!(certify_stable_rank(&q.ring, 2, 3, DEFAULT_VECTOR_GUARD).unwrap().is_certified());
        }
    }
}

#[test]
fn relative_shortening_stays_in_the_ideal() {
    for m in [4, 8] {
        let r = zmod(m);
        let q = TwoSidedIdeal::generated(&r, &[2]);
        for n in [2, 3] {
            for v in unimodular_vectors(&r, n, 1 << 20).unwrap() {
                if !q.contains(v[n - 1]) {
                    continue;
                }
                let b = find_shortening(&r, &v, Some(&q)).expect("relative witness");
                assert!(b.iter().all(|&x| q.contains(x)));
                let short = stabkit::finring::unimod::shorten(&r, &v, &b);
                assert!(is_unimodular(&r, &short).is_some());
            }
        }
    }
}

#[test]
fn reduce_unimodular_examples() {
    let z4 = zmod(4);
    let w = reduce_unimodular(&z4, &[1, 2], 2).unwrap();
    assert!(w.len() <= 3);
    assert_eq!(w.replay(&z4, &[1, 2]), vec![0, 1]);
    assert!(move_distances(&z4, &[1, 2]).contains_key(&vec![0, 1]));

    let f2 = field(2);
    let w = reduce_unimodular(&f2, &[1, 1, 0], 2).unwrap();
    assert_eq!(w.replay(&f2, &[1, 1, 0]), vec![0, 0, 1]);
    assert_eq!(w.matrix(&f2).apply(&f2, &[1, 1, 0]), vec![0, 0, 1]);
    // The move graph on nonzero vectors of F_2^3 is connected: 7 vertices.
    assert_eq!(move_distances(&f2, &[1, 1, 0]).len(), 7);

    assert!(reduce_unimodular(&z4, &[0, 0, 1], 2).unwrap().is_empty());
    assert!(reduce_unimodular(&z4, &[2, 2], 2).is_err());
    assert!(reduce_unimodular(&z4, &[1, 2], 3).is_err());
}

#[test]
fn reduce_unimodular_all_small_vectors() {
    for m in [4, 6] {
        let r = zmod(m);
        for n in [2, 3] {
            let target = basis_vector(&r, n, n - 1);
            for v in unimodular_vectors(&r, n, 1 << 20).unwrap() {
                let w = reduce_unimodular(&r, &v, 2).unwrap();
                assert_eq!(w.replay(&r, &v), target);
                assert_eq!(w.matrix(&r).apply(&r, &v), target);
                assert!(w.inverse().matrix(&r).mul(&r, &w.matrix(&r)).is_identity(&r));
            }
        }
    }
}

#[test]
fn reduce_split_examples() {
    let f2 = field(2);
    let g = reduce_split(&f2, &[0, 1], &Complement { pi: vec![0, 1] }, &[0, 1], &Complement { pi: vec![0, 1] }, 2)
        .unwrap();
    assert!(g.word.matrix(&f2).is_identity(&f2));

    let c = Complement { pi: vec![1, 0] };
    let d = Complement { pi: vec![0, 1] };
    let s = reduce_split(&f2, &[1, 0], &c, &[0, 1], &d, 2).unwrap();
    let m = s.word.matrix(&f2);
    assert!(verify_split(&f2, &m, &[1, 0], &c, &[0, 1], &d, 1 << 20).unwrap());
    // The oracle: exactly one element of GL_2(F_2) does this (the swap).
    let gl = brute_force_invertible(&f2, 2, 1 << 20).unwrap();
    let good: Vec<_> =
        gl.iter().filter(|g| verify_split(&f2, g, &[1, 0], &c, &[0, 1], &d, 1 << 20).unwrap()).collect();
    assert_eq!(good, vec![&m]);

    let z4 = zmod(4);
    let x = [1, 2];
    for c in complements_of(&z4, &x, 1 << 20).unwrap() {
        for y in unimodular_vectors(&z4, 2, 1 << 20).unwrap() {
            for d in complements_of(&z4, &y, 1 << 20).unwrap() {
                let s = reduce_split(&z4, &x, &c, &y, &d, 2).unwrap();
                assert!(verify_split(&z4, &s.word.matrix(&z4), &x, &c, &y, &d, 1 << 20).unwrap());
                assert_eq!(s.complement_basis.len(), 1);
            }
        }
    }
    assert!(reduce_split(&z4, &x, &Complement { pi: vec![0, 1] }, &x, &Complement { pi: vec![1, 0] }, 2).is_err());
}

#[test]
fn complements_biject_with_covectors() {
    // Oracle: complements of x = (1, 2) in (Z/4)^2 as cyclic submodules C with C ⊕ xR = R^2.
    let r = zmod(4);
    let x = [1usize, 2];
    let vecs: Vec<Vec<usize>> = (0..16).map(|i| vec![i / 4, i % 4]).collect();
    let mut subs = HashSet::new();
    for g in &vecs {
        let c: std::collections::BTreeSet<Vec<usize>> = (0..4).map(|a| vec![a * g[0] % 4, a * g[1] % 4]).collect();
        let sums: HashSet<Vec<usize>> = c
            .iter()
            .flat_map(|u| (0..4).map(move |a| vec![(u[0] + a * x[0]) % 4, (u[1] + a * x[1]) % 4]))
            .collect();
        if c.len() == 4 && sums.len() == 16 {
            subs.insert(c);
        }
    }
    let covs = complements_of(&r, &x, 1 << 20).unwrap();
    assert_eq!(covs.len(), subs.len());
    assert_eq!(covs.len(), 4);
}

#[test]
fn partial_basis_frames() {
    let f2 = field(2);
    let xs = vec![vec![1, 1, 0], vec![0, 1, 0]];
    let pis = vec![vec![1, 0, 0], vec![1, 1, 1]];
    let f = partial_basis_frame(&f2, &xs, &pis, 2).unwrap();
    assert_eq!(f.matrix.col(2), xs[0]);
    assert_eq!(f.matrix.col(1), xs[1]);
    let c = f.matrix.col(0);
    assert_eq!(stabkit::finring::reduce::covector_eval(&f2, &pis[0], &c), 0);
    assert_eq!(stabkit::finring::reduce::covector_eval(&f2, &pis[1], &c), 0);
    assert_eq!(f.word.matrix(&f2), f.matrix);
    assert!(f.matrix.mul(&f2, &f.inverse).is_identity(&f2));
}

#[test]
fn reduce_relative_examples() {
    let z4 = zmod(4);
    let q = TwoSidedIdeal::generated(&z4, &[2]);
    let el2 = generate_group(&z4, 2, GroupKind::ElRelative, Some(&q), DEFAULT_GROUP_GUARD).unwrap();
    let w = reduce_relative(&z4, &q, &[3, 2], &[1, 0], 2).unwrap();
    assert_eq!(w.replay(&z4, &[3, 2]), vec![1, 0]);
    assert!(el2.contains(&w.matrix(&z4)));
    // BFS oracle inside the group.
    assert!(el2.elements.iter().any(|g| g.apply(&z4, &[3, 2]) == vec![1, 0]));

    let w = reduce_relative(&z4, &q, &[1, 0], &[1, 0], 2).unwrap();
    assert_eq!(w.matrix(&z4).apply(&z4, &[1, 0]), vec![1, 0]);

    let el3 = generate_group(&z4, 3, GroupKind::ElRelative, Some(&q), DEFAULT_GROUP_GUARD).unwrap();
    let w = reduce_relative(&z4, &q, &[1, 2, 0], &[1, 0, 2], 2).unwrap();
    assert_eq!(w.replay(&z4, &[1, 2, 0]), vec![1, 0, 2]);
    assert!(el3.contains(&w.matrix(&z4)));

    assert!(matches!(reduce_relative(&z4, &q, &[1, 1], &[1, 0], 2), Err(RingError::NotCongruent)));
}

#[test]
fn reduce_relative_all_congruent_pairs() {
    for m in [4, 8] {
        let r = zmod(m);
        let q = TwoSidedIdeal::generated(&r, &[2]);
        let el = generate_group(&r, 2, GroupKind::ElRelative, Some(&q), DEFAULT_GROUP_GUARD).unwrap();
        let us = unimodular_vectors(&r, 2, 1 << 20).unwrap();
        for v in &us {
            for v2 in &us {
                if v.iter().zip(v2).all(|(&a, &b)| q.contains(r.sub(a, b))) {
                    let w = reduce_relative(&r, &q, v, v2, 2).unwrap();
                    assert_eq!(&w.replay(&r, v), v2);
                    assert!(el.contains(&w.matrix(&r)));
                }
            }
        }
    }
}

#[test]
fn group_orders() {
    let f2 = field(2);
    let el = generate_group(&f2, 2, GroupKind::EL, None, DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(el.order(), 6);
    assert_eq!(brute_force_invertible(&f2, 2, 1 << 20).unwrap().len(), 6);
    assert!(el.verify_closed());

    let z4 = zmod(4);
    let gl = generate_group(&z4, 2, GroupKind::GL, None, DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(gl.order(), 96);
    let brute = brute_force_invertible(&z4, 2, 1 << 20).unwrap();
    assert_eq!(brute.len(), 96);
    assert!(brute.iter().all(|m| gl.contains(m)));

    let sl = generate_group(&z4, 2, GroupKind::SL, None, DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(sl.order(), 48);
    assert!(sl.verify_closed());

    let q = TwoSidedIdeal::generated(&z4, &[2]);
    let rel = generate_group(&z4, 2, GroupKind::ElRelative, Some(&q), DEFAULT_GROUP_GUARD).unwrap();
    let cong = generate_group(&z4, 2, GroupKind::GlCongruence, Some(&q), DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(cong.order(), 16);
    assert!(rel.is_subgroup_of(&cong));
    assert!(rel.is_normal_in(&generate_group(&z4, 2, GroupKind::EL, None, DEFAULT_GROUP_GUARD).unwrap()));
    let id = RMat::identity(&z4, 2);
    for m in &rel.elements {
        assert!(m.data.iter().zip(&id.data).all(|(&a, &b)| (a as i64 - b as i64).rem_euclid(2) == 0));
    }

    let rg = Arc::new(make_ring(&RingSpec::cyclic_group_ring(2, 2)).unwrap());
    let gl = generate_group(&rg, 2, GroupKind::GL, None, DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(gl.order(), brute_force_invertible(&rg, 2, 1 << 20).unwrap().len());
}

#[test]
fn k1_examples() {
    let f2 = k1_finite(&field(2), 2, DEFAULT_GROUP_GUARD).unwrap();
    assert!(f2.invariants.is_empty());
    assert!(f2.el_normal);
    let f3 = k1_finite(&field(3), 2, DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(f3.invariants, vec![2]);
    let z4 = k1_finite(&zmod(4), 2, DEFAULT_GROUP_GUARD).unwrap();
    assert_eq!(z4.gl_order, 96);
    assert_eq!(z4.invariants, vec![2]);
    for rep in [&f2, &f3, &z4] {
        assert!(rep.quotient_abelian);
        assert!(!rep.level_checks.is_empty());
        assert!(rep.level_checks.iter().all(|c| c.holds), "{rep:?}");
    }
}

#[test]
fn abelian_invariants_of_small_groups() {
    use stabkit::finring::group::abelian_invariants;
    let cyc = |n: usize| (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect::<Vec<Vec<usize>>>();
    assert_eq!(abelian_invariants(&cyc(6), 0), vec![6]);
    assert_eq!(abelian_invariants(&cyc(1), 0), Vec::<usize>::new());
    // Z/2 × Z/4, element (a, b) = 4a + b.
    let t: Vec<Vec<usize>> =
        (0..8).map(|x| (0..8).map(|y| 4 * ((x / 4 + y / 4) % 2) + (x % 4 + y % 4) % 4).collect()).collect();
    assert_eq!(abelian_invariants(&t, 0), vec![2, 4]);
}
