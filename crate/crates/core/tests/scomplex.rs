use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use stabkit::exactlin::{Coeff, FieldId, HomologyGroup};
use stabkit::finring::group::{el_generators, gl_generators, DEFAULT_GROUP_GUARD};
use stabkit::finring::{generate_group, make_ring, quotient_by, FiniteRing, GroupKind, RingSpec, TwoSidedIdeal};
use stabkit::scomplex::ss::is_isomorphism;
use stabkit::scomplex::*;

const G: usize = 1 << 22;

fn ring(spec: RingSpec) -> Arc<FiniteRing> {
    Arc::new(make_ring(&spec).unwrap())
}

fn derangements(n: u64) -> i64 {
    // D_0 = 1, D_1 = 0, D_n = (n-1)(D_{n-1} + D_{n-2}).
    let (mut a, mut b) = (1i64, 0i64);
    if n == 0 {
        return 1;
    }
    for k in 2..=n as i64 {
        let c = (k - 1) * (a + b);
        a = b;
        b = c;
    }
    b
}

#[test]
fn standard_complexes() {
    let s2 = SimplicialComplex::build_standard(StandardKind::Simplex(2));
    assert_eq!(s2.counts(), vec![3, 3, 1]);
    let b3 = SimplicialComplex::build_standard(StandardKind::Boundary(3));
    assert_eq!(b3.counts(), vec![4, 6, 4]);
    assert_eq!(SimplicialComplex::build_standard(StandardKind::Simplex(0)).counts(), vec![1]);
    // Binomial counts for Sim_5.
    let s5 = SimplicialComplex::build_standard(StandardKind::Simplex(5));
    assert_eq!(s5.counts(), vec![6, 15, 20, 15, 6, 1]);
}

#[test]
fn face_closure_is_enforced() {
    let bad = SimplicialComplex::from_simplices(vec![0, 1, 2], vec![vec![vec![0], vec![1], vec![2]], vec![vec![0, 1], vec![0, 2]], vec![vec![0, 1, 2]]], None);
    assert!(matches!(bad, Err(ScError::NotClosed(_))));
}

#[test]
fn links() {
    let tri = SimplicialComplex::build_standard(StandardKind::Boundary(2));
    let l = tri.link(&[0]).unwrap();
    assert_eq!(l.counts(), vec![2]);
    let s3 = SimplicialComplex::build_standard(StandardKind::Simplex(3));
    let l = s3.link(&[0, 1]).unwrap();
    assert_eq!(l.simplices, vec![vec![vec![2], vec![3]], vec![vec![2, 3]]]);
    assert!(matches!(tri.link(&[0, 1, 2]), Err(ScError::Absent(_))));
}

#[test]
fn links_of_spheres_are_cm() {
    for n in 2..=4 {
        let b = SimplicialComplex::build_standard(StandardKind::Boundary(n + 1));
        let nn = n as isize;
        assert!(is_weakly_cm(&b, nn, Coeff::Integers, 1).unwrap().holds);
        for (k, level) in b.simplices.iter().enumerate() {
            for s in level {
                let l = b.link(s).unwrap();
                assert!(is_weakly_cm(&l, nn - k as isize - 1, Coeff::Integers, 1).unwrap().holds);
            }
        }
    }
}

#[test]
fn large_orderings() {
    let o1 = osim(1, None);
    assert_eq!(o1.counts(), vec![2, 2]);
    let h = reduced_homology(&o1, Coeff::Integers, 1).unwrap();
    assert!(h.degree(0).is_zero());
    assert_eq!(*h.degree(1), HomologyGroup::free(1));
    assert_eq!(osim(2, None).counts(), vec![3, 6, 6]);
    let o3 = osim(3, None);
    let h = reduced_homology(&o3, Coeff::Integers, 2).unwrap();
    assert!((-1..=2).all(|k| h.degree(k).is_zero()));
    // The top homology of OSim_3 has rank D_4 = 9.
    let h = reduced_homology(&o3, Coeff::Integers, 3).unwrap();
    assert_eq!(*h.degree(3), HomologyGroup::free(9));
}

#[test]
fn injective_words_are_highly_connected() {
    for n in 1..=5 {
        let o = osim(n, None);
        o.check_face_identities().unwrap();
        let h = reduced_homology(&o, Coeff::Integers, n as isize - 1).unwrap();
        assert!((-1..n as isize).all(|k| h.degree(k).is_zero()), "OSim_{n}: {h:?}");
    }
}

#[test]
fn injective_words_euler_characteristic() {
    for n in 0..=6u64 {
        let o = osim(n as usize, None);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(o.reduced_euler_characteristic(), sign * derangements(n + 1), "n = {n}");
    }
}

#[test]
fn vertex_accessor_matches_sequences() {
    let o = osim(3, None);
    for k in 0..o.levels() {
        for s in 0..o.count(k) {
            let seq = o.sequence(k, s).unwrap().to_vec();
            for (i, &v) in seq.iter().enumerate() {
                assert_eq!(o.sequence(0, o.vertex(k, s, i)).unwrap(), &[v]);
            }
        }
    }
}

#[test]
fn forward_links() {
    let o3 = osim(3, None);
    let f = o3.forward_link(&[3]).unwrap();
    let o2 = osim(2, None);
    assert_eq!(f.counts(), o2.counts());
    for k in 0..o2.levels() {
        assert_eq!(f.sequences(k), o2.sequences(k));
    }
    let f = o2.forward_link(&[0, 1]).unwrap();
    assert_eq!(f.sequences(0).unwrap(), &[vec![2]]);
    assert_eq!(f.levels(), 1);
    let plain = SimplicialComplex::build_standard(StandardKind::Simplex(2)).to_semisimplicial();
    let noseq = SemisimplicialSet::from_faces((0..plain.levels()).map(|k| (0..plain.count(k)).map(|s| plain.faces_of(k, s).to_vec()).collect()).collect(), None).unwrap();
    assert!(matches!(noseq.forward_link(&[0]), Err(ScError::NotOrdering)));
}

#[test]
fn forward_links_in_forward_cm_orderings() {
    // Forward link of an n-simplex in a forward CM ordering of dimension N is (N−n−2)-connected.
    let b = SimplicialComplex::build_standard(StandardKind::Boundary(4));
    let o = large_ordering(&b, None);
    let big_n = 3isize;
    for k in 0..o.levels() {
        for seq in o.sequences(k).unwrap() {
            let f = o.forward_link(seq).unwrap();
            assert!(connectivity_failure(&f, big_n - k as isize - 2, Coeff::Integers).unwrap().is_none());
        }
    }
}

#[test]
fn cm_checks() {
    let b3 = SimplicialComplex::build_standard(StandardKind::Boundary(3));
    let rep = is_weakly_cm(&b3, 2, Coeff::Integers, 2).unwrap();
    assert!(rep.holds);
    assert!(!is_weakly_cm(&b3, 3, Coeff::Integers, 1).unwrap().holds);
    let o = large_ordering(&b3, None);
    assert!(is_weakly_forward_cm(&o, 2, Coeff::Integers, 2).unwrap().holds);
    let two = SimplicialComplex::from_facets(vec![0, 1], &[vec![0], vec![1]]);
    let rep = is_weakly_cm(&two, 1, Coeff::Integers, 1).unwrap();
    assert!(!rep.holds);
    assert_eq!(rep.failures[0].degree, 0);
    // Vacuous below −1.
    assert!(is_weakly_cm(&SimplicialComplex::from_facets(vec![], &[]), -1, Coeff::Integers, 1).unwrap().holds);
    assert!(!is_weakly_cm(&SimplicialComplex::from_facets(vec![], &[]), 0, Coeff::Integers, 1).unwrap().holds);
}

#[test]
fn torsion_in_the_projective_plane() {
    // Six-vertex RP^2: H_1 = Z/2 over Z, and H_1 = H_2 = F_2 with F_2 coefficients.
    let facets: Vec<Vec<usize>> = vec![
        vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5], vec![0, 5, 1],
        vec![1, 2, 4], vec![2, 3, 5], vec![3, 4, 1], vec![4, 5, 2], vec![5, 1, 3],
    ];
    let x = SimplicialComplex::from_facets((0..6).collect(), &facets);
    let ss = x.to_semisimplicial();
    let hz = reduced_homology(&ss, Coeff::Integers, 2).unwrap();
    assert_eq!(hz.degree(1).to_string(), "Z/2");
    assert!(hz.degree(2).is_zero());
    let h2 = reduced_homology(&ss, Coeff::Field(FieldId::PrimeField { p: 2 }), 2).unwrap();
    assert_eq!(h2.ranks(), vec![0, 1, 1]);
}

/// Subsets of F_2^n (as bitmasks of vectors) closed under addition and containing 0.
fn f2_subspaces(n: usize) -> Vec<BTreeSet<usize>> {
    let size = 1usize << n;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << size) {
        if mask & 1 == 0 {
            continue;
        }
        let set: BTreeSet<usize> = (0..size).filter(|&v| mask >> v & 1 == 1).collect();
        if set.iter().all(|&a| set.iter().all(|&b| set.contains(&(a ^ b)))) {
            out.push(set);
        }
    }
    out
}

#[test]
fn bases_complex_counts_match_subspace_oracle() {
    let f2 = ring(RingSpec::PrimeField(2));
    for n in [2usize, 3] {
        let subs = f2_subspaces(n);
        let size = 1usize << n;
        // (x, C): C of index 2 not containing x.
        let mut oracle = 0;
        for x in 1..size {
            for c in &subs {
                if c.len() * 2 == size && !c.contains(&x) {
                    oracle += 1;
                }
            }
        }
        let b = bases_complex(&f2, n, None, G).unwrap();
        assert_eq!(b.vertices.len(), oracle);
    }
    let b2 = bases_complex(&f2, 2, None, G).unwrap();
    assert_eq!(b2.complex.counts(), vec![6, 3]);
    let b3 = bases_complex(&f2, 3, None, G).unwrap();
    assert_eq!(b3.vertices.len(), 28);
    // Top simplices of Bases(F_2^3) are unordered bases: 168 / 6.
    assert_eq!(b3.complex.count(2), 28);
}

#[test]
fn bases_links_are_smaller_bases() {
    let f2 = ring(RingSpec::PrimeField(2));
    let b3 = bases_complex(&f2, 3, None, G).unwrap();
    for v in 0..b3.vertices.len() {
        let iso = b3.link_isomorphism(&[v], 2, G).unwrap();
        assert!(iso.is_isomorphism);
        assert_eq!(iso.target.complex.counts(), vec![6, 3]);
    }
    for e in &b3.complex.simplices[1] {
        assert!(b3.link_isomorphism(e, 2, G).unwrap().is_isomorphism);
    }
    let z4 = ring(RingSpec::Zmod(4));
    let b = bases_complex(&z4, 3, None, G).unwrap();
    for v in [0, 100, 500] {
        assert!(b.link_isomorphism(&[v], 2, G).unwrap().is_isomorphism);
    }
}

#[test]
fn bases_complexes_are_cm() {
    for (p, n) in [(2usize, 3usize), (2, 4), (3, 3)] {
        let r = ring(RingSpec::PrimeField(p));
        let b = bases_complex(&r, n, None, G).unwrap();
        let dim = ((n as isize) - 1).div_euclid(2);
        assert!(is_weakly_cm(&b.complex, dim, Coeff::Integers, 4).unwrap().holds, "F_{p}^{n}");
    }
}

#[test]
fn el_is_transitive_on_ordered_simplices() {
    for (spec, nmax) in [(RingSpec::PrimeField(2), 4usize), (RingSpec::Zmod(4), 3)] {
        let r = ring(spec);
        for n in 2..=nmax {
            let kmax = n - 2;
            let b = bases_complex(&r, n, Some(kmax), G).unwrap();
            let o = large_ordering(&b.complex, Some(kmax)).truncate(kmax);
            let maps: Vec<Vec<usize>> = el_generators(&r, n).iter().map(|g| b.vertex_map(g)).collect();
            let act = GroupActionOnSS::from_vertex_maps(&o, &maps).unwrap();
            let orbits = act.orbits(&o);
            for (k, orb) in orbits.iter().enumerate() {
                assert!(orb.iter().all(|&x| x == 0), "{} n={n} k={k}", r.label());
            }
        }
    }
}

#[test]
fn obases_structure() {
    let f2 = ring(RingSpec::PrimeField(2));
    let ob = obases(&f2, 1, 2, G).unwrap();
    let full = large_ordering(&bases_complex(&f2, 3, None, G).unwrap().complex, None).truncate(1);
    assert_eq!(ob.ss.counts(), full.counts());
    assert_eq!(ob.ss.counts(), vec![28, 28 * 6]);
    ob.ss.check_face_identities().unwrap();
    let act = ob.action(&gl_generators(&f2, 3)).unwrap();
    act.verify(&ob.ss).unwrap();
    assert!(act.orbits(&ob.ss).iter().all(|o| o.iter().all(|&x| x == 0)));
    assert!(is_weakly_cm(&ob.bases.complex, 1, Coeff::Integers, 2).unwrap().holds);
    for k in 0..ob.ss.levels() {
        for s in (0..ob.ss.count(k)).step_by(7) {
            assert!(ob.complement_is_free(k, s, G).unwrap());
        }
    }
    let z4 = ring(RingSpec::Zmod(4));
    let ob = obases(&z4, 1, 2, G).unwrap();
    for k in 0..ob.ss.levels() {
        for s in (0..ob.ss.count(k)).step_by(97) {
            assert!(ob.complement_is_free(k, s, G).unwrap());
        }
    }
}

#[test]
fn quotients() {
    let o1 = osim(1, None);
    let swap = GroupActionOnSS::from_vertex_maps(&o1, &[vec![1, 0]]).unwrap();
    let (q, _) = quotient_by_group(&o1, &swap).unwrap();
    assert_eq!(q.counts(), vec![1, 1]);

    let o3 = osim(3, None);
    let (q, proj) = quotient_by_group(&o3, &GroupActionOnSS::trivial(&o3)).unwrap();
    assert!(is_isomorphism(&o3, &q, &proj));

    let bad = GroupActionOnSS { perms: vec![vec![vec![1, 0], vec![0, 1]]] };
    assert!(matches!(quotient_by_group(&o1, &bad), Err(ScError::BadAction(_))));
}

#[test]
fn congruence_quotient_of_obases() {
    let z4 = ring(RingSpec::Zmod(4));
    let z2 = ring(RingSpec::Zmod(2));
    let q = TwoSidedIdeal::generated(&z4, &[2]);
    let qr = quotient_by(&z4, &q);
    let big = obases(&z4, 1, 2, G).unwrap();
    let small = obases(&z2, 1, 2, G).unwrap();
    let el = generate_group(&z4, 3, GroupKind::ElRelative, Some(&q), DEFAULT_GROUP_GUARD).unwrap();
    let act = big.action(&el.generators).unwrap();
    let (quot, proj) = quotient_by_group(&big.ss, &act).unwrap();
    let down = big.project(&qr, &small).unwrap();
    // Orbit → projected simplex must be well defined; then it must be an isomorphism.
    let mut maps = Vec::new();
    for k in 0..quot.levels() {
        let mut m = vec![usize::MAX; quot.count(k)];
        for s in 0..big.ss.count(k) {
            let o = proj[k][s];
            assert!(m[o] == usize::MAX || m[o] == down[k][s]);
            m[o] = down[k][s];
        }
        maps.push(m);
    }
    assert!(is_isomorphism(&quot, &small.ss, &maps));
}

#[test]
fn exchange_format_round_trip() {
    let o = osim(2, None);
    let json = serde_json::to_string(&o.to_file()).unwrap();
    let back = SemisimplicialSet::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back, o);
    let bad = r#"{"levels": [[{"faces": []}, {"faces": []}], [{"faces": [0, 5]}]]}"#;
    assert!(SemisimplicialSet::from_file(&serde_json::from_str(bad).unwrap()).is_err());
}

#[test]
fn truncated_sets_refuse_high_degrees() {
    let o = osim(3, Some(1));
    assert!(matches!(reduced_homology(&o, Coeff::Integers, 1), Err(ScError::BeyondCap { .. })));
    assert!(reduced_homology(&o, Coeff::Integers, 0).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_complexes_are_closed_and_orderings_semisimplicial(
        facets in prop::collection::vec(prop::collection::btree_set(0usize..6, 1..4), 1..6)
    ) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|s| s.into_iter().collect()).collect();
        let x = SimplicialComplex::from_facets(vec![], &facets);
        prop_assert!(x.check_face_closure().is_ok());
        let o = large_ordering(&x, None);
        prop_assert!(o.check_face_identities().is_ok());
        // Level k has (k+1)! times as many simplices.
        let mut fact = 1;
        for k in 0..x.simplices.len() {
            fact *= k + 1;
            prop_assert_eq!(o.count(k), x.count(k) * fact);
        }
        prop_assert_eq!(x.reduced_euler_characteristic(), {
            let h = reduced_homology(&x.to_semisimplicial(), Coeff::Field(FieldId::Rationals), x.dim()).unwrap();
            h.groups.iter().enumerate().map(|(i, g)| if i % 2 == 1 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum::<i64>()
        });
    }
}
