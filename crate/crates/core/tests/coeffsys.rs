use std::sync::Arc;

use proptest::prelude::*;
use stabkit::coeffsys::build::fi_system_on;
use stabkit::coeffsys::*;
use stabkit::exactlin::dense::{rank, zeros};
use stabkit::exactlin::{Coeff, Field, FieldId, Fp, Mat, Q};
use stabkit::finring::{make_ring, RingSpec};
use stabkit::funmod::{fi_build, fi_poly_check, fi_shift_derive, scalar_rep, vic_build, FiKind, TruncatedFIModule};
use stabkit::scomplex::{large_ordering, obases, osim, reduced_homology, SemisimplicialSet, SimplicialComplex};

const G: usize = 1 << 20;

fn f2() -> Fp {
    Fp::new(2).unwrap()
}

fn tensor(d: usize) -> FiKind {
    FiKind::TensorPower(Box::new(FiKind::FreeKS), d)
}

fn module<F: Field>(kind: &FiKind, f: &F, n: usize) -> TruncatedFIModule<F> {
    fi_build(kind, f, n).unwrap()
}

/// Chains of F_{(k^S)^⊗d, n} built directly: basis (σ, j_1..j_d) with all j_i ∉ σ.
fn direct_fi_homology<F: Field>(f: &F, n: usize, d: u32, hi: isize) -> Vec<usize> {
    let x = osim(n, None);
    let basis = |k: isize| -> Vec<(Vec<usize>, Vec<usize>)> {
        let seqs: Vec<Vec<usize>> = if k == -1 { vec![vec![]] } else { x.sequences(k as usize).map_or(vec![], |s| s.to_vec()) };
        let mut out = Vec::new();
        for s in seqs {
            let free: Vec<usize> = (0..=n).filter(|v| !s.contains(v)).collect();
            let total = free.len().pow(d);
            for mut c in 0..total {
                let mut js = Vec::new();
                for _ in 0..d {
                    js.push(free[c % free.len()]);
                    c /= free.len();
                }
                out.push((s.clone(), js));
            }
        }
        out
    };
    let boundary = |k: isize| -> Mat<F::E> {
        let src = basis(k);
        let dst = basis(k - 1);
        let mut m = zeros(f, dst.len(), src.len());
        if k < 0 {
            return m;
        }
        for (c, (s, js)) in src.iter().enumerate() {
            for i in 0..s.len() {
                let mut t = s.clone();
                t.remove(i);
                let r = dst.iter().position(|(u, ks)| *u == t && ks == js).unwrap();
                let v = if i % 2 == 0 { f.one() } else { f.neg(&f.one()) };
                m.set(r, c, f.add(m.get(r, c), &v));
            }
        }
        m
    };
    (-1..=hi).map(|k| basis(k).len() - rank(f, &boundary(k)) - rank(f, &boundary(k + 1))).collect()
}

#[test]
fn fi_system_values() {
    let f = f2();
    let m = module(&FiKind::FreeKS, &f, 5);
    let b = fi_system(&m, 3).unwrap();
    let s = &b.system;
    assert_eq!(s.empty_dim(), 4);
    assert!(s.dims[2].iter().all(|&d| d == 2));
    assert!(s.dims[1].iter().all(|&d| d == 3));
    assert!(matches!(fi_system(&m, 5), Err(CoeffError::Truncation { .. })));
}

#[test]
fn fi_systems_validate() {
    for kind in [FiKind::FreeKS, tensor(2)] {
        for n in 1..=5 {
            let m = module(&kind, &f2(), n + 1);
            let b = fi_system(&m, n).unwrap();
            let rep = validate_system(&b.system, Some(&b.equivariance));
            assert!(rep.holds, "{kind:?} n={n}: {:?}", rep.failures);
            assert_eq!(rep.group_law_checked, n <= 4);
        }
    }
    let m = module(&tensor(2), &Fp::new(3).unwrap(), 4);
    let b = fi_system(&m, 3).unwrap();
    assert!(validate_system(&b.system, Some(&b.equivariance)).holds);
}

#[test]
fn corrupted_systems_are_reported() {
    let f = f2();
    let m = module(&FiKind::FreeKS, &f, 4);
    let b = fi_system(&m, 3).unwrap();
    let mut bad = b.system.clone();
    // Swap the two rows of d_2 on the first 2-simplex.
    let mat = &mut bad.faces[3][0][2];
    let (top, bottom) = (*mat.get(0, 0), *mat.get(1, 0));
    mat.set(0, 0, bottom);
    mat.set(1, 0, top);
    let rep = validate_system(&bad, None);
    assert!(!rep.holds);
    assert!(rep.failures.iter().all(|x| matches!(x, ValidationFailure::Square { level: 2, simplex: 0, .. })));
    assert!(rep.failures.contains(&ValidationFailure::Square { level: 2, simplex: 0, i: 1, j: 2 }));
    let mut eq = b.equivariance.clone();
    eq.phi[0][1][0] = zeros(&f, 3, 3);
    let rep = validate_system(&b.system, Some(&eq));
    assert!(rep.failures.iter().any(|x| matches!(x, ValidationFailure::Naturality { generator: 0, level: 0, simplex: 0, .. })));
    // A cocycle that is natural but not a group action: s_1 acts on F(∅) by −1 over F_3.
    let f3 = Fp::new(3).unwrap();
    let c = CoefficientSystem::constant(f3, Arc::new(osim(2, None)), 1);
    let b3 = fi_system(&module(&FiKind::Constant(1), &f3, 3), 2).unwrap();
    let mut eq3 = b3.equivariance.clone();
    for per in &mut eq3.phi[0] {
        for m in per.iter_mut() {
            *m = Mat::filled(1, 1, 2u64);
        }
    }
    let rep = validate_system(&c, Some(&b3.equivariance));
    assert!(rep.holds);
    let rep = validate_system(&c, Some(&eq3));
    assert!(rep.failures.iter().any(|x| matches!(x, ValidationFailure::GroupLaw { .. })), "{:?}", rep.failures);
}

#[test]
fn corrupted_boundary_is_not_a_complex() {
    let f = f2();
    let mut s = CoefficientSystem::constant(f, Arc::new(osim(1, None)), 1);
    s.faces[2][0][0] = Mat::filled(1, 1, 0u64);
    assert!(matches!(homology_with_coefficients(&s, -1, 1), Err(CoeffError::NotComplex { degree: 0 })));
}

#[test]
fn constant_coefficients() {
    let f = f2();
    let s = CoefficientSystem::constant(f, Arc::new(osim(1, None)), 1);
    let h = homology_with_coefficients(&s, -1, 1).unwrap();
    assert_eq!(h.dims, vec![0, 0, 1]);
    // Constant F_2^3 multiplies every Betti number by 3.
    let s = CoefficientSystem::constant(f, Arc::new(osim(2, None)), 3);
    assert_eq!(homology_with_coefficients(&s, -1, 2).unwrap().dims, vec![0, 0, 0, 6]);
}

fn homology_matches_scomplex<F: Field>(f: &F, x: &SemisimplicialSet) {
    let hi = x.cap.map_or(x.levels(), |c| c) as isize - 1;
    let base = Arc::new(x.clone());
    let h = homology_with_coefficients(&CoefficientSystem::constant(f.clone(), base, 1), -1, hi).unwrap();
    let oracle = reduced_homology(x, Coeff::Field(f.id()), hi).unwrap();
    let want: Vec<usize> = oracle.groups.iter().map(|g| g.free_rank).collect();
    assert_eq!(h.dims, want);
}

fn facets() -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(proptest::collection::btree_set(0usize..6, 1..=4), 1..6)
        .prop_map(|v| v.into_iter().map(|s| s.into_iter().collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn constant_system_homology_is_simplicial_homology(fs in facets()) {
        let x = SimplicialComplex::from_facets(vec![], &fs);
        homology_matches_scomplex(&f2(), &x.to_semisimplicial());
        homology_matches_scomplex(&Q, &x.to_semisimplicial());
        homology_matches_scomplex(&Fp::new(3).unwrap(), &large_ordering(&x, Some(2)).truncate(2));
    }
}

#[test]
fn fi_homology_matches_direct_chains() {
    let f = f2();
    for (kind, d) in [(FiKind::FreeKS, 1u32), (tensor(2), 2)] {
        for n in 1..=4 {
            let m = module(&kind, &f, n + 1);
            let s = fi_system(&m, n).unwrap().system;
            let hi = n as isize;
            let h = homology_with_coefficients(&s, -1, hi).unwrap();
            assert_eq!(h.dims, direct_fi_homology(&f, n, d, hi), "{kind:?} n={n}");
        }
    }
    let m = module(&FiKind::FreeKS, &f, 4);
    let h = homology_with_coefficients(&fi_system(&m, 3).unwrap().system, -1, 1).unwrap();
    assert!(h.vanishes());
}

#[test]
fn polynomiality_of_fi_systems() {
    let f = f2();
    let z = CoefficientSystem::zero(f, Arc::new(osim(3, None)));
    for e in -1..5 {
        assert!(is_polynomial_system(&z, -1, e).unwrap().holds);
    }
    for n in 1..=4 {
        let m = module(&FiKind::FreeKS, &f, n + 1);
        let s = fi_system(&m, n).unwrap().system;
        let v = is_polynomial_system(&s, 1, n as isize).unwrap();
        assert!(v.holds, "{v:?}");
        assert!(!is_polynomial_system(&s, 0, 0).unwrap().holds);
        let t = module(&tensor(2), &f, n + 1);
        let s = fi_system(&t, n).unwrap().system;
        assert!(is_polynomial_system(&s, 2, n as isize).unwrap().holds);
        assert!(!is_polynomial_system(&s, 1, n as isize).unwrap().holds);
    }
}

#[test]
fn certified_fi_modules_give_polynomial_systems() {
    let f = f2();
    let free = module(&FiKind::FreeKS, &f, 7);
    let sd = fi_shift_derive(&free).unwrap();
    let zoo = [free.clone(), module(&tensor(2), &f, 6), sd.shift, sd.derived];
    for m in &zoo {
        for d in -1..=2isize {
            for start in 0..=2isize {
                if !fi_poly_check(m, d, start).unwrap().holds {
                    continue;
                }
                for n in (start.max(0) as usize)..=5.min(m.truncation - 1) {
                    let s = fi_system(m, n).unwrap().system;
                    let v = is_polynomial_system(&s, d, n as isize - start).unwrap();
                    assert!(v.holds, "d={d} m={start} n={n}: {v:?}");
                }
            }
        }
    }
}

#[test]
fn vic_systems() {
    let f = f2();
    for n in 1..=2 {
        let ring = Arc::new(make_ring(&RingSpec::PrimeField(2)).unwrap());
        let ob = obases(&ring, n, 2, G).unwrap();
        let m = vic_build(&scalar_rep(&ring, &f).unwrap(), &ring, &f, n + 2).unwrap();
        let b = vic_system(&m, &ob, 200, G).unwrap();
        let s = &b.system;
        assert_eq!(s.empty_dim(), n + 2);
        assert!(s.dims[1].iter().all(|&d| d == n + 1));
        let rep = validate_system(s, Some(&b.equivariance));
        assert!(rep.holds, "{:?}", rep.failures);
        assert_eq!(rep.group_law_checked, n == 1);
        assert!(is_polynomial_system(s, 1, n as isize + 1).unwrap().holds);
        assert!(!is_polynomial_system(s, 0, 0).unwrap().holds);
    }
}

#[test]
fn vanishing_instances() {
    let f = f2();
    let t = module(&tensor(2), &f, 6);
    let s = fi_system_on(&t, 5, Arc::new(osim(5, None)), 0).unwrap().system;
    let rep = vanishing_check(&s, 1, 2, None, 2).unwrap();
    assert!(rep.holds);
    assert_eq!(rep.homology, vec![0, 0, 0]);
    let z = CoefficientSystem::zero(f, Arc::new(osim(3, None)));
    assert!(vanishing_check(&z, 3, -1, None, 1).unwrap().holds);
    // Preconditions are enforced: k^S is not of degree 0.
    let free = fi_system(&module(&FiKind::FreeKS, &f, 4), 3).unwrap().system;
    assert!(matches!(vanishing_check(&free, 1, 0, None, 1), Err(CoeffError::Precondition(_))));
    let ring = Arc::new(make_ring(&RingSpec::PrimeField(2)).unwrap());
    let ob = obases(&ring, 2, 2, G).unwrap();
    let m = vic_build(&scalar_rep(&ring, &f).unwrap(), &ring, &f, 4).unwrap();
    let g = vic_system(&m, &ob, 0, G).unwrap().system;
    // N = min(⌊(n − 2d − 1)/2⌋, n + r − m − 1) = −1 for n = 2, d = 1.
    let rep = vanishing_check(&g, -1, 1, Some(&ob.bases.complex), 1).unwrap();
    assert!(rep.holds);
}

#[test]
fn long_exact_sequences() {
    let f = f2();
    let m = module(&FiKind::FreeKS, &f, 5);
    let seq = fi_sequence_system(&m, 3).unwrap();
    let rep = les_check(&seq, -1, 2).unwrap();
    assert!(rep.holds, "{:?}", rep.positions);
    let a = fi_system(&m, 3).unwrap().system;
    let zero = CoefficientSystem::zero(f, a.base.clone());
    let id = SystemShortExactSequence::new(
        a.clone(),
        a.clone(),
        zero.clone(),
        a.dims.iter().map(|l| l.iter().map(|&d| stabkit::exactlin::dense::identity(&f, d)).collect()).collect(),
        a.dims.iter().map(|l| l.iter().map(|&d| zeros(&f, 0, d)).collect()).collect(),
    )
    .unwrap();
    assert!(les_check(&id, -1, 2).unwrap().holds);
    let c = CoefficientSystem::constant(f, a.base.clone(), 2);
    let split = SystemShortExactSequence::split(a.clone(), c).unwrap();
    let rep = les_check(&split, -1, 2).unwrap();
    assert!(rep.holds);
    assert!(rep.connecting_ranks.iter().all(|&(_, r)| r == 0));
    // A non-natural middle map is rejected.
    let mut bad = split.clone();
    bad.inj[2][0] = zeros(&f, bad.b.dims[2][0], bad.a.dims[2][0]);
    assert!(matches!(bad.verify(), Err(CoeffError::NotExact(_))));
}

#[test]
fn connecting_map_can_be_nonzero() {
    // On the circle OSim_1: A lives on ∅ only, B is constant, C = B/A is the unaugmented constant system.
    // δ : H_0(C) → H_{−1}(A) is then an isomorphism.
    let f = f2();
    let base = Arc::new(osim(1, None));
    let one = |r, c| -> Mat<u64> { if r == c && r == 1 { Mat::filled(1, 1, 1u64) } else { zeros(&f, r, c) } };
    let system = |e: usize, v: usize| {
        let faces = vec![vec![vec![]], vec![vec![one(e, v)]; 2], vec![vec![one(v, v); 2]; 2]];
        CoefficientSystem::new(f, base.clone(), true, vec![vec![e], vec![v; 2], vec![v; 2]], faces).unwrap()
    };
    let (a, b, c) = (system(1, 0), system(1, 1), system(0, 1));
    let inj = vec![vec![one(1, 1)], vec![one(1, 0); 2], vec![one(1, 0); 2]];
    let surj = vec![vec![one(0, 1)], vec![one(1, 1); 2], vec![one(1, 1); 2]];
    let seq = SystemShortExactSequence::new(a, b, c, inj, surj).unwrap();
    let rep = les_check(&seq, -1, 1).unwrap();
    assert!(rep.holds, "{:?}", rep.positions);
    assert_eq!(rep.connecting_ranks.iter().map(|&(_, r)| r).sum::<usize>(), 1);
    assert!(rep.connecting_ranks.contains(&(0, 1)), "{:?}", rep.connecting_ranks);
}

#[test]
fn exchange_round_trip() {
    let f = Fp::new(3).unwrap();
    let b = fi_system(&module(&tensor(2), &f, 3), 2).unwrap();
    let mut file = b.system.to_file();
    file.phi = Some(b.equivariance.to_file(&f));
    let json = serde_json::to_string(&file).unwrap();
    let back: SystemFile = serde_json::from_str(&json).unwrap();
    let s = CoefficientSystem::from_file(f, &back).unwrap();
    assert_eq!(s.dims, b.system.dims);
    assert_eq!(s.faces, b.system.faces);
    let e = EquivariantStructure::from_file(&f, &s, back.phi.as_ref().unwrap()).unwrap();
    assert_eq!(e.phi, b.equivariance.phi);
    assert!(validate_system(&s, Some(&e)).holds);
    assert!(CoefficientSystem::from_file(f2(), &back).is_err());
    assert_eq!(back.field, FieldId::PrimeField { p: 3 });
}
