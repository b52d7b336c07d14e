use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use stabkit::exactlin::dense::{identity, inverse, kernel, mul, mul_vec, rank, solve};
use stabkit::exactlin::field::{format_rational, parse_rational};
use stabkit::exactlin::smith::{int_det, int_mul, smith_dense};
use stabkit::exactlin::sparse::sparse_rank;
use stabkit::exactlin::*;

fn int_mat(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as quotients of successive gcds of k × k minors.
fn determinantal_oracle(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
                g = g.gcd(&int_det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-6i64..=6, n), m))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_a_valid_factorization(rows in int_matrix()) {
        let a = int_mat(&rows);
        let s = smith_dense(&a);
        prop_assert_eq!(int_mul(&int_mul(&s.u, &a), &s.v), s.d.clone());
        prop_assert!(int_det(&s.u).abs().is_one());
        prop_assert!(int_det(&s.v).abs().is_one());
        for (i, r) in s.d.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| x.is_positive()));
        prop_assert!(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert_eq!(&diag, &determinantal_oracle(&a));
        let sparse = SparseMatrix::from_dense_i64(&rows);
        prop_assert_eq!(invariant_factors(&sparse).unwrap(), diag);
    }
}

/// Rank over F_p from the size of the column space, by enumerating all combinations.
fn brute_rank(p: u64, rows: &[Vec<u64>]) -> usize {
    let m = rows.len();
    let n = rows[0].len();
    let mut seen = std::collections::BTreeSet::new();
    let total = p.pow(n as u32);
    for mut code in 0..total {
        let mut coeffs = Vec::new();
        for _ in 0..n {
            coeffs.push(code % p);
            code /= p;
        }
        let v: Vec<u64> = (0..m).map(|i| (0..n).map(|j| rows[i][j] * coeffs[j]).sum::<u64>() % p).collect();
        seen.insert(v);
    }
    let mut r = 0;
    while p.pow(r as u32) < seen.len() as u64 {
        r += 1;
    }
    r
}

fn fp_matrix(p: u64) -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(move |(m, n)| prop::collection::vec(prop::collection::vec(0..p, n), m))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn ranks_over_small_fields((p, rows) in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| (Just(p), fp_matrix(p)))) {
        let f = Fp::new(p).unwrap();
        let n = rows[0].len();
        let m = Mat::from_rows(n, rows.clone());
        let r = rank(&f, &m);
        prop_assert_eq!(r, brute_rank(p, &rows));
        let cols: Vec<Vec<(usize, u64)>> = m.col_vecs().iter()
            .map(|c| c.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, *x)).collect())
            .collect();
        prop_assert_eq!(sparse_rank(&f, m.rows, cols), r);
        let ker = kernel(&f, &m);
        prop_assert_eq!(ker.len(), n - r);
        for v in ker {
            prop_assert!(mul_vec(&f, &m, &v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn rational_inverses(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3)) {
        let m = Mat::from_rows(3, rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect());
        let det = int_det(&int_mat(&rows));
        match inverse(&Q, &m) {
            Some(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(mul(&Q, &m, &inv), identity(&Q, 3));
            }
            None => prop_assert!(det.is_zero()),
        }
    }
}

#[test]
fn solving_and_empty_matrices() {
    let f = Fp::new(5).unwrap();
    let m = Mat::from_rows(2, vec![vec![1, 2], vec![3, 4]]);
    let x = solve(&f, &m, &[1, 0]).unwrap();
    assert_eq!(mul_vec(&f, &m, &x), vec![1, 0]);
    let singular = Mat::from_rows(2, vec![vec![1, 2], vec![2, 4]]);
    assert!(solve(&f, &singular, &[1, 0]).is_none());
    assert_eq!(inverse(&f, &identity(&f, 0)), Some(identity(&f, 0)));
    assert_eq!(rank(&f, &Mat::from_rows(0, vec![vec![], vec![]])), 0);
}

#[test]
fn integer_homology_of_a_chain() {
    // Z --2--> Z: H_0 = Z/2, H_1 = 0.
    let d1 = SparseMatrix::from_dense_i64(&[vec![2]]);
    let d0 = SparseMatrix::zero(0, 1);
    let h0 = homology_dims(&d0, &d1, Coeff::Integers).unwrap();
    assert_eq!(h0, HomologyGroup { free_rank: 0, torsion: vec![BigInt::from(2)] });
    assert_eq!(h0.to_string(), "Z/2");
    let h0_f2 = homology_dims(&d0, &d1, Coeff::Field(FieldId::PrimeField { p: 2 })).unwrap();
    assert_eq!(h0_f2, HomologyGroup::free(1));
    let h0_q = homology_dims(&d0, &d1, Coeff::Field(FieldId::Rationals)).unwrap();
    assert!(h0_q.is_zero());
    let bad = SparseMatrix::from_dense_i64(&[vec![1]]);
    assert_eq!(homology_dims(&bad, &bad, Coeff::Integers), Err(LinError::CompositeNonzero));
}

#[test]
fn kernels_of_sparse_matrices() {
    let m = SparseMatrix::from_dense_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
    let (r, ker) = rank_kernel(&m, FieldId::Rationals).unwrap();
    assert_eq!((r, ker.cols), (2, 1));
    assert!(m.mul(&ker).is_zero());
    let (r2, ker2) = rank_kernel(&m, FieldId::PrimeField { p: 2 }).unwrap();
    assert_eq!((r2, ker2.cols), (2, 1));
}

#[test]
fn scalars() {
    let q = parse_rational("-3/6").unwrap();
    assert_eq!(format_rational(&q), "-1/2");
    assert!(parse_rational("x").is_err());
    assert_eq!(Fp::new(4).unwrap_err(), LinError::NotPrime(4));
    let f = Fp::new(7).unwrap();
    assert_eq!(f.from_rational(&q).unwrap(), 3);
    assert_eq!(Fp::new(2).unwrap().from_rational(&q), Err(LinError::DenominatorVanishes(2)));
    for a in 1..7 {
        assert_eq!(f.mul(&a, &f.inv(&a)), 1);
    }
}
