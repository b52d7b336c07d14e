mod common;

use labcli::range::{range, RangeBound, RangeQuery, Surjection, Theorem};
use proptest::prelude::*;

#[test]
fn golden_table() {
    for (theorem, k, d, m, r, iso, surj) in common::GOLDEN {
        let b = range(&RangeQuery { theorem, k, d, m, r }).unwrap();
        assert_eq!(b, RangeBound { iso, surj }, "{theorem} k={k} d={d} m={m} r={r:?}");
    }
    for t in Theorem::ALL {
        assert!(common::GOLDEN.iter().filter(|g| g.0 == t).count() >= 6, "{t}");
    }
}

#[test]
fn key_case_m_zero() {
    for k in 0..4 {
        for d in 0..4 {
            let a = range(&RangeQuery { theorem: Theorem::A, k, d, m: 0, r: None }).unwrap();
            assert_eq!(a, RangeBound { iso: 2 * k + d + 2, surj: Surjection::At(2 * k + d + 1) });
            for r in 2..5 {
                let c = range(&RangeQuery { theorem: Theorem::C, k, d, m: 0, r: Some(r) }).unwrap();
                assert_eq!(c, RangeBound { iso: 2 * k + 2 * d + r, surj: Surjection::At(2 * k + 2 * d + r - 1) });
            }
        }
    }
}

fn lower(s: Surjection) -> Option<i64> {
    match s {
        Surjection::At(n) | Surjection::From(n) => Some(n),
        Surjection::None => None,
    }
}

fn query() -> impl Strategy<Value = RangeQuery> {
    (prop::sample::select(Theorem::ALL.to_vec()), 0i64..6, -1i64..5, 0i64..10, 2i64..6).prop_map(|(theorem, k, d, m, r)| {
        let d = if theorem.uses_m() { d } else { d.max(0) };
        let m = if theorem.uses_m() { m } else { 0 };
        RangeQuery { theorem, k, d, m, r: Some(r) }
    })
}

proptest! {
    #[test]
    fn monotone_in_every_parameter(q in query(), which in 0usize..4) {
        let mut up = q;
        match which {
            0 => up.k += 1,
            1 => up.d += 1,
            2 if q.theorem.uses_m() => up.m += 1,
            2 => return Ok(()),
            _ => up.r = Some(q.r.unwrap() + 1),
        }
        let (a, b) = (range(&q).unwrap(), range(&up).unwrap());
        prop_assert!(a.iso <= b.iso);
        if let (Some(x), Some(y)) = (lower(a.surj), lower(b.surj)) {
            prop_assert!(x <= y);
        }
        prop_assert!(lower(a.surj).map_or(true, |s| s < a.iso || matches!(a.surj, Surjection::From(_))));
    }
}
