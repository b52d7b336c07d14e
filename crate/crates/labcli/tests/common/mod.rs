#![allow(dead_code)]

use labcli::range::Surjection::{self, At, From};
use labcli::range::Theorem::{self, *};

/// Bounds worked out by hand from the theorem statements, one line per query:
/// (theorem, k, d, m, r, iso from, surjection).
pub const GOLDEN: [(Theorem, i64, i64, i64, Option<i64>, i64, Surjection); 50] = [
    (A, 2, 0, 6, None, 11, At(10)),
    (A, 0, -1, 8, None, 9, At(8)),
    (A, 0, 1, 9, None, 10, At(9)),
    (A, 0, 3, 3, None, 5, At(4)),
    (A, 0, -1, 6, None, 7, At(6)),
    (A, 3, -1, 3, None, 10, At(9)),
    (A, 0, 3, 6, None, 7, At(6)),
    (A, 0, 3, 1, None, 5, At(4)),
    (APrime, 1, 3, 0, None, 10, From(8)),
    (APrime, 4, 3, 6, None, 16, From(14)),
    (APrime, 0, 0, 0, None, 2, From(0)),
    (APrime, 4, 0, 4, None, 10, From(8)),
    (APrime, 3, 0, 8, None, 8, From(8)),
    (APrime, 0, 3, 4, None, 8, From(6)),
    (APrime, 4, 0, 1, None, 10, From(8)),
    (C, 4, 3, 3, Some(4), 18, At(17)),
    (C, 0, 3, 1, Some(2), 8, At(7)),
    (C, 4, 0, 7, Some(5), 16, At(15)),
    (C, 2, 2, 9, Some(5), 14, At(13)),
    (C, 2, 1, 3, Some(3), 9, At(8)),
    (C, 1, -1, 9, Some(4), 12, At(11)),
    (C, 4, 2, 5, Some(5), 17, At(16)),
    (C, 2, 3, 1, Some(2), 12, At(11)),
    (CPrime, 4, 2, 2, Some(4), 17, From(15)),
    (CPrime, 1, 2, 6, Some(2), 9, From(7)),
    (CPrime, 0, 3, 9, Some(4), 11, From(9)),
    (CPrime, 2, 1, 9, Some(5), 12, From(10)),
    (CPrime, 4, 2, 1, Some(2), 15, From(13)),
    (CPrime, 2, 2, 1, Some(2), 11, From(9)),
    (CPrime, 2, 3, 7, Some(4), 15, From(13)),
    (D, 3, 1, 0, Some(5), 18, Surjection::None),
    (D, 2, 0, 9, Some(2), 9, Surjection::None),
    (D, 3, -1, 3, Some(4), 12, Surjection::None),
    (D, 1, 0, 6, Some(5), 12, Surjection::None),
    (D, 3, -1, 2, Some(5), 14, Surjection::None),
    (D, 3, 3, 4, Some(3), 18, Surjection::None),
    (D, 3, 3, 4, Some(5), 22, Surjection::None),
    (ElCongruence, 2, 3, 0, Some(3), 14, Surjection::None),
    (ElCongruence, 1, 0, 0, Some(3), 6, Surjection::None),
    (ElCongruence, 1, 1, 0, Some(3), 8, Surjection::None),
    (ElCongruence, 0, 3, 0, Some(3), 10, Surjection::None),
    (ElCongruence, 2, 2, 0, Some(2), 11, Surjection::None),
    (ElCongruence, 1, 3, 0, Some(4), 13, Surjection::None),
    (ElCongruence, 4, 2, 0, Some(3), 16, Surjection::None),
    (K1Congruence, 4, 0, 0, Some(5), 18, Surjection::None),
    (K1Congruence, 4, 3, 0, Some(5), 24, Surjection::None),
    (K1Congruence, 3, 3, 0, Some(2), 16, Surjection::None),
    (K1Congruence, 1, 0, 0, Some(3), 8, Surjection::None),
    (K1Congruence, 3, 1, 0, Some(2), 12, Surjection::None),
    (K1Congruence, 2, 0, 0, Some(2), 8, Surjection::None),
];
