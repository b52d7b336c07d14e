//! Unipotent operators: detection, the unipotence onset of a VIC-module, and stability of
//! fixed spaces under powers.

use num_rational::BigRational;
use serde::Serialize;

use super::vic::TruncatedVICModule;
use super::FunError;
use crate::exactlin::dense::{identity, is_zero_mat, kernel, pow, sub};
use crate::exactlin::{Field, Mat, Q};
use crate::finring::group::el_generators;

/// (a − 1)^dim = 0.
pub fn is_unipotent<F: Field>(f: &F, a: &Mat<F::E>) -> bool {
    let n = a.rows;
    n == a.cols && is_zero_mat(f, &pow(f, &sub(f, a, &identity(f, n)), n as u64))
}

/// Least u ≤ N such that every elementary generator acts unipotently on M(R^n) for u ≤ n ≤ N.
pub fn unipotent_scan<F: Field>(module: &TruncatedVICModule<F>) -> Option<usize> {
    let r = module.ring.as_ref();
    let levels: Vec<Vec<Mat<F::E>>> =
        (0..=module.truncation).map(|n| el_generators(r, n).iter().map(|g| module.rho(g)).collect()).collect();
    unipotent_onset(&module.field, &levels)
}

/// Least u such that all matrices on levels u.. are unipotent; `None` if the last level fails.
pub fn unipotent_onset<F: Field>(f: &F, levels: &[Vec<Mat<F::E>>]) -> Option<usize> {
    let ok: Vec<bool> = levels.iter().map(|l| l.iter().all(|a| is_unipotent(f, a))).collect();
    if !*ok.last()? {
        return None;
    }
    let mut u = ok.len() - 1;
    while u > 0 && ok[u - 1] {
        u -= 1;
    }
    Some(u)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCheckReport {
    /// dims[k-1] = dim ker(f^k − 1).
    pub dims: Vec<usize>,
    pub holds: bool,
}

/// For unipotent f over Q, checks that ker(f − 1) = ker(f^k − 1) for 1 ≤ k ≤ n_max.
pub fn invariants_power_check(f: &Mat<BigRational>, n_max: usize) -> Result<PowerCheckReport, FunError> {
    if !is_unipotent(&Q, f) {
        return Err(FunError::NotUnipotent);
    }
    let id = identity(&Q, f.rows);
    let base = kernel(&Q, &sub(&Q, f, &id));
    let mut dims = Vec::new();
    let mut holds = true;
    let mut fk = id.clone();
    for _ in 1..=n_max {
        fk = crate::exactlin::dense::mul(&Q, &fk, f);
        let m = sub(&Q, &fk, &id);
        let k = kernel(&Q, &m);
        // ker(f − 1) ⊆ ker(f^k − 1) always; equality is a dimension count.
        holds &= k.len() == base.len();
        dims.push(k.len());
    }
    Ok(PowerCheckReport { dims, holds })
}
