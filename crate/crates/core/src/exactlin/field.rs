//! Scalar fields used throughout the workbench.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinError;

/// Runtime name of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldId {
    Rationals,
    PrimeField { p: u64 },
}

impl FieldId {
    pub fn validate(&self) -> Result<(), LinError> {
        match *self {
            FieldId::Rationals => Ok(()),
            FieldId::PrimeField { p } if is_prime(p) => Ok(()),
            FieldId::PrimeField { p } => Err(LinError::NotPrime(p)),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldId::Rationals => 0,
            FieldId::PrimeField { p } => p,
        }
    }
}

impl std::fmt::Display for FieldId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldId::Rationals => write!(f, "Q"),
            FieldId::PrimeField { p } => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic of a field whose elements are plain values of type `E`.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type E: Clone + Default + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn id(&self) -> FieldId;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_i64(&self, v: i64) -> Self::E;
    /// Image of a rational number; fails when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::E, LinError>;
    fn to_rational(&self, a: &Self::E) -> BigRational;

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }
}

/// The prime field F_p with small modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self, LinError> {
        if !is_prime(p) {
            return Err(LinError::NotPrime(p));
        }
        if p >= (1u64 << 31) {
            return Err(LinError::ModulusTooLarge(p));
        }
        Ok(Fp { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for Fp {
    type E = u64;

    fn id(&self) -> FieldId {
        FieldId::PrimeField { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        self.pow(*a, self.p - 2)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, LinError> {
        let pb = BigInt::from(self.p);
        let reduce = |x: &BigInt| -> u64 {
            let r = ((x % &pb) + &pb) % &pb;
            r.to_u64().expect("residue fits")
        };
        let den = reduce(q.denom());
        if den == 0 {
            return Err(LinError::DenominatorVanishes(self.p));
        }
        Ok(self.mul(&reduce(q.numer()), &self.inv(&den)))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Q;

impl Field for Q {
    type E = BigRational;

    fn id(&self) -> FieldId {
        FieldId::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, LinError> {
        Ok(q.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

/// Parse "a", "-a" or "a/b" into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational, LinError> {
    let bad = || LinError::BadScalar(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational_is_integer(q: &BigRational) -> bool {
    q.denom().is_one() || q.denom().abs().is_one()
}
