//! Stable ranges of the stability and congruence theorems, as exact integer bounds.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    /// Symmetric groups.
    A,
    /// Symmetric groups, range favouring large m.
    APrime,
    /// General linear groups over a ring with (SR_r).
    C,
    CPrime,
    /// Congruence subgroups.
    D,
    /// EL_n(R, α) into EL_n(R).
    ElCongruence,
    /// Subgroups of GL_n(R, α) cut out by K_1.
    K1Congruence,
}

impl Theorem {
    pub const ALL: [Theorem; 7] =
        [Theorem::A, Theorem::APrime, Theorem::C, Theorem::CPrime, Theorem::D, Theorem::ElCongruence, Theorem::K1Congruence];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::A => "A",
            Theorem::APrime => "A'",
            Theorem::C => "C",
            Theorem::CPrime => "C'",
            Theorem::D => "D",
            Theorem::ElCongruence => "13.1",
            Theorem::K1Congruence => "13.2",
        }
    }

    /// Whether the bound depends on r.
    pub fn uses_r(self) -> bool {
        !matches!(self, Theorem::A | Theorem::APrime)
    }

    /// Whether m is a free parameter (the last two only cover m = 0).
    pub fn uses_m(self) -> bool {
        !matches!(self, Theorem::ElCongruence | Theorem::K1Congruence)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, RangeError> {
        let t = match s.trim() {
            "A" | "a" => Theorem::A,
            "A'" | "A′" | "Aprime" | "A-prime" | "a'" => Theorem::APrime,
            "C" | "c" => Theorem::C,
            "C'" | "C′" | "Cprime" | "C-prime" | "c'" => Theorem::CPrime,
            "D" | "d" => Theorem::D,
            "13.1" => Theorem::ElCongruence,
            "13.2" => Theorem::K1Congruence,
            other => return Err(RangeError::UnknownTheorem(other.to_string())),
        };
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RangeError {
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RangeQuery {
    pub theorem: Theorem,
    pub k: i64,
    pub d: i64,
    pub m: i64,
    /// Stable rank index; ignored by the symmetric-group theorems.
    pub r: Option<i64>,
}

/// Where the stabilization map is known to be onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Surjection {
    /// At exactly this n.
    At(i64),
    /// For every n at or above this.
    From(i64),
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RangeBound {
    /// Isomorphism for every n ≥ iso.
    pub iso: i64,
    pub surj: Surjection,
}

impl fmt::Display for RangeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iso: n>={}", self.iso)?;
        match self.surj {
            Surjection::At(n) => write!(f, ", surj: n={n}"),
            Surjection::From(n) => write!(f, ", surj: n>={n}"),
            Surjection::None => Ok(()),
        }
    }
}

impl RangeQuery {
    pub fn validate(&self) -> Result<(), RangeError> {
        if self.k < 0 {
            return Err(RangeError::Invalid(format!("k = {} must be at least 0", self.k)));
        }
        let d_min = if self.theorem.uses_m() { -1 } else { 0 };
        if self.d < d_min {
            return Err(RangeError::Invalid(format!("d = {} must be at least {d_min} for {}", self.d, self.theorem)));
        }
        if self.m < 0 {
            return Err(RangeError::Invalid(format!("m = {} must be at least 0", self.m)));
        }
        if !self.theorem.uses_m() && self.m != 0 {
            return Err(RangeError::Invalid(format!("{} only covers m = 0", self.theorem)));
        }
        if self.theorem.uses_r() {
            match self.r {
                None => return Err(RangeError::Invalid(format!("{} needs r", self.theorem))),
                Some(r) if r < 2 => return Err(RangeError::Invalid(format!("r = {r} must be at least 2"))),
                _ => {}
            }
        }
        Ok(())
    }
}

pub fn range(q: &RangeQuery) -> Result<RangeBound, RangeError> {
    q.validate()?;
    let (k, d, m) = (q.k, q.d, q.m);
    let r = q.r.unwrap_or(0);
    let b = match q.theorem {
        Theorem::A => {
            let e = d.max(m - 1);
            RangeBound { iso: 2 * k + e + 2, surj: Surjection::At(2 * k + e + 1) }
        }
        Theorem::APrime => RangeBound { iso: m.max(2 * k + 2 * d + 2), surj: Surjection::From(m.max(2 * k + 2 * d)) },
        Theorem::C => RangeBound {
            iso: 2 * k + (2 * d + r).max(m + 1),
            surj: Surjection::At(2 * k + (2 * d + r - 1).max(m)),
        },
        Theorem::CPrime => RangeBound {
            iso: m.max(2 * k + 2 * d + r + 1),
            surj: Surjection::From(m.max(2 * k + 2 * d + r - 1)),
        },
        Theorem::D => RangeBound { iso: m.max(2 * k + 2 * d + 2 * r), surj: Surjection::None },
        Theorem::ElCongruence => RangeBound { iso: 2 * k + 2 * d + r + 1, surj: Surjection::None },
        Theorem::K1Congruence => RangeBound { iso: 2 * k + 2 * d + 2 * r, surj: Surjection::None },
    };
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(theorem: Theorem, k: i64, d: i64, m: i64, r: Option<i64>) -> RangeQuery {
        RangeQuery { theorem, k, d, m, r }
    }

    #[test]
    fn quoted_examples() {
        assert_eq!(range(&q(Theorem::A, 0, 1, 0, None)).unwrap().to_string(), "iso: n>=3, surj: n=2");
        assert_eq!(range(&q(Theorem::A, 2, 1, 0, None)).unwrap().to_string(), "iso: n>=7, surj: n=6");
        assert_eq!(range(&q(Theorem::C, 1, 1, 0, Some(2))).unwrap().iso, 6);
        assert_eq!(range(&q(Theorem::D, 0, 1, 0, Some(2))).unwrap().to_string(), "iso: n>=6");
    }

    #[test]
    fn invalid_queries() {
        assert!(range(&q(Theorem::A, -1, 0, 0, None)).is_err());
        assert!(range(&q(Theorem::A, 0, -2, 0, None)).is_err());
        assert!(range(&q(Theorem::C, 0, 0, 0, None)).is_err());
        assert!(range(&q(Theorem::C, 0, 0, 0, Some(1))).is_err());
        assert!(range(&q(Theorem::ElCongruence, 0, 0, 1, Some(2))).is_err());
        assert!(range(&q(Theorem::K1Congruence, 0, -1, 0, Some(2))).is_err());
        assert!("B".parse::<Theorem>().is_err());
        assert_eq!("A′".parse::<Theorem>().unwrap(), Theorem::APrime);
    }
}
