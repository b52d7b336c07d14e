use stabkit::coeffsys::CoeffError;
use stabkit::exactlin::LinError;
use stabkit::finring::RingError;
use stabkit::funmod::FunError;
use stabkit::homology::HomError;
use stabkit::scomplex::ScError;

use crate::range::RangeError;

/// Exit status for a run whose checks found a violated invariant.
pub const EXIT_VIOLATION: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Help or version text requested.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Schema(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Compute(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Schema(_) => 3,
            CliError::Guard(_) => 4,
            CliError::Compute(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

fn ring_guard(e: &RingError) -> bool {
    matches!(e, RingError::Guard { .. })
}

fn sc_guard(e: &ScError) -> bool {
    matches!(e, ScError::Ring(r) if ring_guard(r))
}

fn fun_guard(e: &FunError) -> bool {
    matches!(e, FunError::Ring(r) if ring_guard(r))
}

fn coeff_guard(e: &CoeffError) -> bool {
    match e {
        CoeffError::Fun(x) => fun_guard(x),
        CoeffError::Sc(x) => sc_guard(x),
        CoeffError::Ring(x) => ring_guard(x),
        _ => false,
    }
}

fn hom_guard(e: &HomError) -> bool {
    match e {
        HomError::Guard(_) => true,
        HomError::Coeff(x) => coeff_guard(x),
        HomError::Fun(x) => fun_guard(x),
        HomError::Sc(x) => sc_guard(x),
        HomError::Ring(x) => ring_guard(x),
        _ => false,
    }
}

fn classify(guard: bool, msg: String) -> CliError {
    if guard {
        CliError::Guard(msg)
    } else {
        CliError::Compute(msg)
    }
}

macro_rules! impl_from {
    ($t:ty, $g:expr) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                classify($g(&e), e.to_string())
            }
        }
    };
}

impl_from!(RingError, ring_guard);
impl_from!(ScError, sc_guard);
impl_from!(FunError, fun_guard);
impl_from!(CoeffError, coeff_guard);
impl_from!(HomError, hom_guard);
impl_from!(LinError, |_: &LinError| false);

impl From<RangeError> for CliError {
    fn from(e: RangeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
