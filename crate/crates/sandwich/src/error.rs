use thiserror::Error;

use crate::funcspace::Rat;

/// Errors shared by every module of the crate.
///
/// Operations that merely *answer* a question (order checks, semicontinuity
/// predicates, obstruction searches) report their findings in their `Ok`
/// value; an `Err` always means the inputs were unusable or an internal
/// invariant broke.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("{x} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain { x: Rat, lo: Rat, hi: Rat },

    #[error("no value at {x}: the point is removed from the underlying space")]
    RemovedPoint { x: Rat },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid function data: {0}")]
    Construction(String),

    #[error("precondition failed: {reason}{}", witness.as_ref().map(|w| format!(" (witness {w})")).unwrap_or_default())]
    Precondition {
        reason: String,
        witness: Option<Rat>,
    },

    #[error("not upper semicontinuous at {breakpoint} (deficit {deficit})")]
    NotUsc { breakpoint: Rat, deficit: Rat },

    #[error("not lower semicontinuous at {breakpoint} (deficit {deficit})")]
    NotLsc { breakpoint: Rat, deficit: Rat },

    #[error("generators do not separate points {x} and {y}")]
    Separation { x: usize, y: usize },

    #[error("lambda schedule exhausted at cap {cap}")]
    ScheduleCap { cap: Rat },

    #[error("product nodes are disabled in this evaluation")]
    ProductDisabled,

    #[error("certificate verification failed: {0}")]
    Certificate(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
