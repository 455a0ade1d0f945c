use thiserror::Error;

use crate::frame::MAX_FRAME_SIZE;

/// Errors raised by frame construction, mass validation, and the
/// combination rules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate label `{0}` in frame")]
    DuplicateLabel(String),
    #[error("frame labels must be non-empty strings")]
    EmptyLabel,
    #[error("frame must have between 1 and {MAX_FRAME_SIZE} labels, got {0}")]
    FrameTooLarge(usize),
    #[error("frame has {n} singletons but at least {needed} are required")]
    FrameTooSmall { n: usize, needed: usize },
    #[error("label `{0}` is not in the frame")]
    UnknownLabel(String),
    #[error("subset or mass function does not belong to this frame")]
    FrameMismatch,
    #[error("masses must sum to 1, got {0}")]
    NotNormalized(f64),
    #[error("the empty set cannot carry mass in an input assignment")]
    EmptyFocal,
    #[error("focal masses must be strictly positive, got {0}")]
    NonPositiveMass(f64),
    #[error("combination requires at least two sources, got {0}")]
    TooFewSources(usize),
    #[error("total conflict: every focal product lands on the empty set")]
    TotalConflict,
    #[error("focal tuple space of size {0} exceeds the enumeration limit")]
    TupleSpaceTooLarge(u128),
    #[error("overlap degree is undefined when both subsets are empty")]
    UndefinedOverlap,
    #[error("delta must lie in [0, 1], got {0}")]
    BadDelta(f64),
    #[error("lambda weights must lie in [0, 1] and sum to 1, got ({0}, {1}, {2})")]
    BadLambdaWeights(f64, f64, f64),
    #[error("lambda policy assigned weight {weight} to an empty part")]
    InvalidLambdaPolicy { weight: f64 },
    #[error("sources are not fully conflicting: some cross-source focal pair intersects")]
    NotFullyConflicting,
    #[error("epsilon must lie in (0, 0.5), got {0}")]
    BadEpsilon(f64),
    #[error("focal count {requested} outside 1..={max}")]
    BadFocalCount { requested: usize, max: usize },
    #[error("transfer function broke its contract: {0}")]
    OracleContractBreach(String),
    #[error("rule `{rule}` takes exactly two sources, scenario has {got}")]
    ArityError { rule: String, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
