use thiserror::Error;

/// Errors shared across the crate.
///
/// Everything here is a caller-visible condition. The one exception is
/// [`Error::Internal`], which reports a broken internal consistency check
/// and always indicates a bug in this crate, never bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set is empty (n must be at least 1)")]
    EmptyGroundSet,

    #[error("invalid block-index sequence at position {position}: {value} exceeds the allowed maximum {max_allowed}")]
    InvalidRgs {
        position: usize,
        value: usize,
        max_allowed: usize,
    },

    #[error("element {element} appears in more than one block")]
    OverlappingElement { element: usize },

    #[error("element {element} is not covered by any block")]
    MissingElement { element: usize },

    #[error("element {element} is out of range for a ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("block {index} is empty")]
    EmptyBlock { index: usize },

    #[error("ground-set sizes differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point {point} is out of range for a ground set of size {n}")]
    PointOutOfRange { point: usize, n: usize },

    #[error(
        "table entry {value} at position {position} is out of range for a ground set of size {n}"
    )]
    EntryOutOfRange {
        position: usize,
        value: usize,
        n: usize,
    },

    #[error("{fine} does not refine {coarse}")]
    NotARefinement { fine: String, coarse: String },

    #[error("n = {n} exceeds the {what} ceiling of {ceiling} (use the force flag to override)")]
    CeilingExceeded {
        n: usize,
        ceiling: usize,
        what: &'static str,
    },

    #[error("partition family has no members")]
    EmptyFamily,

    #[error("family member {index} duplicates member {first}")]
    DuplicateFamilyMember { index: usize, first: usize },

    #[error("{op}: {message}")]
    Usage { op: &'static str, message: String },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
