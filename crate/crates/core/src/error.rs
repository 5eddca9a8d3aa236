use thiserror::Error;

use crate::semigroup::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by table construction, term handling and the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    SizeOverflow { what: &'static str, size: u128, cap: u128 },

    #[error("memory budget exceeded: need {needed} bytes, budget is {budget}")]
    MemoryBudgetExceeded { needed: u128, budget: u128 },

    #[error("not a congruence: {x} ~ {x2} and {y} ~ {y2} but the products are in different classes")]
    NotACongruence { x: usize, x2: usize, y: usize, y2: usize },

    #[error("not an ideal: {element} * {by} (on the {side}) leaves the set")]
    NotAnIdeal { element: usize, by: usize, side: Side },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("the universe is not a monoid")]
    NotAMonoid,

    #[error("unary restriction at variable x{var} is not induced by any power")]
    NotAPower { var: usize },

    #[error("cycle found among vertices {0:?}")]
    CycleFound(Vec<usize>),

    #[error("unknown element label {0:?}")]
    UnknownElement(String),

    #[error("element index {0} is out of range")]
    ElementOutOfRange(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("universe order mismatch: file has {found}, semigroup has {expected}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("minor constraints disagree at tuple {tuple:?}")]
    InconsistentConstraints { tuple: Vec<ElementId> },

    #[error("minor constraints leave tuple {tuple:?} undetermined")]
    Underdetermined { tuple: Vec<ElementId> },

    #[error("arity {got} is too small, need at least {min}")]
    ArityTooSmall { got: usize, min: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("nilpotency profile is undefined for this semigroup")]
    NotNilpotent,

    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
