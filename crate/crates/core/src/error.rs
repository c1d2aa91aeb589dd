//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A shape was malformed (empty, zero extent, or unrepresentable cell count).
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// A cell reference fell outside its board.
    #[error("cell out of bounds: {0}")]
    OutOfBounds(String),

    /// A board exceeded a precomputation capacity guard.
    #[error("board has {cells} cells, exceeding the {limit}-cell capacity guard")]
    CapacityExceeded { cells: usize, limit: usize },

    /// An operation was asked for outside its mathematical domain
    /// (e.g. space diagonals of a non-cubic board).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input to an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A tour file failed to parse. Position is 1-based.
    #[error("parse error at line {line}, column {column}: {kind}")]
    Parse {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
}

/// The distinct ways a tour file can fail to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `ndkt v1`, found {found:?}")]
    BadHeader { found: String },

    #[error("expected `shape: <extents...>`, found {found:?}")]
    BadShapeLine { found: String },

    #[error("invalid number {token:?}")]
    BadToken { token: String },

    #[error("expected {expected} values for shape, found {found}")]
    WrongCellCount { expected: usize, found: usize },

    #[error("value {value} out of range 1..={max}")]
    OutOfRangeNumber { value: u64, max: usize },

    #[error("duplicate number {value}: already placed at {first}, repeated at {second}")]
    DuplicateNumber {
        value: u32,
        first: String,
        second: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, column, kind }
    }
}
