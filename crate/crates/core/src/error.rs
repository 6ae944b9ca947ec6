use std::fmt;

use crate::concept::Dialect;

/// Location inside a KB text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at {position}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        position: Position,
        expected: Vec<String>,
        found: String,
    },

    #[error("{constructor} is not allowed in dialect {dialect} (at {position})")]
    DialectViolation {
        dialect: Dialect,
        constructor: &'static str,
        position: Position,
    },

    #[error("unsupported concept shape: {0}")]
    UnsupportedShape(String),

    #[error("resource budget exceeded: {0}")]
    ResourceExceeded(String),

    #[error("not enough eligible exceptions: {required} required, {eligible} eligible")]
    NotEnoughExceptions { required: usize, eligible: usize },

    #[error("no revision found with total degree <= {max_total_degree} ({candidates} candidates tried)")]
    BudgetExceeded {
        max_total_degree: u32,
        candidates: usize,
    },

    #[error("the new belief is conflicting on its own")]
    ConflictingInput,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
