use std::fmt;

use thiserror::Error;

/// Domain errors: a precondition of an operation was violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word is not reduced")]
    NotReduced,
    #[error("word uses only letters of the designated subset")]
    InsideSubset,
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("word leaves the representable fragment: {0}")]
    OutsideFragment(String),
    #[error("decode: {0} is not in the image of the recoding")]
    NotInImage(String),
    #[error("substitution is not admissible: {0}")]
    NotAdmissible(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown family member {0}")]
    UnknownMember(String),
    #[error("family size must be at least 1")]
    EmptyFamily,
    #[error("map is not total on the family: {0}")]
    PartialMap(String),
    #[error("not a permutation of the family members")]
    NotPermutation,
}

pub type Result<T> = std::result::Result<T, Error>;

/// A DSL parse failure with a 1-based line/column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Failure of a textual input: either it does not parse, or it parses to
/// something the operation rejects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Domain(#[from] Error),
}
